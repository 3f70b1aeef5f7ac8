"""Generalized analytic continuation (GAN) of multi-sheeted functions.

A function with N sheet values ``f_1..f_N`` at a point is replaced by the
weighted combination ``sum_i P_i f_i`` with ``sum_i P_i = 1``.  For the
square root the two sheets differ only by sign, so every combination is a
multiple ``(P_1 - P_2) sqrt(z)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AtBranchPoint, DimensionMismatch, WeightsNotNormalized, ZeroAmplitudeAxis
from .tolerances import DEFAULT
from .trajectory import GaussTrajectory


@dataclass(frozen=True)
class GanWeights:
    weights: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex))
        if w.ndim != 1 or w.size < 1:
            raise DimensionMismatch("weights must be a non-empty 1-D sequence")
        if abs(np.sum(w) - 1.0) > DEFAULT.weights_sum * max(1.0, float(np.sum(np.abs(w)))):
            raise WeightsNotNormalized(f"weights sum to {np.sum(w)!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.size


def combine(w: GanWeights, values) -> complex:
    v = np.atleast_1d(np.asarray(values, dtype=complex))
    if v.shape != w.weights.shape:
        raise DimensionMismatch(f"{len(w)} weights for {v.size} sheet values")
    return complex(np.dot(w.weights, v))


def sqrt_sheets(z: complex) -> np.ndarray:
    z = complex(z)
    if z == 0:
        raise AtBranchPoint("sqrt has a branch point at z = 0")
    r = np.sqrt(z)
    return np.array([r, -r])


def check_nonlinearity_guard(kind: str, sheet_counts) -> str:
    """Whether ``GAN(a op b) = GAN(a) op GAN(b)`` may be assumed.

    Safe only if at least one operand is single-sheeted.
    """
    if kind not in ("sum", "product"):
        raise ValueError(f"unknown composition {kind!r}")
    counts = [int(n) for n in sheet_counts]
    if any(n < 1 for n in counts):
        raise ValueError("sheet counts must be positive")
    return "allowed" if min(counts) == 1 else "forbidden"


@dataclass(frozen=True)
class GanFamily:
    """Trajectory family generated from a seed; members indexed by amplitude.

    Only real amplitudes are Bohmian.  Complex amplitudes are refused unless
    ``allow_complex`` is set.
    """

    seed: GaussTrajectory
    allow_complex: bool = False

    def member(self, amp) -> GaussTrajectory:
        amp = np.asarray(amp, dtype=complex)
        if not self.allow_complex and np.any(amp.imag != 0):
            raise ValueError("complex amplitude requested from a Bohmian-only family")
        return GaussTrajectory(self.seed.params, amp, self.seed.offset)

    def members(self, amps) -> list[GaussTrajectory]:
        return [self.member(a) for a in np.asarray(amps)]

    def is_bohmian(self, amp) -> bool:
        return not np.any(np.asarray(amp, dtype=complex).imag != 0)


def gan_trajectory_family(t: GaussTrajectory, allow_complex: bool = False) -> GanFamily:
    if np.any(t.amp == 0):
        raise ZeroAmplitudeAxis("seed amplitude must be nonzero on every axis")
    return GanFamily(t, allow_complex)
