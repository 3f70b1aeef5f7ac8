"""Closed-form Bohmian trajectories of the Gaussian packet.

Every member of the family is

    X^mu(s) = u^mu s + A^mu f_mu(s) + O^mu,   f_mu(s) = (1 + Gamma_mu^2 s^2)^{1/2}

with ``f_mu`` on its principal branch (``f_mu(0) = +1``, cuts running from
``+-i/Gamma_mu`` out along the imaginary axis).  The second Riemann sheet is
the same formula with ``A -> -A``.  Real ``A`` gives a Bohmian trajectory;
complex ``A`` is a generalized continuation of one.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np

from .errors import AtBranchPoint, PathThroughBranchPoint, StepTooCoarse
from .minkowski import boost, minkowski_dot, wedge
from .tolerances import DEFAULT
from .wavepacket import PacketParams


@dataclass(frozen=True)
class GaussTrajectory:
    params: PacketParams
    amp: np.ndarray
    offset: np.ndarray = field(default_factory=lambda: np.zeros(4, dtype=complex))

    def __post_init__(self):
        amp = np.asarray(self.amp, dtype=complex).reshape(4)
        off = np.zeros(4, dtype=complex) if self.offset is None else np.asarray(self.offset, dtype=complex).reshape(4)
        if not (np.all(np.isfinite(amp)) and np.all(np.isfinite(off))):
            raise ValueError("amplitude and offset must be finite")
        amp.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "amp", amp)
        object.__setattr__(self, "offset", off)

    def other_sheet(self) -> "GaussTrajectory":
        return replace(self, amp=-self.amp)

    def on_sheet(self, sheet: int) -> "GaussTrajectory":
        return self if sheet > 0 else self.other_sheet()

    @property
    def is_real(self) -> bool:
        return not (np.any(self.amp.imag != 0) or np.any(self.offset.imag != 0))


def kerr_newman_bohm(params: PacketParams, x0, offset, sheet: int = 1) -> GaussTrajectory:
    """Member with the spin offset inside the amplitude, ``+-(X_B(0) + O) f(s)``.

    The imaginary part then grows linearly with s, so this is a demonstration
    of the rejected construction; the physical variant keeps the offset
    constant (``GaussTrajectory(params, x0, offset)``).
    """
    amp = sheet * (np.asarray(x0, dtype=complex) + np.asarray(offset, dtype=complex))
    return GaussTrajectory(params, amp)


def _f(t: GaussTrajectory, s, tol: float):
    s = np.asarray(s, dtype=complex)[..., None]
    g = 1.0 + (t.params.gamma * s) ** 2
    if np.any(np.abs(g) < tol):
        raise AtBranchPoint("world time at a branch point of the trajectory")
    return np.sqrt(g), s


def position(t: GaussTrajectory, s, tol: float = DEFAULT.branch_point) -> np.ndarray:
    f, s_ = _f(t, s, tol)
    return t.params.u * s_ + t.amp * f + t.offset


def velocity(t: GaussTrajectory, s, tol: float = DEFAULT.branch_point) -> np.ndarray:
    f, s_ = _f(t, s, tol)
    return t.params.u + t.amp * t.params.gamma**2 * s_ / f


def acceleration(t: GaussTrajectory, s, tol: float = DEFAULT.branch_point) -> np.ndarray:
    f, _ = _f(t, s, tol)
    return t.amp * t.params.gamma**2 / f**3


def branch_points(t: GaussTrajectory) -> np.ndarray:
    """Per-axis pair ``(+i/Gamma, -i/Gamma)``; shape (4, 2)."""
    b = 1j / t.params.gamma
    return np.stack([b, -b], axis=-1)


class SheetContinuation(NamedTuple):
    position: np.ndarray
    flips: np.ndarray  # per-axis parity: 1 where the continued f is minus the principal one


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = min(1.0, max(0.0, ((p - a) * np.conj(d)).real / abs(d) ** 2))
    return abs(a + t * d - p)


def track_sqrt(g: Callable[[complex], complex], path, w0: complex | None = None,
               branch_pts=(), tol=DEFAULT, max_depth: int = 40) -> complex:
    """Continue ``w = sqrt(g(s))`` along a polyline by stepwise root tracking.

    At each step the root of ``w^2 = g`` closest to the first-order predictor
    is taken.  Steps whose ambiguity ratio exceeds ``tol.refine_ratio`` are
    bisected; a step that stays ambiguous beyond ``max_depth`` bisections or
    above ``tol.coarse_ratio`` raises StepTooCoarse.
    """
    path = [complex(z) for z in np.asarray(path, dtype=complex).ravel()]
    if not path:
        raise ValueError("empty path")
    for a, b in zip(path[:-1], path[1:]):
        for bp in branch_pts:
            if _segment_distance(a, b, complex(bp)) <= tol.path_clearance:
                raise PathThroughBranchPoint(f"segment {a}->{b} passes {bp}")
    w = complex(np.sqrt(complex(g(path[0])))) if w0 is None else complex(w0)

    def step(a: complex, b: complex, w: complex, depth: int) -> complex:
        ga, gb = complex(g(a)), complex(g(b))
        if abs(gb) <= tol.path_clearance**2:
            raise PathThroughBranchPoint(f"path hits a zero of g at {b}")
        pred = w + (gb - ga) / (2.0 * w)
        r = complex(np.sqrt(gb))
        cand, other = (r, -r) if abs(pred - r) <= abs(pred + r) else (-r, r)
        ratio = abs(pred - cand) / abs(pred - other)
        if ratio < tol.refine_ratio:
            return cand
        if depth >= max_depth:
            if ratio > tol.coarse_ratio:
                raise StepTooCoarse(f"root ambiguity {ratio:.3g} on {a}->{b}")
            return cand
        mid = 0.5 * (a + b)
        return step(mid, b, step(a, mid, w, depth + 1), depth + 1)

    for a, b in zip(path[:-1], path[1:]):
        w = step(a, b, w, 0)
    return w


def continue_sheet(t: GaussTrajectory, path, tol=DEFAULT) -> SheetContinuation:
    """Analytic continuation of the trajectory along a polyline in complex s.

    Returns the continued position at the path's end and, per axis, whether
    the continued square root ended on the other sheet.
    """
    path = np.asarray(path, dtype=complex).ravel()
    gam = t.params.gamma
    f_end = np.empty(4, dtype=complex)
    for mu in range(4):
        gm = gam[mu]
        bps = (1j / gm, -1j / gm)
        f_end[mu] = track_sqrt(lambda s, gm=gm: 1.0 + (gm * s) ** 2, path, 1.0 + 0j
                               if path[0] == 0 else None, branch_pts=bps, tol=tol)
    s_end = path[-1]
    principal = np.sqrt(1.0 + (gam * s_end) ** 2)
    flips = (np.abs(f_end - principal) > np.abs(f_end + principal)).astype(int)
    X = t.params.u * s_end + t.amp * f_end + t.offset
    return SheetContinuation(X, flips)


def circle_path(center: complex, radius: float, n: int = 10_000, start_angle: float = 0.0) -> np.ndarray:
    """Closed counter-clockwise polyline (first point repeated at the end)."""
    th = start_angle + np.linspace(0.0, 2 * np.pi, n + 1)
    return center + radius * np.exp(1j * th)


def classify(t: GaussTrajectory, s_range=(-50.0, 50.0), samples: int = 2001) -> str:
    """``'timelike'``, ``'spacelike-somewhere'`` or ``'complex'``."""
    if not t.is_real:
        return "complex"
    s = np.linspace(s_range[0], s_range[1], samples)
    V = velocity(t, s)
    vv = minkowski_dot(V, V).real
    if t.params.equal_gamma:
        # V = u + Gamma A w with w = Gamma s / f in (-1, 1): check the limits too
        vv_lim = _vv_limits(t)
        vv = np.concatenate([vv, vv_lim])
    return "timelike" if np.all(vv > 0) else "spacelike-somewhere"


def _vv_limits(t: GaussTrajectory) -> np.ndarray:
    u = t.params.u
    a = (t.amp.real * t.params.gamma[0])
    w = np.array([-1.0, 1.0])
    cand = list(w)
    aa = minkowski_dot(a, a)
    if aa != 0:
        w0 = -minkowski_dot(u, a) / aa
        if -1 < w0 < 1:
            cand.append(w0)
    w = np.array(cand)
    return minkowski_dot(u, u) + 2 * w * minkowski_dot(u, a) + w**2 * aa


def is_timelike(params: PacketParams, amps) -> np.ndarray:
    """Vectorized timelike test for real amplitudes, equal-Gamma packets.

    ``V.V = u.u + 2 w u.(Gamma A) + w^2 (Gamma A)^2`` with ``w`` in [-1, 1]
    must stay positive.
    """
    amps = np.asarray(amps, dtype=float)
    if not params.equal_gamma:
        return np.array([classify(GaussTrajectory(params, a)) == "timelike" for a in amps])
    u = params.u
    a = amps * params.gamma[0]
    uu = minkowski_dot(u, u)
    ua = minkowski_dot(a, u)
    aa = minkowski_dot(a, a)
    ok = (uu + 2 * ua + aa > 0) & (uu - 2 * ua + aa > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        w0 = np.where(aa != 0, -ua / aa, 2.0)
    inside = (w0 > -1) & (w0 < 1)
    vertex = uu + 2 * w0 * ua + w0**2 * aa
    return ok & (~inside | (vertex > 0))


def pair_momentum_avg(t: GaussTrajectory, s) -> np.ndarray:
    """``1/2 M (V_+ + V_-)``; equals ``M u`` identically."""
    return 0.5 * t.params.M * (velocity(t, s) + velocity(t.other_sheet(), s))


def pair_angular_momentum_avg(t: GaussTrajectory, s) -> np.ndarray:
    """``1/2 (X_+ ^ V_+ + X_- ^ V_-)`` about the packet centre at s = 0.

    Vanishes when all Gamma_mu are equal; otherwise the ``A ^ A`` term
    survives and the matrix is returned as is.
    """
    m = t.other_sheet()
    return 0.5 * (wedge(position(t, s), velocity(t, s)) + wedge(position(m, s), velocity(m, s)))


def boosted_spin_offset(J, m: float, u) -> np.ndarray:
    """Imaginary Kerr-Newman displacement ``Lambda(u) (0, iJ/m)``."""
    rest = np.concatenate([[0.0], 1j * np.asarray(J, dtype=float) / m])
    return boost(u) @ rest


def nr_gaussian_trajectory(x0, u, sigma0: float, m: float, hbar: float, t) -> np.ndarray:
    """Non-relativistic Gaussian Bohm trajectory, ``u t + x0 (1 + (hbar t / 2 m sigma0^2)^2)^{1/2}``."""
    if not sigma0 > 0:
        raise ValueError("sigma0 must be positive")
    t = np.asarray(t, dtype=float)[..., None]
    spread = np.sqrt(1.0 + (hbar * t / (2 * m * sigma0**2)) ** 2)
    return np.asarray(u, dtype=float) * t + np.asarray(x0, dtype=float) * spread
