"""Stueckelberg free-particle Gaussian wavepacket.

The packet is a product of four one-dimensional Gaussians.  The time factor
solves the ordinary Schroedinger equation in ``s``; the space factors solve
its complex conjugate (mass ``-M``), so their complex widths evolve with the
opposite sign:

    Sigma_0(s) = sigma_0 (1 + i Gamma_0 s),   Sigma_j(s) = sigma_j (1 - i Gamma_j s)

with ``Gamma_mu = hbar / (2 M sigma_mu^2)``.  ``|Sigma_mu(s)|`` is the
position spread at world time ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NodalPoint
from .minkowski import minkowski_dot
from .tolerances import DEFAULT

# +1 for the time axis (Schroedinger sign), -1 for space axes (conjugate equation)
AXIS_SIGN = np.array([1.0, -1.0, -1.0, -1.0])

# The complex width carries hbar s / (2 M sigma^2), not hbar s / (M sigma^2).
# Only the former makes |Sigma| the spread and the closed-form trajectory exact.
WIDTH_RATE_FACTOR = 0.5


@dataclass(frozen=True)
class PacketParams:
    """Gaussian packet: drift ``u = hbar k / M``, initial widths, mass and hbar."""

    u: np.ndarray
    sigma_i: np.ndarray
    M: float = 1.0
    hbar: float = 1.0
    gamma: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(4)
        sig = np.asarray(self.sigma_i, dtype=float)
        if sig.ndim == 0:
            sig = np.full(4, float(sig))
        sig = sig.reshape(4)
        if np.any(~np.isfinite(u)):
            raise ValueError("u must be finite")
        if np.any(sig <= 0) or np.any(~np.isfinite(sig)):
            raise ValueError("sigma_i must be positive")
        if not self.M > 0:
            raise ValueError("M must be positive")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        u.setflags(write=False)
        sig.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "sigma_i", sig)
        gamma = WIDTH_RATE_FACTOR * self.hbar / (self.M * sig**2)
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)

    @property
    def k(self) -> np.ndarray:
        return self.M * self.u / self.hbar

    @property
    def equal_gamma(self) -> bool:
        return bool(np.allclose(self.gamma, self.gamma[0], rtol=1e-12, atol=0))

    def to_dict(self) -> dict:
        return {
            "u": [float(v) for v in self.u],
            "sigmaI": [float(v) for v in self.sigma_i],
            "M": float(self.M),
            "hbar": float(self.hbar),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PacketParams":
        return cls(u=d["u"], sigma_i=d["sigmaI"], M=d.get("M", 1.0), hbar=d.get("hbar", 1.0))


def sigma_complex(p: PacketParams, s, mu: int | None = None):
    """Complex width ``Sigma_mu(s)``; all four axes when `mu` is None."""
    s = np.asarray(s, dtype=float)
    if mu is None:
        return p.sigma_i * (1.0 + 1j * AXIS_SIGN * p.gamma * s[..., None])
    return p.sigma_i[mu] * (1.0 + 1j * AXIS_SIGN[mu] * p.gamma[mu] * s)


def sigma_abs(p: PacketParams, s, mu: int | None = None):
    """Position spread ``sigma_mu(s) = sigma_I (1 + Gamma^2 s^2)^{1/2}``."""
    s = np.asarray(s, dtype=float)
    if mu is None:
        return p.sigma_i * np.sqrt(1.0 + (p.gamma * s[..., None]) ** 2)
    return p.sigma_i[mu] * np.sqrt(1.0 + (p.gamma[mu] * s) ** 2)


def log_psi_factors(p: PacketParams, x, s) -> np.ndarray:
    """Per-axis ``log psi_mu(x^mu, s)``, taken analytically (no 2 pi jumps).

    Returns an array of shape ``broadcast(x[..., 0], s) + (4,)``.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)[..., None]
    Sig = p.sigma_i * (1.0 + 1j * AXIS_SIGN * p.gamma * s)
    y = x - p.u * s
    # k^a (x_a - u_a s / 2) split per axis: eta_aa k^a (x^a - u^a s / 2)
    phase = AXIS_SIGN * p.k * (x - 0.5 * p.u * s)
    return (-0.25 * np.log(2 * np.pi) - 0.5 * np.log(Sig)
            - y**2 / (4.0 * Sig * p.sigma_i) + 1j * phase)


def log_psi(p: PacketParams, x, s):
    return np.sum(log_psi_factors(p, x, s), axis=-1)


def psi(p: PacketParams, x, s):
    """Wavefunction value ``prod_mu psi_mu(x^mu, s)``; normalized in 4D."""
    return np.exp(log_psi(p, x, s))


def density(p: PacketParams, x, s):
    """Probability density ``|psi|^2``."""
    return np.exp(2.0 * np.real(log_psi(p, x, s)))


def grad_log_psi(p: PacketParams, x, s) -> np.ndarray:
    """``d log psi / d x^mu`` (lower-index derivative), closed form."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)[..., None]
    Sig = p.sigma_i * (1.0 + 1j * AXIS_SIGN * p.gamma * s)
    y = x - p.u * s
    return -y / (2.0 * Sig * p.sigma_i) + 1j * AXIS_SIGN * p.k


def _check_nodal(p: PacketParams, x, s, tol: float) -> None:
    log_mod = np.real(log_psi(p, x, s))
    if np.any(log_mod < np.log(tol)):
        raise NodalPoint("|psi| below the nodal threshold")


def bohm_action(p: PacketParams, x, s, tol: float = DEFAULT.nodal):
    """``S_B = hbar Im log psi``, summed per factor so the phase is continuous.

    Includes the s-only phase of the normalization, so it equals hbar times
    the continuous argument of psi (modulo nothing else).
    """
    _check_nodal(p, x, s, tol)
    return p.hbar * np.sum(np.imag(log_psi_factors(p, x, s)), axis=-1)


def velocity_field(p: PacketParams, x, s, tol: float = DEFAULT.nodal) -> np.ndarray:
    """Bohmian velocity ``V^mu = d^mu S_B / M`` for the free packet."""
    _check_nodal(p, x, s, tol)
    grad = p.hbar * np.imag(grad_log_psi(p, x, s))
    return AXIS_SIGN * grad / p.M


def probability_current(p: PacketParams, x, s) -> np.ndarray:
    """``rho V`` at a single world time."""
    rho = density(p, x, s)
    return rho[..., None] * AXIS_SIGN * p.hbar * np.imag(grad_log_psi(p, x, s)) / p.M


def mass_squared(p: PacketParams, trajectory, s):
    """``m^2(s) = M^2 V.V`` along a trajectory and its timelike/spacelike class.

    Negative values (tachyonic tail) are returned and flagged, not dropped.
    """
    from .trajectory import velocity  # local: trajectory imports this module

    V = velocity(trajectory, s)
    m2 = p.M**2 * minkowski_dot(V, V)
    if np.iscomplexobj(m2):
        if np.any(np.abs(m2.imag) > 1e-12 * np.maximum(1.0, np.abs(m2.real))):
            raise ValueError("trajectory is not real at s")
        m2 = m2.real
    kind = np.where(m2 > 0, "timelike", np.where(m2 < 0, "spacelike", "null"))
    if kind.ndim == 0:
        kind = str(kind)
    return m2, kind
