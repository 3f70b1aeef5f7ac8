"""Extended quantum current of the Gaussian packet.

    J^nu(x) = (hbar q / M) int ds |psi(x, s)|^2 Im d^nu log psi(x, s)
            = q int ds rho(x, s) V^nu(x, s)

Integrated over all world times this is the current of the whole trajectory
family: a conserved four-current whose charge ``int d^3x J^0`` is the same on
every time slice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .errors import GridTooSmall, QuadratureNotConverged
from .wavepacket import PacketParams, probability_current

S_MAX_GAMMA = 50.0  # default truncation |s| <= 50 / Gamma


def _peak_s(p: PacketParams, x) -> np.ndarray:
    """World time where the packet centre passes closest to `x` (width-weighted)."""
    w = 1.0 / p.sigma_i**2
    den = np.sum(w * p.u**2)
    if den == 0:
        return np.zeros(np.shape(x)[:-1])
    return np.sum(w * p.u * x, axis=-1) / den


def quantum_current(x, p: PacketParams, q: float = 1.0, epsrel: float = 1e-10,
                    s_max: float | None = None) -> np.ndarray:
    """s-quadrature of the current at real points ``x`` (..., 4).

    The integrand decays like ``(Gamma s)^-4`` once the packet has spread
    past the field point, so the range is cut at ``S_max = 50 / Gamma_min``
    by default, with break points at the packet-centre crossing times.
    """
    x = np.asarray(x, dtype=float)
    gmin = float(np.min(p.gamma))
    smax = S_MAX_GAMMA / gmin if s_max is None else float(s_max)
    peaks = np.atleast_1d(_peak_s(p, x)).ravel()
    pts = sorted({float(np.clip(v, -smax, smax)) for v in
                  (peaks.min(), np.median(peaks), peaks.max())})
    pts = [v for v in pts if -smax < v < smax]

    def integrand(s):
        return probability_current(p, x, s)

    val, err, info = quad_vec(integrand, -smax, smax, epsrel=epsrel, epsabs=0.0, norm="max",
                              points=pts or None, limit=20000, full_output=True)
    if not info.success:
        raise QuadratureNotConverged(f"s-quadrature: {info.message}")
    return q * val


@dataclass(frozen=True)
class GridSpec:
    """Uniform 3D grid, ``half_width`` and ``spacing`` per spatial axis."""

    half_width: np.ndarray
    spacing: np.ndarray

    @classmethod
    def for_packet(cls, p: PacketParams, half_width_sigmas: float = 8.0, points_per_sigma: float = 2.0):
        sig = p.sigma_i[1:]
        return cls(half_width_sigmas * sig, sig / points_per_sigma)

    def axes(self) -> list[np.ndarray]:
        out = []
        for hw, h in zip(np.broadcast_to(self.half_width, 3), np.broadcast_to(self.spacing, 3)):
            n = int(round(hw / h))
            out.append(np.arange(-n, n + 1) * h)
        return out


def charge_normalization(p: PacketParams, q: float = 1.0, x0: float = 0.0,
                         grid: GridSpec | None = None, epsrel: float = 1e-10) -> float:
    """``Q = int d^3x J^0(x0, x)`` by the trapezoid rule on a centred grid.

    The grid is centred on the packet's spatial position at time ``x0``.
    """
    grid = GridSpec.for_packet(p) if grid is None else grid
    if np.any(2 * np.broadcast_to(grid.half_width, 3) < 8 * p.sigma_i[1:]):
        raise GridTooSmall("grid must span at least 8 sigma per axis")
    centre = p.u[1:] * x0 / p.u[0] if p.u[0] != 0 else np.zeros(3)
    ax = grid.axes()
    X1, X2, X3 = np.meshgrid(*[a + c for a, c in zip(ax, centre)], indexing="ij")
    pts = np.stack([np.full(X1.shape, float(x0)), X1, X2, X3], axis=-1).reshape(-1, 4)
    J0 = quantum_current(pts, p, q, epsrel=epsrel)[:, 0]
    dv = float(np.prod([a[1] - a[0] for a in ax]))
    return float(np.sum(J0) * dv)


def calibrate_charge(p: PacketParams, Q: float, **kw) -> float:
    """The parameter ``q`` that makes the total charge equal `Q`."""
    return Q / charge_normalization(p, 1.0, **kw)


def continuity_residual(x, p: PacketParams, q: float = 1.0, h: float | None = None) -> float:
    """``|d_nu J^nu|`` relative to the size of its terms, by fourth-order central differences.

    The scale is ``sum_nu |d_nu J^nu|``, floored at ``max|J| / sigma_min`` so
    that stationary points of the current (where every term vanishes) do not
    turn quadrature noise into an O(1) ratio.
    """
    x = np.asarray(x, dtype=float)
    hh = 0.05 * float(np.min(p.sigma_i)) if h is None else h
    offs = np.array([-2, -1, 1, 2])
    coef = np.array([1, -8, 8, -1]) / (12 * hh)
    pts = []
    for nu in range(4):
        for o in offs:
            y = x.copy()
            y[nu] += o * hh
            pts.append(y)
    J = quantum_current(np.array(pts), p, q, epsrel=1e-12).reshape(4, 4, 4)
    terms = np.array([coef @ J[nu, :, nu] for nu in range(4)])
    scale = max(float(np.sum(np.abs(terms))), float(np.max(np.abs(J))) / float(np.min(p.sigma_i)))
    return float(abs(terms.sum()) / scale)


# --- spectral non-radiation indicator ----------------------------------------

@dataclass(frozen=True)
class SpectralResult:
    k: np.ndarray
    values: np.ndarray  # |J~(k)| (Euclidean norm over the four components)
    floor: np.ndarray  # round-off floor, eps times the sum of absolute terms
    Q: float  # J~^0 at k = 0


def _axis_sums(p: PacketParams, mu: int, grid, k_mu, s, weight):
    """Per-axis grid sums ``sum_x h w(x) e^{i eps k x} rho(x, s)`` and with ``V``."""
    g, sig, u = p.gamma[mu], p.sigma_i[mu], p.u[mu]
    h = grid[1] - grid[0]
    f = np.sqrt(1.0 + (g * s) ** 2)[:, None]
    a = (grid[None, :] - u * s[:, None]) / f
    rho = np.exp(-0.5 * (a / sig) ** 2) / (math.sqrt(2 * math.pi) * sig * f) * weight * h
    v = u + a * g**2 * s[:, None] / f
    sign = 1.0 if mu == 0 else -1.0
    ph = np.exp(1j * sign * np.asarray(k_mu)[:, None] * grid[None, :])  # (K, n)
    T = ph @ rho.T  # (K, S)
    TV = ph @ (rho * v).T
    A = np.abs(rho).sum(axis=1)[None, :]
    AV = np.abs(rho * v).sum(axis=1)[None, :]
    return T, TV, A, AV


def windowed_current_transform(p: PacketParams, ks, q: float = 1.0, spacing: float | None = None,
                               window: float | None = None, ds: float | None = None) -> SpectralResult:
    """Time-windowed Fourier transform of the current on a uniform grid.

    ``J~^nu(k) = sum_x h^4 w(x0) e^{i k.x} J^nu(x) / sum_x0 h w(x0)`` with a
    Gaussian window ``w`` of width `window`, so that ``J~^0(0) = Q``.  The
    transform factorizes over axes, so each axis is summed separately and the
    s-integral is done last by the trapezoid rule.
    """
    ks = np.atleast_2d(np.asarray(ks, dtype=float))
    sig = p.sigma_i
    h = float(np.min(sig)) / 2 if spacing is None else float(spacing)
    T = 12.5 * float(sig[0]) if window is None else float(window)
    u0 = p.u[0]
    t_half = 9.0 * T
    s_half = t_half / u0 + 8 * sig[0] / u0
    gmax = float(np.max(p.gamma))
    if ds is None:
        # resolve the crossing width sigma_0 / u0 and the phase rate k.u
        rate = float(np.max(np.abs(ks[:, 0]) * abs(u0) + np.linalg.norm(ks[:, 1:], axis=1)
                            * np.linalg.norm(p.u[1:])))
        ds = min(float(sig[0]) / (2 * u0), math.pi / (4 * rate) if rate > 0 else math.inf)
    s = np.arange(-math.ceil(s_half / ds), math.ceil(s_half / ds) + 1) * ds
    grids = []
    n0 = math.ceil(t_half / h)
    grids.append(np.arange(-n0, n0 + 1) * h)
    for mu in (1, 2, 3):
        reach = 9.0 * sig[mu] * math.sqrt(1 + (gmax * s_half) ** 2) + abs(p.u[mu]) * s_half
        n = math.ceil(reach / h)
        grids.append(np.arange(-n, n + 1) * h)
    wt = np.exp(-0.5 * (grids[0] / T) ** 2)
    wt = wt / (wt.sum() * h)
    sums = [_axis_sums(p, 0, grids[0], ks[:, 0], s, wt)]
    sums += [_axis_sums(p, mu, grids[mu], ks[:, mu], s, 1.0) for mu in (1, 2, 3)]
    vals = np.empty((ks.shape[0], 4), dtype=complex)
    floor = np.zeros(ks.shape[0])
    for nu in range(4):
        prod = np.ones((ks.shape[0], s.size), dtype=complex)
        absprod = np.ones((1, s.size))
        for mu in range(4):
            T_, TV, A, AV = sums[mu]
            prod = prod * (TV if mu == nu else T_)
            absprod = absprod * (AV if mu == nu else A)
        vals[:, nu] = q * ds * prod.sum(axis=1)
        floor += (np.finfo(float).eps * abs(q) * ds * absprod.sum(axis=1)) ** 2
    # DC value from the same grids, for reporting Q
    dc = windowed_dc(p, q, grids, s, ds, wt)
    return SpectralResult(ks, np.linalg.norm(vals, axis=1), np.sqrt(floor) * np.ones(ks.shape[0]), dc)


def windowed_dc(p, q, grids, s, ds, wt) -> float:
    prod = np.ones(s.size)
    for mu in range(4):
        T_, TV, _, _ = _axis_sums(p, mu, grids[mu], np.zeros(1), s, wt if mu == 0 else 1.0)
        prod = prod * (TV[0] if mu == 0 else T_[0]).real
    return float(q * ds * prod.sum())


def null_directions(n: int, omega) -> np.ndarray:
    """Forward null wave vectors ``omega (1, n_hat)`` on a Fibonacci sphere."""
    i = np.arange(n) + 0.5
    ct = 1 - 2 * i / n
    phi = math.pi * (1 + 5**0.5) * i
    st = np.sqrt(1 - ct**2)
    nh = np.stack([st * np.cos(phi), st * np.sin(phi), ct], axis=-1)
    om = np.broadcast_to(np.asarray(omega, dtype=float), (n,))
    return np.concatenate([om[:, None], om[:, None] * nh], axis=1)


def spectral_radiation_check(p: PacketParams, null_ks: int = 16, q: float = 1.0, spacing: float | None = None,
                             omegas=None) -> dict:
    """Largest windowed ``|J~(k)|`` over forward null k, with floor and a spacelike contrast."""
    sig = float(np.min(p.sigma_i))
    if omegas is None:
        omegas = np.linspace(1.0, 3.0, null_ks) / sig
    kn = null_directions(null_ks, omegas)
    ksp = kn.copy()
    ksp[:, 0] = 0.0
    r = windowed_current_transform(p, np.concatenate([kn, ksp]), q, spacing)
    m = null_ks
    return {
        "Q": r.Q,
        "null_max": float(np.max(r.values[:m])),
        "null_floor": float(np.max(r.floor[:m])),
        "null_ratio": float(np.max(r.values[:m] / r.floor[:m])),
        "spacelike_min": float(np.min(r.values[m:])),
        "spacelike_floor": float(np.max(r.floor[m:])),
    }
