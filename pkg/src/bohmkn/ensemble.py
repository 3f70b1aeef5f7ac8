"""Bohmian-weighted trajectory ensembles.

Amplitudes are drawn from the initial density ``|psi(x, 0)|^2``, a product of
centred Gaussians of width ``sigma_I``.  Each draw ``A`` is paired with
``-A`` (antithetic sampling), which is also the second Riemann sheet.

Random numbers come from a counter-based generator: sample ``k`` is a pure
function of ``(seed, k)``, so results do not depend on thread count or
evaluation order.  Sums over members use a fixed pairwise tree.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import FilterStarvation, WeightsNotNormalized
from .lienard_wiechert import lw_faraday_state, retarded_roots_batch
from .minkowski import electric_magnetic
from .tolerances import DEFAULT
from .trajectory import is_timelike
from .wavepacket import PacketParams

BLOCK = 1024
MAX_REDRAWS = 64
WEIGHTINGS = ("bohm", "equalPair", "custom")


@dataclass(frozen=True)
class EnsembleSpec:
    packet: PacketParams
    N: int = 1000
    seed: int = 0
    weighting: str = "bohm"
    timelike_filter: bool = True
    q: float = 1.0
    amps: np.ndarray | None = None  # equalPair: one amplitude; custom: (n, 4)
    weights: np.ndarray | None = None  # custom only
    offset: np.ndarray | None = None
    antithetic: bool = True

    def __post_init__(self):
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")
        if self.weighting == "bohm" and self.N < 1:
            raise ValueError("N must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.weighting == "equalPair" and self.amps is None:
            raise ValueError("equalPair weighting needs an amplitude")
        if self.weighting == "custom":
            if self.amps is None or self.weights is None:
                raise ValueError("custom weighting needs amplitudes and weights")
            w = np.asarray(self.weights, dtype=float)
            if abs(w.sum() - 1.0) > 1e-12:
                raise WeightsNotNormalized(f"custom weights sum to {w.sum()!r}")


@dataclass
class Members:
    amps: np.ndarray
    weights: np.ndarray
    rejected: int = 0
    draws: int = 0


def _normals(seed: int, index: np.ndarray, attempt: int) -> np.ndarray:
    """Standard normal 4-vectors for base indices, one Philox stream per block."""
    index = np.asarray(index, dtype=np.int64)
    out = np.empty((index.size, 4))
    blocks = index // BLOCK
    for b in np.unique(blocks):
        bitgen = np.random.Philox(key=int(seed), counter=[0, 0, attempt, int(b)])
        z = np.random.Generator(bitgen).standard_normal((BLOCK, 4))
        sel = blocks == b
        out[sel] = z[index[sel] % BLOCK]
    return out


def sample_amplitudes(spec: EnsembleSpec) -> Members:
    """Member amplitudes and weights for the ensemble's weighting."""
    p = spec.packet
    if spec.weighting == "equalPair":
        a = np.asarray(spec.amps, dtype=float).reshape(4)
        return Members(np.stack([a, -a]), np.array([0.5, 0.5]))
    if spec.weighting == "custom":
        amps = np.atleast_2d(np.asarray(spec.amps, dtype=float))
        w = np.asarray(spec.weights, dtype=float)
        if amps.shape[0] != w.size:
            raise ValueError("custom amplitudes and weights differ in length")
        return Members(amps, w)

    n_base = (spec.N + 1) // 2 if spec.antithetic else spec.N
    idx = np.arange(n_base)
    base = _normals(spec.seed, idx, 0) * p.sigma_i
    rejected = 0
    draws = n_base
    if spec.timelike_filter:
        bad = ~is_timelike(p, base)
        attempt = 0
        while np.any(bad):
            rejected += int(bad.sum())
            attempt += 1
            if rejected > DEFAULT.filter_starvation * draws or attempt > MAX_REDRAWS:
                raise FilterStarvation(f"{rejected} of {draws} draws were spacelike")
            redo = idx[bad]
            base[redo] = _normals(spec.seed, redo, attempt) * p.sigma_i
            draws += redo.size
            bad[redo] = ~is_timelike(p, base[redo])
    if spec.antithetic:
        amps = np.empty((2 * n_base, 4))
        amps[0::2] = base
        amps[1::2] = -base
        amps = amps[:spec.N]
    else:
        amps = base
    return Members(amps, np.full(amps.shape[0], 1.0 / amps.shape[0]), rejected, draws)


def pairwise_sum(a, axis: int = 0):
    """Sum along `axis` with a fixed binary tree, independent of how work was scheduled."""
    a = np.moveaxis(np.asarray(a), axis, 0)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1:], dtype=a.dtype)
    while a.shape[0] > 1:
        if a.shape[0] % 2:
            a = np.concatenate([a, np.zeros((1,) + a.shape[1:], dtype=a.dtype)])
        a = a[0::2] + a[1::2]
    return a[0]


def _chunks(n: int, size: int) -> list[slice]:
    return [slice(i, min(i + size, n)) for i in range(0, n, size)]


def _map(fn: Callable, items: list, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


@dataclass
class FieldResult:
    F: np.ndarray
    used: int
    skipped: int
    info: dict = field(default_factory=dict)


def member_state(params: PacketParams, amps, s, offset=None):
    """Position, velocity and acceleration of members at world times ``s``.

    ``amps`` (N, 4) with ``s`` broadcasting against (..., N).
    """
    s = np.asarray(s, dtype=float)[..., None]
    g = params.gamma
    f = np.sqrt(1.0 + (g * s) ** 2)
    amps = np.asarray(amps)
    off = 0.0 if offset is None else np.asarray(offset)
    X = params.u * s + amps * f + off
    V = params.u + amps * g**2 * s / f
    a = amps * g**2 / f**3
    return X, V, a


def ensemble_field(x, spec: EnsembleSpec, part: str = "total", threads: int = 1,
                   members: Members | None = None, chunk_elems: int = 1 << 16, tol=DEFAULT) -> FieldResult:
    """Weighted sum of single-root Faraday tensors over the members.

    ``x`` is (4,) or (P, 4).  Members without a real retarded root are skipped
    and counted.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xs = np.atleast_2d(x)
    m = members if members is not None else sample_amplitudes(spec)
    p = spec.packet
    n = m.amps.shape[0]
    size = max(1, chunk_elems // xs.shape[0])
    # chunk boundaries depend only on (P, N), never on the thread count
    parts = _chunks(n, size)

    def work(sl: slice):
        amps = m.amps[sl]
        s, ok = retarded_roots_batch(xs, p, amps, spec.offset, tol)
        s = np.where(ok, s, 0.0)
        X, V, a = member_state(p, amps, s, spec.offset)
        F = lw_faraday_state(xs[:, None, :], X, V, a, spec.q, part)
        w = np.where(ok, m.weights[sl], 0.0)
        F = np.where(ok[..., None, None], F, 0.0) * w[..., None, None]
        return pairwise_sum(F, axis=1), (~ok).sum(axis=1)

    results = _map(work, parts, threads)
    F = pairwise_sum(np.stack([r[0] for r in results]), axis=0)
    skipped = np.sum([r[1] for r in results], axis=0)
    if single:
        F, skipped = F[0], skipped[0]
    info = {"rejected": m.rejected, "draws": m.draws}
    return FieldResult(F, n, int(np.max(skipped)), info)


def sphere_nodes(n_theta: int = 16, n_phi: int = 32):
    """Unit directions and weights: Gauss-Legendre in cos(theta), uniform in phi."""
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    phi = (np.arange(n_phi) + 0.5) * 2 * np.pi / n_phi
    st = np.sqrt(1 - ct**2)
    n = np.stack([np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)),
                  np.outer(ct, np.ones(n_phi))], axis=-1).reshape(-1, 3)
    w = np.outer(wt, np.full(n_phi, 2 * np.pi / n_phi)).ravel()
    return n, w


def poynting_flux(F_complex, normals, weights, R: float) -> float:
    """Outward flux of ``Re(E) x Re(B) / 4 pi`` through a sphere of radius R."""
    Fp = np.real(F_complex)
    E, B = electric_magnetic(Fp)
    S = np.cross(E, B) / (4 * np.pi)
    return float(R**2 * np.sum(weights * np.sum(S * normals, axis=-1)))


def radiated_power(field_fn: Callable, radii, center=(0.0, 0.0, 0.0),
                   x0_of_R: Callable | None = None, n_theta: int = 16, n_phi: int = 32) -> np.ndarray:
    """``P(R)`` for a field callable mapping (P, 4) points to (P, 4, 4) tensors.

    The observation time defaults to ``x0 = R``; pass `x0_of_R` to shift it.
    """
    normals, w = sphere_nodes(n_theta, n_phi)
    c = np.asarray(center, dtype=float)
    out = []
    for R in np.asarray(radii, dtype=float):
        x0 = R if x0_of_R is None else x0_of_R(R)
        pts = np.concatenate([np.full((normals.shape[0], 1), x0), c + R * normals], axis=1)
        out.append(poynting_flux(field_fn(pts), normals, w, R))
    return np.array(out)


def ensemble_power(spec: EnsembleSpec, radii, part: str = "total", threads: int = 1,
                   n_theta: int = 16, n_phi: int = 32, x0_shift: float | None = None) -> np.ndarray:
    """Radiated power of the ensemble field at ``x0 = R + 5 sigma``."""
    members = sample_amplitudes(spec)
    shift = 5.0 * float(np.max(spec.packet.sigma_i)) if x0_shift is None else x0_shift
    fn = lambda pts: ensemble_field(pts, spec, part, threads, members).F
    return radiated_power(fn, radii, x0_of_R=lambda R: R + shift, n_theta=n_theta, n_phi=n_phi)


def loglog_slope(R, y) -> float:
    """Least-squares slope of ``log|y|`` against ``log R``."""
    return float(np.polyfit(np.log(np.asarray(R, dtype=float)), np.log(np.abs(y)), 1)[0])


def sheet_count(n_particles: int) -> int:
    """Riemann sheets of an n-particle product state, ``2^n``."""
    n = int(n_particles)
    if n < 0:
        raise ValueError("particle count must be non-negative")
    if n > 62:
        raise OverflowError("sheet count exceeds 2^62")
    return 1 << n


# --- trajectory-ensemble estimate of the extended current -------------------

def _axis_density(p: PacketParams, mu: int, xmu, s):
    """Density of ``X^mu(s)`` over the initial Gaussian and the velocity there."""
    g, sig, u = p.gamma[mu], p.sigma_i[mu], p.u[mu]
    f = np.sqrt(1.0 + (g * s) ** 2)
    a = (xmu - u * s) / f
    rho = np.exp(-0.5 * (a / sig) ** 2) / (math.sqrt(2 * math.pi) * sig * f)
    v = u + a * g**2 * s / f
    return rho, v


def _time_crossings(p: PacketParams, x0: float, a0):
    """World times where ``u0 s + a0 f0(s) = x0``; shape (N, 2), NaN if absent."""
    u0, g0 = p.u[0], p.gamma[0]
    a0 = np.asarray(a0, dtype=float)
    alpha = u0**2 - (a0 * g0) ** 2
    beta = -2.0 * x0 * u0
    gam = x0**2 - a0**2
    s = np.full(a0.shape + (2,), np.nan)
    lin = np.abs(alpha) <= 1e-14 * max(u0**2, 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = beta**2 - 4 * alpha * gam
        rt = np.sqrt(np.where(disc >= 0, disc, np.nan))
        qq = -0.5 * (beta + np.copysign(rt, beta))
        s1 = qq / alpha
        s2 = gam / qq
        s[..., 0] = np.where(lin, -gam / beta, s1)
        s[..., 1] = np.where(lin, np.nan, s2)
        f = np.sqrt(1.0 + (g0 * s) ** 2)
        resid = x0 - u0 * s - a0[..., None] * f
        good = np.abs(resid) <= 1e-9 * max(1.0, abs(x0)) + 1e-9 * np.abs(a0[..., None]) * f
    return np.where(good, s, np.nan)


def trajectory_current(x, spec: EnsembleSpec, method: str = "crossing", bandwidth: float | None = None,
                       members: Members | None = None, s_nodes: int = 4001) -> np.ndarray:
    """Monte-Carlo estimate of the extended current from trajectory members.

    ``crossing`` (default) samples the time-axis amplitude and integrates
    the spatial amplitudes exactly: each member contributes at the world
    times where it crosses ``x0``, weighted by ``1/|V^0|``.  ``kde`` smears
    each sampled trajectory with a 4D Gaussian kernel (default width
    ``sigma_I / 10``) and integrates over s; it is biased by the kernel width
    and is kept for bandwidth studies.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    m = members if members is not None else sample_amplitudes(spec)
    p = spec.packet
    out = np.empty((x.shape[0], 4))
    for i, xi in enumerate(x):
        if method == "crossing":
            s = _time_crossings(p, xi[0], m.amps[:, 0])
            ok = np.isfinite(s)
            s0 = np.where(ok, s, 0.0)
            g0 = p.gamma[0]
            f0 = np.sqrt(1.0 + (g0 * s0) ** 2)
            v0 = p.u[0] + m.amps[:, 0:1] * g0**2 * s0 / f0
            terms = np.empty(s.shape + (4,))
            dens = 1.0 / np.abs(v0)
            terms[..., 0] = v0
            for mu in (1, 2, 3):
                rho, v = _axis_density(p, mu, xi[mu], s0)
                dens = dens * rho
                terms[..., mu] = v
            contrib = np.where(ok[..., None], terms * dens[..., None], 0.0).sum(axis=1)
        elif method == "kde":
            h = np.asarray(bandwidth if bandwidth is not None else p.sigma_i / 10.0, dtype=float) * np.ones(4)
            contrib = _kde_member_current(p, m.amps, xi, h, s_nodes)
        else:
            raise ValueError(f"unknown method {method!r}")
        out[i] = spec.q * pairwise_sum(m.weights[:, None] * contrib, axis=0)
    return out


def _kde_member_current(p: PacketParams, amps, x, h, s_nodes: int, chunk: int = 512) -> np.ndarray:
    return np.concatenate([_kde_chunk(p, amps[sl], x, h, s_nodes) for sl in _chunks(amps.shape[0], chunk)])


def _kde_chunk(p: PacketParams, amps, x, h, s_nodes: int) -> np.ndarray:
    # s range: where the member's time coordinate passes within 8 h0 of x0
    u0 = p.u[0]
    span = 8 * h[0] + np.abs(amps[:, 0]) * (1 + p.gamma[0] * abs(x[0]) / max(u0, 1e-12))
    lo = (x[0] - span) / u0
    hi = (x[0] + span) / u0
    t = np.linspace(0.0, 1.0, s_nodes)
    s = lo[:, None] + (hi - lo)[:, None] * t
    X, V, _ = member_state(p, amps[:, None, :], s)
    z = (x - X) / h
    k = np.exp(-0.5 * np.sum(z * z, axis=-1)) / np.prod(np.sqrt(2 * np.pi) * h)
    integrand = V * k[..., None]
    return np.trapezoid(integrand, s[..., None], axis=1)
