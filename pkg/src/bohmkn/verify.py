"""Invariant suites run by ``bohmkn verify``.

Every check yields a row ``(suite, check, value, limit, passed)``.  Reports
contain no timings or host details, so two runs with the same seed are
byte-identical whatever the thread count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .config import Scenario
from .current import charge_normalization, continuity_residual, quantum_current, spectral_radiation_check
from .ensemble import (EnsembleSpec, ensemble_field, loglog_slope, radiated_power, sample_amplitudes,
                       trajectory_current)
from .gan import GanWeights, combine, sqrt_sheets
from .io import Table
from .lienard_wiechert import displaced_retarded_potential, lw_faraday, null_roots, retarded_root
from .minkowski import (ETA, boost, dual, electric_magnetic, energy_poynting, kn_static_field, make_asd,
                        minkowski_dot)
from .trajectory import (GaussTrajectory, circle_path, continue_sheet, pair_angular_momentum_avg,
                         pair_momentum_avg, position, velocity)
from .units import SI_ELECTRON
from .wavepacket import PacketParams, velocity_field


@dataclass
class Check:
    suite: str
    check: str
    value: float
    limit: float
    passed: bool


def _le(suite, name, value, limit) -> Check:
    value = float(value)
    return Check(suite, name, value, float(limit), bool(value <= limit))


def _within(suite, name, value, target, tol) -> Check:
    err = abs(value - target)
    return Check(suite, name, float(value), float(tol), bool(err <= tol))


def _on_shell(rng, n, vmax=0.9):
    v = rng.uniform(-1, 1, (n, 3))
    v *= (vmax * rng.uniform(0, 1, (n, 1))) / np.linalg.norm(v, axis=1, keepdims=True)
    g = 1 / np.sqrt(1 - np.sum(v * v, axis=1))
    return np.concatenate([g[:, None], g[:, None] * v], axis=1)


def suite_minkowski(rng, sc, threads):
    s = "minkowski"
    us = _on_shell(rng, 100)
    err = max(np.max(np.abs(boost(u).T @ ETA @ boost(u) - ETA)) for u in us)
    F = rng.normal(size=(100, 4, 4))
    F = F - np.swapaxes(F, -1, -2)
    W = make_asd(F)
    asd = np.max(np.abs(dual(W) + 1j * W))
    w = rng.normal(size=(1000, 3)) + 1j * rng.normal(size=(1000, 3))
    e, p = energy_poynting(w)
    return [_le(s, "boost metric preservation", err, 1e-12),
            _le(s, "anti-self-duality residual", asd, 1e-12),
            Check(s, "|P| <= energy density", float(np.max(np.linalg.norm(p, axis=1) - e)), 0.0,
                  bool(np.all(np.linalg.norm(p, axis=1) <= e * (1 + 1e-14))))]


def suite_trajectory(rng, sc, threads):
    s = "trajectory"
    worst_p = worst_l = 0.0
    for _ in range(1000):
        u = _on_shell(rng, 1)[0]
        p = PacketParams(u, rng.uniform(0.3, 3.0, 4), M=rng.uniform(0.5, 2.0))
        t = GaussTrajectory(p, rng.normal(size=4))
        sv = rng.uniform(-20, 20)
        avg = pair_momentum_avg(t, sv)
        worst_p = max(worst_p, float(np.max(np.abs(avg - p.M * u)) / np.max(np.abs(p.M * u))))
        pe = PacketParams(u, rng.uniform(0.3, 3.0), M=rng.uniform(0.5, 2.0))
        te = GaussTrajectory(pe, rng.normal(size=4))
        worst_l = max(worst_l, float(np.max(np.abs(pair_angular_momentum_avg(te, sv)))))
    p1 = PacketParams([1, 0, 0, 0], math.sqrt(0.5))
    t1 = GaussTrajectory(p1, [0.3, 1.0, 0.2, 0.1])
    one = continue_sheet(t1, circle_path(1j, 0.5, 4000))
    both = continue_sheet(t1, circle_path(0, 3.0, 4000))
    return [_le(s, "pair momentum average = M u (relative)", worst_p, 1e-13),
            _le(s, "equal-Gamma pair angular momentum", worst_l, 1e-12),
            Check(s, "loop around +i/Gamma flips sheet", float(one.flips.min()), 1.0, bool(np.all(one.flips == 1))),
            Check(s, "loop around both branch points keeps sheet", float(both.flips.max()), 0.0,
                  bool(np.all(both.flips == 0)))]


def suite_wavepacket(rng, sc, threads):
    s = "wavepacket"
    p = sc.packet
    worst = 0.0
    for _ in range(50):
        A = rng.normal(size=4) * p.sigma_i
        t = GaussTrajectory(p, A)
        sv = rng.uniform(-3, 3) / float(np.max(p.gamma))
        X = position(t, sv).real
        worst = max(worst, float(np.max(np.abs(velocity_field(p, X, sv) - velocity(t, sv).real))))
    xs = rng.normal(size=(5, 4)) * p.sigma_i
    cont = max(continuity_residual(x, p) for x in xs)
    return [_le(s, "velocity field on trajectory = closed form", worst, 1e-9),
            _le(s, "current continuity residual", cont, 1e-4)]


def suite_gan(rng, sc, threads):
    s = "gan"
    worst = 0.0
    for _ in range(100):
        p1 = rng.normal() + 1j * rng.normal()
        z = rng.normal() + 1j * rng.normal()
        v = combine(GanWeights([p1, 1 - p1]), sqrt_sheets(z))
        worst = max(worst, abs(v - (2 * p1 - 1) * np.sqrt(z)) / max(1.0, abs(v)))
    return [_le(s, "combine = (P1 - P2) sqrt z", worst, 1e-12)]


def suite_roots(rng, sc, threads):
    s = "roots"
    p = PacketParams([1, 0, 0, 0], math.sqrt(0.5))
    r = null_roots([5.0, 3.0, 0, 0], GaussTrajectory(p, np.zeros(4)))
    static = max(abs(r[0].s - 2.0), abs(r[1].s - 8.0))
    worst = 0.0
    per_sheet_ok = count_ok = True
    for _ in range(50):
        u = _on_shell(rng, 1, 0.5)[0]
        pp = PacketParams(u, rng.uniform(1.0, 3.0), M=1.0)
        A = rng.normal(size=4) * 0.3
        x = np.concatenate([[rng.uniform(5, 15)], rng.normal(size=3) * 3])
        t = GaussTrajectory(pp, A)
        roots = null_roots(x, t)
        scale = max(1.0, float(np.linalg.norm(x - A)))
        worst = max(worst, max(rt.residual for rt in roots) / scale**2)
        for sh in (1, -1):
            if sum(1 for rt in roots if rt.sheet == sh and rt.kind == "retarded") != 1:
                per_sheet_ok = False
        radius = 2.0 * max(abs(rt.s) for rt in roots) + 1.0
        if argument_count(x, t, radius) != len(roots):
            count_ok = False
    return [_le(s, "static roots t -+ r", static, 1e-12),
            _le(s, "scaled root residual", worst, 1e-10),
            Check(s, "one retarded root per sheet", float(per_sheet_ok), 1.0, per_sheet_ok),
            Check(s, "argument-principle count = roots found", float(count_ok), 1.0, count_ok)]


def argument_count(x, t: GaussTrajectory, radius: float, n: int = 8192) -> int:
    """Zeros inside |s| = radius of the product of both sheets' null expressions.

    The product is entire in s, so its winding number counts the null roots
    of both sheets without reference to any polynomial form.
    """
    s = circle_path(0.0, radius, n)
    y = np.asarray(x)[None, :] - position(t, s)
    z = np.asarray(x)[None, :] - position(t.other_sheet(), s)
    val = minkowski_dot(y, y) * minkowski_dot(z, z)
    ph = np.unwrap(np.angle(val))
    return int(round((ph[-1] - ph[0]) / (2 * np.pi)))


def boosted_coulomb_field(x, u, q=1.0):
    """Closed-form field of a charge on ``X = u s`` (E, B) at the real point x."""
    v = np.asarray(u[1:]) / u[0]
    R = np.asarray(x[1:]) - v * x[0]
    v2 = float(v @ v)
    R2 = float(R @ R)
    sin2 = 0.0 if v2 == 0 else 1 - float(R @ v) ** 2 / (R2 * v2)
    E = q * (1 - v2) * R / (R2 * (1 - v2 * sin2)) ** 1.5
    return E, np.cross(v, E)


def suite_fields(rng, sc, threads):
    s = "fields"
    p = PacketParams([1, 0, 0, 0], 1.0)
    t = GaussTrajectory(p, np.zeros(4))
    x = np.array([7.0, 1.0, -2.0, 2.0])
    F = lw_faraday(x, t, retarded_root(null_roots(x, t)), 1.0)
    E, B = electric_magnetic(F.real)
    coul = np.array([1.0, -2.0, 2.0]) / 27.0
    worst_b = 0.0
    for _ in range(20):
        u = _on_shell(rng, 1, 0.8)[0]
        tb = GaussTrajectory(PacketParams(u, 1.0), np.zeros(4))
        xb = np.concatenate([[rng.uniform(0, 10)], rng.normal(size=3) * 4])
        Fb = lw_faraday(xb, tb, retarded_root(null_roots(xb, tb)), 1.0).real
        Eb, Bb = electric_magnetic(Fb)
        Ec, Bc = boosted_coulomb_field(xb, u)
        worst_b = max(worst_b, float(np.max(np.abs(np.concatenate([Eb - Ec, Bb - Bc]))) / np.linalg.norm(Ec)))
    pu = PacketParams([math.sqrt(1 + 0.3**2), 0, 0, 0.3], 1.0)
    spec = EnsembleSpec(pu, weighting="custom", amps=[np.zeros(4)], weights=[1.0])
    R = np.array([40.0, 80.0, 160.0, 320.0])
    P = radiated_power(lambda pts: ensemble_field(pts, spec, threads=threads).F, R, x0_of_R=lambda r: r + 5.0)
    return [_le(s, "Coulomb limit", float(np.max(np.abs(E - coul)) / np.linalg.norm(coul) + np.max(np.abs(B))), 1e-12),
            _le(s, "boosted Coulomb vs closed form", worst_b, 1e-9),
            _within(s, "uniform-motion power slope", loglog_slope(R, P), -2.0, 0.1)]


def cancellation_setup(R=None):
    """Non-relativistic pair: |u|=0.01 along z, sigma Gamma = 0.01, amplitude along x."""
    u = np.array([math.sqrt(1 + 1e-4), 0, 0, 0.01])
    p = PacketParams(u, 1.0, M=50.0)
    R = np.geomspace(20.0, 200.0, 8) if R is None else R
    pts = np.concatenate([(R + 5.0)[:, None], np.zeros((R.size, 2)), R[:, None]], axis=1)
    return p, R, pts


def suite_cancellation(rng, sc, threads):
    s = "cancellation"
    p, R, pts = cancellation_setup()
    A = np.array([0.0, 1.0, 0.0, 0.0])
    single = EnsembleSpec(p, weighting="custom", amps=[A], weights=[1.0])
    pair = EnsembleSpec(p, weighting="equalPair", amps=A)
    norm = lambda F: np.linalg.norm(F.reshape(F.shape[0], -1), axis=1)
    fs = norm(ensemble_field(pts, single, "acceleration", threads).F)
    fp = norm(ensemble_field(pts, pair, "acceleration", threads).F)
    return [_within(s, "single-sheet radiation slope", loglog_slope(R, fs), -1.0, 0.1),
            _within(s, "equal-pair radiation slope", loglog_slope(R, fp), -2.0, 0.1)]


def suite_current(rng, sc, threads):
    s = "current"
    p = PacketParams([1, 0.1, 0, 0], 1.0, M=4.0)
    spec = EnsembleSpec(p, N=sc.N, seed=sc.seed)
    m = sample_amplitudes(spec)
    x = rng.normal(size=(10, 4)) * np.array([3, 1, 1, 1])
    x[:, 0] = np.abs(x[:, 0])
    Jm = trajectory_current(x, spec, members=m)
    Jq = quantum_current(x, p)
    err = float(np.max(np.linalg.norm(Jm - Jq, axis=1) / np.linalg.norm(Jq, axis=1)))
    Q0 = charge_normalization(p, 1.0, 0.0)
    Q2 = charge_normalization(p, 1.0, 2.0)
    return [_le(s, "trajectory ensemble vs s-quadrature", err, 5 / math.sqrt(len(m.amps))),
            _le(s, "charge independent of time slice", abs(Q0 - Q2) / abs(Q0), 1e-4),
            _within(s, "total charge", Q0, 1.0, 1e-6)]


def suite_kn_dipole(rng, sc, threads):
    s = "kn_dipole"
    b, q = 1.0, 1.0
    r = 100 * b
    w = kn_static_field(np.array([0, 0, r]), np.array([0, 0, 1j * b]), q)
    m = float(np.imag(w[2])) * r**3 / 2
    pts, wts, rho = gaussian_blob(0.2 * b, 9, q)
    O = np.array([0, 0, 0, 1j * b])
    h = 1e-3 * r
    phi = [displaced_retarded_potential(np.array([0, 0, 0, r + d]), pts, wts,
                                        np.stack([rho, 0 * rho, 0 * rho, 0 * rho], 1), O)[0] for d in (h, -h)]
    Wz = -(phi[0] - phi[1]) / (2 * h)
    m2 = float(np.imag(Wz)) * r**3 / 2
    return [_within(s, "dipole moment from kn_static_field", m / (q * b), 1.0, 0.01),
            _within(s, "displaced retarded potential dipole", m2 / m, 1.0, 0.02)]


def gaussian_blob(width: float, n_half: int, q: float):
    """Static Gaussian charge blob on a trapezoid grid: points, weights, density."""
    ax = np.linspace(-5 * width, 5 * width, 2 * n_half + 1)
    X, Y, Z = np.meshgrid(ax, ax, ax, indexing="ij")
    pts = np.stack([X, Y, Z], -1).reshape(-1, 3)
    dv = (ax[1] - ax[0]) ** 3
    rho = q * np.exp(-0.5 * np.sum(pts**2, 1) / width**2) / (2 * np.pi * width**2) ** 1.5
    return pts, np.full(pts.shape[0], dv), rho


def suite_spectral(rng, sc, threads):
    s = "spectral"
    p = PacketParams([1, 0, 0, 0], 8.0)
    fine = spectral_radiation_check(p, 8, spacing=4.0)
    coarse = spectral_radiation_check(p, 8, spacing=8.0)
    return [_le(s, "null k / floor", fine["null_ratio"], 10.0),
            Check(s, "spacelike k / floor", fine["spacelike_min"] / fine["spacelike_floor"], 1e6,
                  bool(fine["spacelike_min"] > 1e6 * fine["spacelike_floor"])),
            Check(s, "refinement lowers null k", fine["null_max"], coarse["null_max"],
                  bool(fine["null_max"] < coarse["null_max"]))]


def suite_units(rng, sc, threads):
    s = "units"
    p = PacketParams([1, 0, 0, 0], 1.0, SI_ELECTRON.M, SI_ELECTRON.hbar)  # 1 angstrom
    gam = SI_ELECTRON.rate_si(float(p.gamma[0]))
    # |X_B(0)| Gamma with X_B(0) = 1 angstrom, against the value implied by the quoted Gamma
    xg = float(p.gamma[0]) * 1.0
    implied = 5.78e15 * 1e-10 / constants.c
    return [_within(s, "Gamma for sigma = 1 angstrom (1/s)", gam / 5.78e15, 1.0, 5e-3),
            _within(s, "X_B(0) Gamma / (quoted Gamma x 1 angstrom / c)", xg / implied, 1.0, 5e-3)]


SUITES = {
    "minkowski": suite_minkowski,
    "wavepacket": suite_wavepacket,
    "trajectory": suite_trajectory,
    "gan": suite_gan,
    "roots": suite_roots,
    "fields": suite_fields,
    "cancellation": suite_cancellation,
    "current": suite_current,
    "kn_dipole": suite_kn_dipole,
    "spectral": suite_spectral,
    "units": suite_units,
}


def run_verify(sc: Scenario, seed: int, threads: int = 1, suites=None) -> tuple[Table, bool]:
    rows: list[Check] = []
    for i, name in enumerate(suites or SUITES):
        # each suite gets its own counter-based stream, so suites are independent
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 1, i]))
        rows.extend(SUITES[name](rng, sc, threads))
    ok = all(r.passed for r in rows)
    table = Table(["suite", "check", "value", "limit", "passed"],
                  [[r.suite, r.check, r.value, r.limit, r.passed] for r in rows],
                  {"seed": seed, "suites": len(suites or SUITES), "all_passed": ok})
    return table, ok
