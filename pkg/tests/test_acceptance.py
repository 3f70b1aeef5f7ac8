"""Acceptance criteria AC1-AC11.

Each test records a PASS/FAIL line per criterion; the lines are printed in
the "acceptance criteria" section at the end of the pytest run (and to
stdout as each test finishes, visible with ``-s``).
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import constants

from bohmkn.cli import main
from bohmkn.current import charge_normalization, continuity_residual, quantum_current, spectral_radiation_check
from bohmkn.ensemble import EnsembleSpec, ensemble_field, loglog_slope, radiated_power, sample_amplitudes, \
    trajectory_current
from bohmkn.gan import GanWeights, combine, sqrt_sheets
from bohmkn.lienard_wiechert import displaced_retarded_potential, lw_faraday, null_roots, retarded_root
from bohmkn.minkowski import electric_magnetic, kn_static_field
from bohmkn.trajectory import (GaussTrajectory, circle_path, continue_sheet, pair_angular_momentum_avg,
                               pair_momentum_avg)
from bohmkn.units import SI_ELECTRON
from bohmkn.verify import argument_count, boosted_coulomb_field, cancellation_setup, gaussian_blob
from bohmkn.wavepacket import PacketParams

from .conftest import ACCEPTANCE


def record(ac: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(ac, []).append((bool(ok), detail))
    print(f"{ac} {'PASS' if ok else 'FAIL'}: {detail}")


def on_shell(rng, vmax=0.9):
    v = rng.normal(size=3)
    v *= vmax * rng.uniform() / np.linalg.norm(v)
    g = 1 / math.sqrt(1 - v @ v)
    return np.concatenate([[g], g * v])


@pytest.fixture
def rng():
    return np.random.default_rng(7)


# AC1 ---------------------------------------------------------------------------

def _electron_packet():
    return PacketParams([1, 0, 0, 0], 1.0, SI_ELECTRON.M, SI_ELECTRON.hbar)  # sigma_I = 1 angstrom


def test_ac1_gamma():
    gam = SI_ELECTRON.rate_si(float(_electron_packet().gamma[0]))
    err = abs(gam / 5.78e15 - 1)
    record("AC1", err <= 5e-3, f"Gamma = {gam:.4e} 1/s vs 5.78e15, rel err {err:.2e} (tol 5e-3)")
    assert err <= 5e-3


@pytest.mark.xfail(strict=True, reason="quoted 0.0019 is rounded to two figures; exact value 0.0019308 "
                                       "differs by 1.6%, see the decisions ledger")
def test_ac1_x_gamma():
    xg = float(_electron_packet().gamma[0]) * 1.0  # |X_B(0)| = 1 angstrom, in units of c
    err = abs(xg / 0.0019 - 1)
    implied = 5.78e15 * 1e-10 / constants.c
    record("AC1", err <= 5e-3, f"|X|Gamma = {xg:.5f} c vs 0.0019 c, rel err {err:.2e} (tol 5e-3); "
                               f"vs quoted Gamma x 1 angstrom / c = {implied:.6f}: {abs(xg / implied - 1):.2e}")
    assert err <= 5e-3


# AC2, AC3 ----------------------------------------------------------------------

def test_ac2_momentum_average(rng):
    worst = 0.0
    for _ in range(1000):
        u = on_shell(rng)
        p = PacketParams(u, rng.uniform(0.3, 3.0, 4), M=rng.uniform(0.5, 2.0))
        avg = pair_momentum_avg(GaussTrajectory(p, rng.normal(size=4) * 3), rng.uniform(-50, 50))
        worst = max(worst, float(np.max(np.abs(avg - p.M * u)) / np.max(np.abs(p.M * u))))
    record("AC2", worst <= 1e-13, f"max relative deviation {worst:.2e} (tol 1e-13)")
    assert worst <= 1e-13


def test_ac3_angular_momentum(rng):
    worst = 0.0
    for _ in range(1000):
        p = PacketParams(on_shell(rng), rng.uniform(0.3, 3.0), M=rng.uniform(0.5, 2.0))
        L = pair_angular_momentum_avg(GaussTrajectory(p, rng.normal(size=4)), rng.uniform(-20, 20))
        worst = max(worst, float(np.max(np.abs(L))))
    record("AC3", worst <= 1e-12, f"max |L| {worst:.2e} (tol 1e-12)")
    assert worst <= 1e-12


# AC4 ---------------------------------------------------------------------------

def test_ac4_sqrt_lemma(rng):
    t = GaussTrajectory(PacketParams([1, 0, 0, 0], math.sqrt(0.5)), [0.3, 1.0, 0.2, 0.1])
    flips = [int(continue_sheet(t, circle_path(c, 0.5, 2000)).flips.min()) for c in (1j, -1j)]
    keep = int(continue_sheet(t, circle_path(0, 3.0, 2000)).flips.max())
    worst = 0.0
    for _ in range(100):
        p1 = complex(rng.normal(), rng.normal())
        z = complex(rng.normal(), rng.normal())
        v = combine(GanWeights([p1, 1 - p1]), sqrt_sheets(z))
        worst = max(worst, abs(v - (2 * p1 - 1) * np.sqrt(z)) / max(1.0, abs(v)))
    ok = flips == [1, 1] and keep == 0 and worst <= 1e-12
    record("AC4", ok, f"loops around each branch point flip the sheet: {flips == [1, 1]}; "
                      f"loop around both keeps it: {keep == 0}; combine error {worst:.2e} (tol 1e-12)")
    assert ok


# AC5 ---------------------------------------------------------------------------

def test_ac5_null_roots(rng):
    t0 = GaussTrajectory(PacketParams([1, 0, 0, 0], math.sqrt(0.5)), np.zeros(4))
    r = null_roots([5.0, 3.0, 0, 0], t0)
    static = max(abs(r[0].s - 2.0), abs(r[1].s - 8.0))
    worst = 0.0
    mismatches = 0
    for _ in range(50):
        u = on_shell(rng, 0.5)
        t = GaussTrajectory(PacketParams(u, rng.uniform(1.0, 3.0)), rng.normal(size=4) * 0.3)
        x = np.concatenate([[rng.uniform(5, 15)], rng.normal(size=3) * 3])
        roots = null_roots(x, t)
        worst = max(worst, max(rt.residual for rt in roots))
        if argument_count(x, t, 2 * max(abs(rt.s) for rt in roots) + 1) != len(roots):
            mismatches += 1
    ok = static <= 1e-12 and worst < 1e-10 and mismatches == 0
    record("AC5", ok, f"static error {static:.1e} (tol 1e-12); max residual {worst:.2e} (tol 1e-10); "
                      f"argument-principle mismatches {mismatches}/50")
    assert ok


# AC6 ---------------------------------------------------------------------------

def test_ac6_coulomb_and_uniform_motion(rng):
    t = GaussTrajectory(PacketParams([1, 0, 0, 0], 1.0), np.zeros(4))
    x = np.array([7.0, 1.0, -2.0, 2.0])
    E, B = electric_magnetic(lw_faraday(x, t, retarded_root(null_roots(x, t))).real)
    coul = np.array([1.0, -2.0, 2.0]) / 27.0
    c_err = float(np.max(np.abs(E - coul)) / np.linalg.norm(coul) + np.max(np.abs(B)))
    b_err = 0.0
    for _ in range(50):
        u = on_shell(rng, 0.8)
        tb = GaussTrajectory(PacketParams(u, 1.0), np.zeros(4))
        xb = np.concatenate([[rng.uniform(0, 10)], rng.normal(size=3) * 4])
        Eb, Bb = electric_magnetic(lw_faraday(xb, tb, retarded_root(null_roots(xb, tb))).real)
        Ec, Bc = boosted_coulomb_field(xb, u)
        b_err = max(b_err, float(np.max(np.abs(np.concatenate([Eb - Ec, Bb - Bc]))) / np.linalg.norm(Ec)))
    pu = PacketParams([math.sqrt(1.09), 0, 0, 0.3], 1.0)
    spec = EnsembleSpec(pu, weighting="custom", amps=[np.zeros(4)], weights=[1.0])
    R = np.array([40.0, 80.0, 160.0, 320.0])
    slope = loglog_slope(R, radiated_power(lambda p: ensemble_field(p, spec).F, R, x0_of_R=lambda r: r + 5.0))
    ok = c_err <= 1e-12 and b_err <= 1e-9 and abs(slope + 2) <= 0.1
    record("AC6", ok, f"Coulomb error {c_err:.1e} (tol 1e-12); boosted Coulomb {b_err:.1e} (tol 1e-9); "
                      f"power slope {slope:.3f} (target -2 +- 0.1)")
    assert ok


# AC7 ---------------------------------------------------------------------------

def test_ac7_two_sheet_cancellation():
    p, R, pts = cancellation_setup()
    assert abs(float(np.linalg.norm(p.u[1:])) - 0.01) < 1e-15 and abs(p.sigma_i[0] * p.gamma[0] - 0.01) < 1e-15
    A = np.array([0.0, 1.0, 0.0, 0.0])
    single = EnsembleSpec(p, weighting="custom", amps=[A], weights=[1.0])
    pair = EnsembleSpec(p, weighting="equalPair", amps=A)
    norm = lambda F: np.linalg.norm(F.reshape(F.shape[0], -1), axis=1)
    s1 = loglog_slope(R, norm(ensemble_field(pts, single, "acceleration").F))
    s2 = loglog_slope(R, norm(ensemble_field(pts, pair, "acceleration").F))
    ok = abs(s1 + 1) <= 0.1 and abs(s2 + 2) <= 0.1
    record("AC7", ok, f"radiation-field slope over R in [20, 200] sigma: single sheet {s1:.3f} "
                      f"(target -1 +- 0.1), equal pair {s2:.3f} (target -2 +- 0.1)")
    assert ok


# AC8 ---------------------------------------------------------------------------

def test_ac8_extended_current(rng):
    p = PacketParams([1, 0.1, 0, 0], 1.0, M=4.0)
    N = 100_000
    spec = EnsembleSpec(p, N=N, seed=2024)
    members = sample_amplitudes(spec)
    x = rng.normal(size=(20, 4)) * np.array([3, 1, 1, 1])
    Jm = trajectory_current(x, spec, members=members)
    Jq = quantum_current(x, p)
    mc = float(np.max(np.linalg.norm(Jm - Jq, axis=1) / np.linalg.norm(Jq, axis=1)))
    cont = max(continuity_residual(xi, p) for xi in x[:5])
    Q0 = charge_normalization(p, 1.0, 0.0)
    Q2 = charge_normalization(p, 1.0, 2.0)
    dq = abs(Q2 - Q0) / abs(Q0)
    tol = 5 / math.sqrt(N)
    ok = mc <= tol and cont < 1e-4 and dq <= 1e-4
    record("AC8", ok, f"MC vs quadrature max rel err {mc:.2e} at 20 points (tol {tol:.2e}); "
                      f"continuity {cont:.1e} (tol 1e-4); charge {Q0:.12f}, slice change {dq:.1e} (tol 1e-4)")
    assert ok


# AC9 ---------------------------------------------------------------------------

def test_ac9_kerr_newman_dipole():
    b, q = 1.0, 1.0
    r = 100 * b
    w = kn_static_field(np.array([0, 0, r]), np.array([0, 0, 1j * b]), q)
    m = float(np.imag(w[2])) * r**3 / 2
    pts, wts, rho = gaussian_blob(0.2 * b, 9, q)
    J = np.stack([rho, 0 * rho, 0 * rho, 0 * rho], 1)
    O = np.array([0, 0, 0, 1j * b])
    h = 1e-3 * r
    phi = [displaced_retarded_potential(np.array([0, 0, 0, r + d]), pts, wts, J, O)[0] for d in (h, -h)]
    m2 = float(np.imag(-(phi[0] - phi[1]) / (2 * h))) * r**3 / 2
    e1, e2 = abs(m / (q * b) - 1), abs(m2 / m - 1)
    ok = e1 <= 0.01 and e2 <= 0.02
    record("AC9", ok, f"dipole moment / (q b) = {m:.5f} (tol 1%); displaced retarded potential "
                      f"agrees to {e2:.1e} (tol 2%)")
    assert ok


# AC10 --------------------------------------------------------------------------

def test_ac10_spectral_indicator():
    p = PacketParams([1, 0, 0, 0], 8.0)
    fine = spectral_radiation_check(p, 16, spacing=4.0)
    coarse = spectral_radiation_check(p, 16, spacing=8.0)
    space = fine["spacelike_min"] / fine["spacelike_floor"]
    ok = fine["null_ratio"] < 10 and space > 1e6 and fine["null_max"] < coarse["null_max"]
    record("AC10", ok, f"null |J(k)| / floor = {fine['null_ratio']:.2f} (tol 10); spacelike / floor = "
                       f"{space:.1e}; halving the spacing moves null max {coarse['null_max']:.1e} -> "
                       f"{fine['null_max']:.1e}")
    assert ok


# AC11 --------------------------------------------------------------------------

def test_ac11_verify_determinism(capsys):
    reports = []
    codes = []
    for threads in ("1", "4"):
        codes.append(main(["verify", "--seed", "31337", "--threads", threads]))
        reports.append(capsys.readouterr().out)
    same = reports[0] == reports[1]
    record("AC11", same and codes == [0, 0], f"byte-identical reports with 1 and 4 threads: {same}; "
                                              f"exit codes {codes}")
    assert same and codes == [0, 0]
