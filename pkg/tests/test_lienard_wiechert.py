from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohmkn.errors import BranchAmbiguity, NoRetardedRoot, UnequalGamma
from bohmkn.lienard_wiechert import (displaced_retarded_potential, lw_faraday, lw_potential, null_roots,
                                     quartic_coefficients, retarded_root, retarded_roots_batch)
from bohmkn.minkowski import electric_magnetic, minkowski_dot
from bohmkn.trajectory import GaussTrajectory, circle_path, position
from bohmkn.wavepacket import PacketParams

from .strategies import velocities


def winding_count(x, t, radius, n=8192):
    """Zeros of prod_sheets (x - X(s))^2 inside |s| = radius, from the argument principle."""
    s = circle_path(0.0, radius, n)
    val = 1.0
    for tt in (t, t.other_sheet()):
        y = np.asarray(x) - position(tt, s)
        val = val * minkowski_dot(y, y)
    ph = np.unwrap(np.angle(val))
    return int(round((ph[-1] - ph[0]) / (2 * np.pi)))


@st.composite
def configs(draw):
    u = draw(velocities(0.5))
    sig = draw(st.floats(1.0, 3.0))
    A = np.array([draw(st.floats(-0.5, 0.5)) for _ in range(4)])
    x = np.array([draw(st.floats(5, 15))] + [draw(st.floats(-4, 4)) for _ in range(3)])
    # keep the field point off the worldline, where retarded and advanced roots merge
    v = u[1:] / u[0]
    if np.linalg.norm(x[1:] - v * x[0]) < 2.0:
        x[1] += 4.0
    return GaussTrajectory(PacketParams(u, sig), A), x


def test_static_roots_exact():
    t = GaussTrajectory(PacketParams([1, 0, 0, 0], np.sqrt(0.5)), np.zeros(4))
    r = null_roots([5.0, 3.0, 0, 0], t)
    assert [(x.s, x.kind) for x in r] == [(2.0, "retarded"), (8.0, "advanced")]


@given(configs())
def test_roots_residual_and_count(cfg):
    t, x = cfg
    roots = null_roots(x, t)
    scale = max(1.0, float(np.linalg.norm(x - t.amp.real)))
    for r in roots:
        X = position(t.on_sheet(r.sheet), r.s)
        assert abs(minkowski_dot(x - X, x - X)) < 1e-9 * scale**2
        assert r.residual < 1e-10 * scale**2
    # with A = 0 the sheets coincide: two roots, each a double zero of the sheet product
    single = not np.any(t.amp)
    assert len(roots) == (2 if single else 4)
    assert winding_count(x, t, 2 * max(abs(r.s) for r in roots) + 1) == 4
    for sheet in ((1,) if single else (1, -1)):
        rr = retarded_root(roots, sheet)
        assert rr.kind == "retarded" and (x[0] - position(t.on_sheet(sheet), rr.s)[0]).real > 0


@given(configs())
def test_batch_matches_scalar_solver(cfg):
    t, x = cfg
    s, ok = retarded_roots_batch(x, t.params, t.amp.real[None, :])
    assert ok[0]
    assert s[0] == pytest.approx(retarded_root(null_roots(x, t), 1).s.real, abs=1e-9)


def test_complex_roots_only_with_flag():
    p = PacketParams([1, 0, 0, 0], 1.0)
    t = GaussTrajectory(p, np.zeros(4), [0, 0, 0, 0.5j])
    roots = null_roots([10.0, 3.0, 0.0, 2.0], t)
    assert all(r.kind == "complex" for r in roots)
    with pytest.raises(NoRetardedRoot):
        retarded_root(roots)
    r = retarded_root(roots, allow_complex=True)
    assert r.causal == "retarded" and r.s.real < 10.0


def test_unequal_gamma_refused():
    t = GaussTrajectory(PacketParams([1, 0, 0, 0], [1, 2, 1, 1]), [0, 1, 0, 0])
    with pytest.raises(UnequalGamma):
        null_roots([5, 0, 0, 0], t)


def test_quartic_coefficients_match_direct_product():
    p = PacketParams([1.1, 0.2, 0.3, -0.4], 1.3)
    t = GaussTrajectory(p, [0.2, -0.3, 0.1, 0.5])
    x = np.array([7.0, 1.0, 2.0, -1.0])
    c = quartic_coefficients(x, p.u, t.amp, p.gamma[0])
    for s in (0.3, -2.0, 1.5 + 0.7j):
        prod = 1.0
        for tt in (t, t.other_sheet()):
            y = x - position(tt, s)
            prod *= minkowski_dot(y, y)
        assert np.polynomial.polynomial.polyval(s, c) == pytest.approx(prod, rel=1e-12)


def test_coulomb_limit():
    t = GaussTrajectory(PacketParams([1, 0, 0, 0], 1.0), np.zeros(4))
    x = np.array([7.0, 1.0, -2.0, 2.0])
    F = lw_faraday(x, t, retarded_root(null_roots(x, t)), 2.0)
    E, B = electric_magnetic(F.real)
    assert np.allclose(E, 2.0 * x[1:] / 27.0, rtol=1e-13) and np.allclose(B, 0, atol=1e-16)


@given(velocities(0.8), st.floats(0, 10), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_uniform_motion_field(u, t0, x1, x2, x3):
    # Heaviside's field of a uniformly moving charge, evaluated at the present position
    x = np.array([t0, x1, x2, x3])
    tr = GaussTrajectory(PacketParams(u, 1.0), np.zeros(4))
    if np.linalg.norm(x[1:] - u[1:] / u[0] * t0) < 0.5:
        return
    F = lw_faraday(x, tr, retarded_root(null_roots(x, tr)), 1.0).real
    E, B = electric_magnetic(F)
    v = u[1:] / u[0]
    R = x[1:] - v * t0
    v2 = v @ v
    sin2 = 0.0 if v2 == 0 else 1 - (R @ v) ** 2 / (R @ R * v2)
    Ec = (1 - v2) * R / ((R @ R) ** 1.5 * (1 - v2 * sin2) ** 1.5)
    assert np.allclose(E, Ec, rtol=1e-9, atol=1e-12 * np.linalg.norm(Ec))
    assert np.allclose(B, np.cross(v, Ec), rtol=1e-9, atol=1e-12 * np.linalg.norm(Ec))


def test_field_is_curl_of_potential():
    # F^{mu nu} = d^mu A^nu - d^nu A^mu with the root re-solved at each displaced point
    p = PacketParams([1.02, 0.1, 0.15, 0.0], 1.0)
    t = GaussTrajectory(p, [0.3, 0.5, -0.2, 0.4])
    x = np.array([9.0, 2.0, -1.0, 3.0])
    h = 1e-5

    def A(xx):
        return lw_potential(xx, t, retarded_root(null_roots(xx, t)), 1.0).real

    dA = np.array([(A(x + h * e) - A(x - h * e)) / (2 * h) for e in np.eye(4)])  # dA[mu, nu] = d_mu A^nu
    up = np.array([1.0, -1.0, -1.0, -1.0])[:, None] * dA  # d^mu A^nu
    F_fd = up - up.T
    F = lw_faraday(x, t, retarded_root(null_roots(x, t)), 1.0).real
    assert np.allclose(F, F_fd, atol=1e-8 * np.max(np.abs(F)))


def test_parts_add_up():
    t = GaussTrajectory(PacketParams([1.0, 0, 0, 0], 1.0), [0.2, 0.5, 0, 0])
    x = np.array([20.0, 0.0, 3.0, 8.0])
    r = retarded_root(null_roots(x, t))
    tot = lw_faraday(x, t, r, part="total")
    assert np.allclose(lw_faraday(x, t, r, part="velocity") + lw_faraday(x, t, r, part="acceleration"), tot)
    with pytest.raises(ValueError):
        lw_faraday(x, t, r, part="bogus")


def test_displaced_potential_reduces_to_coulomb():
    ax = np.linspace(-1, 1, 11)
    pts = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), -1).reshape(-1, 3)
    w = np.full(len(pts), (ax[1] - ax[0]) ** 3)
    rho = np.exp(-np.sum(pts**2, 1) / 0.08)
    rho /= np.sum(rho * w)
    J = np.stack([rho, 0 * rho, 0 * rho, 0 * rho], 1)
    phi = displaced_retarded_potential([0, 0, 0, 50.0], pts, w, J)
    assert phi[0].real == pytest.approx(1 / 50.0, rel=1e-6) and phi[0].imag == 0
    moving = displaced_retarded_potential([0, 0, 0, 50.0], pts, w, lambda p, tr: J * np.exp(0 * tr[:, None]))
    assert np.allclose(moving, phi)
    with pytest.raises(BranchAmbiguity):
        displaced_retarded_potential([0, 1.0, 0, 0], np.zeros((1, 3)), [1.0], [[1, 0, 0, 0]], [0, 0, 0, 1j])
