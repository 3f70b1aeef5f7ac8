"""Null roots in complex world time and single-root Lienard-Wiechert fields.

With ``y0 = x - O`` the null condition ``(x - X(s))^2 = 0`` for
``X(s) = u s + A f(s) + O`` (equal Gamma on all axes) reads

    C(s) = 2 f(s) D(s),   C = c0 + c1 s + c2 s^2,   D = d0 + d1 s

    c0 = y0^2 + A^2,  c1 = -2 u.y0,  c2 = u^2 + Gamma^2 A^2,
    d0 = y0.A,        d1 = -u.A.

Squaring gives the quartic ``C^2 - 4 g D^2 = 0`` with ``g = 1 + Gamma^2 s^2``.
Every quartic root solves ``C = +2 f D`` (sheet +1, amplitude A) or
``C = -2 f D`` (sheet -1, amplitude -A) with the principal ``f``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (BranchAmbiguity, DegenerateQuartic, DenominatorVanishes,
                     NoRetardedRoot, UnequalGamma)
from .minkowski import minkowski_dot, wedge
from .tolerances import DEFAULT
from .trajectory import GaussTrajectory, acceleration, position, velocity


@dataclass(frozen=True)
class NullRoot:
    s: complex
    sheet: int
    kind: str  # "retarded", "advanced" or "complex"
    residual: float
    causal: str  # sign of Re(x0 - X0(s)), kept for complex roots too

    def to_row(self) -> dict:
        return {"re_s": self.s.real, "im_s": self.s.imag, "sheet": self.sheet,
                "kind": self.kind, "residual": self.residual}


def _dot(a, b):
    return minkowski_dot(a, b)


def quartic_coefficients(y0, u, amp, gamma: float) -> np.ndarray:
    """Ascending coefficients of ``C^2 - 4 g D^2``; broadcasts over leading axes."""
    y0 = np.asarray(y0, dtype=complex)
    amp = np.asarray(amp, dtype=complex)
    c0 = _dot(y0, y0) + _dot(amp, amp)
    c1 = -2.0 * _dot(u, y0)
    c2 = _dot(u, u) + gamma**2 * _dot(amp, amp)
    d0 = _dot(y0, amp)
    d1 = -_dot(u, amp)
    g2 = gamma**2
    c0, c1, c2, d0, d1 = np.broadcast_arrays(c0, c1, c2, d0, d1)
    return np.stack([
        c0**2 - 4 * d0**2,
        2 * c0 * c1 - 8 * d0 * d1,
        c1**2 + 2 * c0 * c2 - 4 * d1**2 - 4 * g2 * d0**2,
        2 * c1 * c2 - 8 * g2 * d0 * d1,
        c2**2 - 4 * g2 * d1**2,
    ], axis=-1)


def _sheet_residual(s, y0, u, amp, gamma, sheet):
    """``C - 2 sheet f D`` and its s-derivative (the unrationalized equation)."""
    c0 = _dot(y0, y0) + _dot(amp, amp)
    c1 = -2.0 * _dot(u, y0)
    c2 = _dot(u, u) + gamma**2 * _dot(amp, amp)
    d0 = _dot(y0, amp)
    d1 = -_dot(u, amp)
    f = np.sqrt(1.0 + (gamma * s) ** 2)
    C = c0 + s * (c1 + s * c2)
    D = d0 + d1 * s
    h = C - 2 * sheet * f * D
    with np.errstate(divide="ignore", invalid="ignore"):
        dh = c1 + 2 * c2 * s - 2 * sheet * (gamma**2 * s / f * D + f * d1)
    return h, dh


def _companion_roots(coef: np.ndarray, tol: float) -> list[np.ndarray]:
    """Roots per row of ascending coefficients, trimming vanishing leading terms."""
    coef = np.atleast_2d(coef)
    out: list[np.ndarray | None] = [None] * coef.shape[0]
    mag = np.max(np.abs(coef), axis=-1)
    full = np.abs(coef[:, 4]) > tol * mag
    idx = np.nonzero(full)[0]
    if idx.size:
        c = coef[idx]
        comp = np.zeros((idx.size, 4, 4), dtype=complex)
        comp[:, 1:, :-1] = np.eye(3)
        comp[:, :, -1] = -c[:, :4] / c[:, 4:5]
        ev = np.linalg.eigvals(comp)
        for j, i in enumerate(idx):
            out[i] = ev[j]
    for i in np.nonzero(~full)[0]:
        c = coef[i].copy()
        while c.size > 1 and abs(c[-1]) <= tol * mag[i]:
            c = c[:-1]
        if c.size <= 1:
            raise DegenerateQuartic("null condition vanishes identically")
        out[i] = np.polynomial.polynomial.polyroots(c).astype(complex)
    return out  # type: ignore[return-value]


def _polish(s, y0, u, amp, gamma, sheet, iters: int = 12):
    h, _ = _sheet_residual(s, y0, u, amp, gamma, sheet)
    best, best_r = s, np.abs(h)
    for _ in range(iters):
        h, dh = _sheet_residual(best, y0, u, amp, gamma, sheet)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dh != 0, h / dh, 0.0)
        trial = best - step
        ht, _ = _sheet_residual(trial, y0, u, amp, gamma, sheet)
        r = np.abs(ht)
        take = np.isfinite(r) & (r < best_r)
        best = np.where(take, trial, best)
        best_r = np.where(take, r, best_r)
    return best, best_r


def _scale(x, t: GaussTrajectory) -> float:
    d = np.asarray(x, dtype=complex) - (t.amp + t.offset)
    return max(1.0, float(np.sqrt(np.sum(np.abs(d) ** 2))))


def _classify(s: complex, x0: float, X0: complex, tol) -> tuple[str, str]:
    causal = "retarded" if (x0 - X0).real > 0 else "advanced"
    kind = "complex" if abs(s.imag) > tol.root_imag * max(1.0, abs(s)) else causal
    return kind, causal


def _require_equal_gamma(t: GaussTrajectory) -> float:
    if not t.params.equal_gamma:
        raise UnequalGamma("null-root quartic needs equal Gamma on all axes")
    return float(t.params.gamma[0])


def null_roots(x, t: GaussTrajectory, tol=DEFAULT, diagnostics: dict | None = None) -> list[NullRoot]:
    """All null roots of both sheets at the real field point `x`.

    Quartic candidates come from companion-matrix eigenvalues, are assigned
    to the sheet with the smaller unrationalized residual and Newton
    polished.  Candidates that pass on neither sheet are dropped and counted
    in ``diagnostics['spurious']``.
    """
    x = np.asarray(x, dtype=float)
    gamma = _require_equal_gamma(t)
    u = t.params.u
    y0 = x - t.offset
    amp = t.amp
    scale = _scale(x, t)
    thresh = tol.root_residual * scale**2
    roots: list[NullRoot] = []
    spurious = 0

    if not np.any(amp != 0):
        # A = 0: both sheets coincide and the null condition is the quadratic C(s) = 0
        c = np.array([_dot(y0, y0), -2.0 * _dot(u, y0), _dot(u, u)])
        cand = _quadratic_roots(c, tol)
        for s in cand:
            s, r = _polish(np.asarray(s), y0, u, amp, gamma, 1)
            s = _snap_real(complex(s), c, tol)
            r = float(abs(_sheet_residual(s, y0, u, amp, gamma, 1)[0]))
            X0 = (u[0] * s + t.offset[0])
            kind, causal = _classify(s, x[0], X0, tol)
            roots.append(NullRoot(s, 1, kind, r, causal))
        return sorted(roots, key=lambda r: (r.s.real, r.s.imag))

    coef = quartic_coefficients(y0, u, amp, gamma)
    cand = _companion_roots(coef, tol.quartic_leading)[0]
    real_coef = not np.any(np.iscomplex(coef))
    for s0 in cand:
        hp, _ = _sheet_residual(s0, y0, u, amp, gamma, 1)
        hm, _ = _sheet_residual(s0, y0, u, amp, gamma, -1)
        order = (1, -1) if abs(hp) <= abs(hm) else (-1, 1)
        for sheet in order:
            s, r = _polish(np.asarray(s0), y0, u, amp, gamma, sheet)
            s = complex(s)
            if real_coef:
                s = _snap_real(s, None, tol, lambda z, sh=sheet: _sheet_residual(z, y0, u, amp, gamma, sh)[0])
            r = float(abs(_sheet_residual(s, y0, u, amp, gamma, sheet)[0]))
            if r < thresh:
                X0 = u[0] * s + sheet * amp[0] * np.sqrt(1 + (gamma * s) ** 2) + t.offset[0]
                kind, causal = _classify(s, x[0], X0, tol)
                roots.append(NullRoot(s, sheet, kind, r, causal))
                break
        else:
            spurious += 1
    if diagnostics is not None:
        diagnostics["spurious"] = spurious
    return _dedupe(roots)


def _quadratic_roots(c, tol) -> list[complex]:
    a2, a1, a0 = c[2], c[1], c[0]
    if abs(a2) <= tol.quartic_leading * max(abs(a0), abs(a1), abs(a2)):
        if a1 == 0:
            raise DegenerateQuartic("null condition vanishes identically")
        return [-a0 / a1]
    disc = np.sqrt(a1 * a1 - 4 * a2 * a0 + 0j)
    # numerically stable pair
    sgn = 1.0 if (np.conj(a1) * disc).real >= 0 else -1.0
    qq = -0.5 * (a1 + sgn * disc)
    if qq == 0:
        return [0j, 0j]
    return [qq / a2, a0 / qq]


def _snap_real(s: complex, c, tol, h=None) -> complex:
    """Drop a rounding-level imaginary part when the equation has real coefficients."""
    if s.imag == 0 or abs(s.imag) > tol.root_imag * max(1.0, abs(s)):
        return s
    if c is not None and np.any(np.iscomplex(c)):
        return s
    r = complex(s.real)
    if h is not None and abs(h(r)) > abs(h(s)) * 10 + 1e-300:
        return s
    return r


def _dedupe(roots: list[NullRoot]) -> list[NullRoot]:
    roots = sorted(roots, key=lambda r: (r.sheet, r.s.real, r.s.imag))
    out: list[NullRoot] = []
    for r in roots:
        if out and out[-1].sheet == r.sheet and abs(out[-1].s - r.s) <= 1e-9 * max(1.0, abs(r.s)):
            continue
        out.append(r)
    return out


def retarded_root(roots: list[NullRoot], sheet: int | None = 1, allow_complex: bool = False) -> NullRoot:
    """The retarded root of one sheet (the latest one if several exist).

    Complex roots are only considered with `allow_complex`, ranked by causal
    direction and then by smallest imaginary part.
    """
    cand = [r for r in roots if (sheet is None or r.sheet == sheet) and r.kind == "retarded"]
    if cand:
        return max(cand, key=lambda r: r.s.real)
    if allow_complex:
        cand = [r for r in roots if (sheet is None or r.sheet == sheet) and r.causal == "retarded"]
        if cand:
            return min(cand, key=lambda r: (abs(r.s.imag), -r.s.real))
    raise NoRetardedRoot("no retarded null root on the requested sheet")


def retarded_roots_batch(x, params, amps, offset=None, tol=DEFAULT):
    """Sheet +1 retarded roots for many field points and many real amplitudes.

    ``x`` is (4,) or (P, 4) and ``amps`` is (N, 4).  Returns ``(s, ok)`` of
    shape (P, N) (or (N,) for a single point): the latest real retarded root
    of each member and a mask of members that have one.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xs = np.atleast_2d(x)
    amps = np.atleast_2d(np.asarray(amps, dtype=complex))
    if not params.equal_gamma:
        raise UnequalGamma("null-root quartic needs equal Gamma on all axes")
    gamma = float(params.gamma[0])
    u = params.u
    off = np.zeros(4, dtype=complex) if offset is None else np.asarray(offset, dtype=complex)
    P, N = xs.shape[0], amps.shape[0]
    y0 = (xs - off)[:, None, :]  # (P, 1, 4)
    ab = amps[None, :, :]  # (1, N, 4)
    coef = quartic_coefficients(y0, u, ab, gamma).reshape(P * N, 5)
    cand_list = _companion_roots(coef, tol.quartic_leading)
    if all(len(c) == 4 for c in cand_list):
        cand = np.stack(cand_list)
    else:
        cand = np.full((P * N, 4), np.nan + 0j)
        for i, c in enumerate(cand_list):
            cand[i, :len(c)] = c
    cand = cand.reshape(P, N, 4)
    zero = ~np.any(amps != 0, axis=-1)
    if np.any(zero):
        # A = 0 members: the quartic is C(s)^2 with double roots; use the quadratic
        for pi in range(P):
            yy = y0[pi, 0]
            c = np.array([_dot(yy, yy), -2.0 * _dot(u, yy), _dot(u, u)])
            quad = _quadratic_roots(c, tol)
            cand[pi, zero] = np.nan
            cand[pi, zero, :len(quad)] = quad
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(xs[:, None, :] - ab - off) ** 2, axis=-1)))
    yb, abb = y0[:, :, None, :], ab[:, :, None, :]
    s, _ = _polish(cand, yb, u, abb, gamma, 1)
    s_real = s.real
    r_real = np.abs(_sheet_residual(s_real + 0j, yb, u, abb, gamma, 1)[0])
    with np.errstate(invalid="ignore"):
        ok = np.isfinite(s_real) & (np.abs(s.imag) <= tol.root_imag * np.maximum(1.0, np.abs(s))) \
            & (r_real < tol.root_residual * scale[..., None] ** 2)
        f = np.sqrt(1.0 + (gamma * s_real) ** 2)
        X0 = u[0] * s_real + amps[None, :, None, 0].real * f + off[0].real
        ok &= (xs[:, None, None, 0] - X0) > 0
    s_sel = np.where(ok, s_real, -np.inf).max(axis=-1)
    has = np.isfinite(s_sel)
    s_out = np.where(has, s_sel, np.nan)
    if single:
        return s_out[0], has[0]
    return s_out, has


def lw_faraday_state(x, X, V, a, q: float = 1.0, part: str = "total"):
    """Faraday tensor from the source state (X, V, a) at the retarded root.

    ``part`` selects the velocity (Coulomb-like, ~1/R^2) term, the
    acceleration (radiation, ~1/R) term, or their sum.  Broadcasts over
    leading axes.
    """
    R = np.asarray(x) - X
    D = minkowski_dot(V, R)
    RV = wedge(R, V)
    D3 = (D**3)[..., None, None]
    vel = (minkowski_dot(V, V)[..., None, None] * RV) / D3
    if part == "velocity":
        return q * vel
    acc = (wedge(R, a) * D[..., None, None] - RV * minkowski_dot(a, R)[..., None, None]) / D3
    if part == "acceleration":
        return q * acc
    if part != "total":
        raise ValueError(f"unknown field part {part!r}")
    return q * (vel + acc)


def _check_denominator(x, t, root, tol):
    X = position(t.on_sheet(root.sheet), root.s)
    V = velocity(t.on_sheet(root.sheet), root.s)
    D = minkowski_dot(V, np.asarray(x) - X)
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(np.asarray(x) - X) ** 2))))
    if abs(D) <= tol.lw_denominator * scale:
        raise DenominatorVanishes("field point on the light-cone caustic of the source")
    return X, V, D


def lw_potential(x, t: GaussTrajectory, root: NullRoot, q: float = 1.0, tol=DEFAULT) -> np.ndarray:
    """``q V / (V.(x - X))`` at the root, on the root's sheet."""
    _, V, D = _check_denominator(x, t, root, tol)
    return q * V / D


def lw_faraday(x, t: GaussTrajectory, root: NullRoot, q: float = 1.0, part: str = "total",
               tol=DEFAULT) -> np.ndarray:
    X, V, _ = _check_denominator(x, t, root, tol)
    a = acceleration(t.on_sheet(root.sheet), root.s)
    return lw_faraday_state(np.asarray(x, dtype=float), X, V, a, q, part)


def displaced_retarded_potential(x, points, weights, current, O=None, tol=DEFAULT) -> np.ndarray:
    """Retarded integral of a current displaced by the complex offset `O`.

    ``points`` are source positions (n, 3) with quadrature ``weights`` (n,).
    ``current`` is an (n, 4) array for a static source or a callable
    ``current(points, t_ret)`` accepting complex retarded times.
    """
    x = np.asarray(x, dtype=float)
    pts = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    O = np.zeros(4, dtype=complex) if O is None else np.asarray(O, dtype=complex)
    d = x[1:] - pts - O[1:]
    d2 = np.sum(d * d, axis=-1)
    if np.any(np.abs(d2) < tol.singular_ring):
        raise BranchAmbiguity("source point on the displaced singular ring")
    dist = np.sqrt(d2)
    if callable(current):
        J = np.asarray(current(pts, x[0] - O[0] - dist), dtype=complex)
    else:
        J = np.asarray(current, dtype=complex)
    return np.sum((w / dist)[:, None] * J, axis=0)
