"""Complex Minkowski-space primitives.

Signature (+,-,-,-), c = 1, Gaussian units.  Four-vectors are numpy arrays
of shape ``(..., 4)``; field tensors are ``(..., 4, 4)`` arrays with upper
indices.  Index conventions:

* ``E^i = F^{i0}``, ``B^i = -1/2 eps^{ijk} F_{jk}``
* ``eps^{0123} = +1``
* Riemann-Silberstein vector ``w = E + iB = W^{i0}``
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import NonOrthochronous, NotAntisymmetric, NotOnShell, OnSingularRing
from .tolerances import DEFAULT

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def _levi_civita4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


EPS4 = _levi_civita4()
EPS3 = np.zeros((3, 3, 3))
EPS3[0, 1, 2] = EPS3[1, 2, 0] = EPS3[2, 0, 1] = 1.0
EPS3[0, 2, 1] = EPS3[2, 1, 0] = EPS3[1, 0, 2] = -1.0


def minkowski_dot(a, b):
    """Bilinear Minkowski product ``a0 b0 - a.b``; no complex conjugation."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]


def lower(v):
    """Lower the index of a four-vector."""
    v = np.asarray(v)
    return v * np.array([1.0, -1.0, -1.0, -1.0])


def wedge(a, b):
    """Antisymmetric outer product ``a^mu b^nu - a^nu b^mu``."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., :, None] * b[..., None, :] - a[..., None, :] * b[..., :, None]


def boost(u, tol: float = DEFAULT.on_shell) -> np.ndarray:
    """Pure boost taking the rest frame (1,0,0,0) to the proper velocity `u`."""
    u = np.asarray(u)
    if np.iscomplexobj(u):
        if np.any(u.imag != 0):
            raise NotOnShell("boost velocity must be real")
        u = u.real
    u = u.astype(float)
    norm = float(minkowski_dot(u, u))
    if abs(norm - 1.0) > tol:
        raise NotOnShell(f"u.u = {norm!r}, expected 1")
    if u[0] <= 0:
        raise NonOrthochronous(f"u0 = {u[0]!r} must be positive")
    lam = np.empty((4, 4))
    lam[0, 0] = u[0]
    lam[0, 1:] = u[1:]
    lam[1:, 0] = u[1:]
    lam[1:, 1:] = np.eye(3) + np.outer(u[1:], u[1:]) / (1.0 + u[0])
    return lam


def _check_antisymmetric(F, tol: float) -> None:
    F = np.asarray(F)
    scale = max(1.0, float(np.max(np.abs(F)))) if F.size else 1.0
    if np.max(np.abs(F + np.swapaxes(F, -1, -2))) > tol * scale:
        raise NotAntisymmetric("tensor is not antisymmetric")


def dual(F) -> np.ndarray:
    """Hodge dual ``*F^{mu nu} = 1/2 eps^{mu nu a b} F_{a b}``."""
    F = np.asarray(F)
    F_low = ETA @ F @ ETA
    return 0.5 * np.einsum("mnab,...ab->...mn", EPS4, F_low)


def make_asd(F, tol: float = DEFAULT.antisymmetry) -> np.ndarray:
    """Complex Faraday tensor ``W = F + i *F``; satisfies ``*W = -iW``."""
    F = np.asarray(F)
    _check_antisymmetric(F, tol)
    return F + 1j * dual(F)


def faraday_from_eb(E, B) -> np.ndarray:
    """Field tensor with ``F^{i0} = E^i`` and ``F^{jk} = -eps^{jkl} B^l``.

    Complex-linear in (E, B), so complex arguments are accepted.
    """
    E = np.asarray(E)
    B = np.asarray(B)
    dtype = np.result_type(E, B, float)
    F = np.zeros(E.shape[:-1] + (4, 4), dtype=dtype)
    F[..., 1:, 0] = E
    F[..., 0, 1:] = -E
    F[..., 1:, 1:] = -np.einsum("jkl,...l->...jk", EPS3, B)
    return F


def electric_magnetic(F):
    """Return ``(E, B)`` from a field tensor."""
    F = np.asarray(F)
    E = F[..., 1:, 0]
    B = -0.5 * np.einsum("ijk,...jk->...i", EPS3, F[..., 1:, 1:])
    return E, B


def rs_of(W) -> np.ndarray:
    """Riemann-Silberstein vector ``W^{i0}`` of an anti-self-dual tensor."""
    return np.asarray(W)[..., 1:, 0].astype(complex)


def rs_to_faraday(w) -> np.ndarray:
    """Anti-self-dual tensor whose Riemann-Silberstein vector is `w`.

    ``F(E,B) + i*F(E,B) = F(w, -iw)`` because ``*F(E,B) = F(B,-E)``.
    """
    w = np.asarray(w, dtype=complex)
    return faraday_from_eb(w, -1j * w)


def physical_field(W) -> np.ndarray:
    """Projection of a complex tensor onto the real field, ``Re W``."""
    return np.real(np.asarray(W)).astype(float)


def energy_poynting(w):
    """Energy density ``1/2 |w|^2`` and momentum density ``(i/2) w x conj(w)``."""
    w = np.asarray(w, dtype=complex)
    energy = 0.5 * np.sum(np.abs(w) ** 2, axis=-1)
    p = 0.5j * np.cross(w, np.conj(w))
    return energy, p.real


def stress_energy(F_phys, tol: float = DEFAULT.antisymmetry) -> np.ndarray:
    """``4 pi T^{mu nu} = F^mu_l F^{l nu} + 1/4 g^{mu nu} F_ab F^ab``."""
    F = np.asarray(F_phys, dtype=float)
    _check_antisymmetric(F, tol)
    invariant = np.einsum("...ab,...ab->...", ETA @ F @ ETA, F)
    T = F @ ETA @ F + 0.25 * ETA * invariant[..., None, None]
    return T / (4.0 * np.pi)


def kn_static_field(x, z0, q: float, sheet: int = 1, tol: float = DEFAULT.singular_ring) -> np.ndarray:
    """Riemann-Silberstein field of a charge at the complex point `z0`.

    ``W = -grad q / sqrt((x - z0)^2)``.  The principal square root is the
    branch continuous from real infinity (Re > 0); its cut is the disk
    bounded by the singular ring.  ``sheet=-1`` selects the other sheet,
    where the source looks like charge ``-q``.
    """
    x = np.asarray(x, dtype=float)
    d = x - np.asarray(z0, dtype=complex)
    d2 = np.sum(d * d, axis=-1)
    if np.any(np.abs(d2) < tol):
        raise OnSingularRing("field point on the complexified singular ring")
    root = sheet * np.sqrt(d2)
    return q * d / (root**3)[..., None]


def kn_static_potential(x, z0, q: float, sheet: int = 1, tol: float = DEFAULT.singular_ring):
    """Complex Coulomb potential ``q / sqrt((x - z0)^2)``."""
    x = np.asarray(x, dtype=float)
    d = x - np.asarray(z0, dtype=complex)
    d2 = np.sum(d * d, axis=-1)
    if np.any(np.abs(d2) < tol):
        raise OnSingularRing("field point on the complexified singular ring")
    return q / (sheet * np.sqrt(d2))
