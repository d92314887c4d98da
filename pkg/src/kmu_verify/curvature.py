"""Curvature tensor of a (kappa, mu)-contact space form.

Two independent evaluations are provided. :func:`ambient_curvature_direct`
transcribes the six term groups literally with vector operations, and
:func:`curvature_tensor` assembles the full (0, 4) tensor
``R[a, b, c, d] = <R(e_a, e_b) e_c, e_d>`` in index form. Everything
downstream uses the tensor; the direct path exists to be compared against it.
"""

import numpy as np

from .algebra import check_plane
from .errors import ShapeError

_TENSOR_KEY = "curvature_tensor"


def _require(S, unchecked):
    if not unchecked:
        S.require_valid()


def _vec(S, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (S.d,):
        raise ShapeError(f"vector has shape {x.shape}, expected ({S.d},)")
    return x


def ambient_curvature_direct(S, X, Y, Z, unchecked=False):
    """``R(X, Y) Z`` written term group by term group."""
    _require(S, unchecked)
    X, Y, Z = _vec(S, X), _vec(S, Y), _vec(S, Z)
    phi, h, xi = S.phi, S.h, S.xi
    c, kappa, mu = S.c, S.kappa, S.mu

    def ip(a, b):
        return float(a @ b)

    def eta(a):
        return float(xi @ a)

    phiX, phiY, phiZ = phi @ X, phi @ Y, phi @ Z
    hX, hY, hZ = h @ X, h @ Y, h @ Z
    phihX, phihY = phi @ hX, phi @ hY
    phi2X, phi2Y = phi @ phiX, phi @ phiY

    out = (c + 3.0) / 4.0 * (ip(Y, Z) * X - ip(X, Z) * Y)
    out = out + (c - 1.0) / 4.0 * (
        2.0 * ip(X, phiY) * phiZ + ip(X, phiZ) * phiY - ip(Y, phiZ) * phiX
    )
    out = out + (c + 3.0 - 4.0 * kappa) / 4.0 * (
        eta(X) * eta(Z) * Y - eta(Y) * eta(Z) * X + ip(X, Z) * eta(Y) * xi - ip(Y, Z) * eta(X) * xi
    )
    out = out + 0.5 * (
        ip(hY, Z) * hX - ip(hX, Z) * hY + ip(phihX, Z) * phihY - ip(phihY, Z) * phihX
    )
    out = out + (ip(phiY, phiZ) * hX - ip(phiX, phiZ) * hY + ip(hX, Z) * phi2Y - ip(hY, Z) * phi2X)
    out = out + mu * (
        eta(Y) * eta(Z) * hX - eta(X) * eta(Z) * hY + ip(hY, Z) * eta(X) * xi - ip(hX, Z) * eta(Y) * xi
    )
    return out


def _build_tensor(S):
    d = S.d
    I = np.eye(d)
    F = S.phi
    H = S.h
    G = S.phi @ S.h
    F2 = F @ F
    FtF = F.T @ F
    e = S.xi
    c, kappa, mu = S.c, S.kappa, S.mu
    ein = np.einsum

    t1 = ein("bc,ad->abcd", I, I) - ein("ac,bd->abcd", I, I)
    t2 = 2.0 * ein("ab,dc->abcd", F, F) + ein("ac,db->abcd", F, F) - ein("bc,da->abcd", F, F)
    t3 = (
        ein("a,c,bd->abcd", e, e, I)
        - ein("b,c,ad->abcd", e, e, I)
        + ein("ac,b,d->abcd", I, e, e)
        - ein("bc,a,d->abcd", I, e, e)
    )
    t4 = ein("cb,da->abcd", H, H) - ein("ca,db->abcd", H, H) + ein("ca,db->abcd", G, G) - ein("cb,da->abcd", G, G)
    t5 = ein("bc,da->abcd", FtF, H) - ein("ac,db->abcd", FtF, H) + ein("ca,db->abcd", H, F2) - ein("cb,da->abcd", H, F2)
    t6 = (
        ein("b,c,da->abcd", e, e, H)
        - ein("a,c,db->abcd", e, e, H)
        + ein("cb,a,d->abcd", H, e, e)
        - ein("ca,b,d->abcd", H, e, e)
    )
    R = (
        (c + 3.0) / 4.0 * t1
        + (c - 1.0) / 4.0 * t2
        + (c + 3.0 - 4.0 * kappa) / 4.0 * t3
        + 0.5 * t4
        + t5
        + mu * t6
    )
    R.setflags(write=False)
    return R


def curvature_tensor(S, unchecked=False):
    """Full ``(d, d, d, d)`` array ``<R(e_a, e_b) e_c, e_d>``, cached per structure."""
    _require(S, unchecked)
    R = S._cache.get(_TENSOR_KEY)
    if R is None:
        R = _build_tensor(S)
        S._cache[_TENSOR_KEY] = R
    return R


def ambient_curvature(S, X, Y, Z, unchecked=False):
    """``R(X, Y) Z`` as an ambient vector."""
    R = curvature_tensor(S, unchecked)
    X, Y, Z = _vec(S, X), _vec(S, Y), _vec(S, Z)
    return np.einsum("abcd,a,b,c->d", R, X, Y, Z)


def ambient_curvature_quad(S, X, Y, Z, W, unchecked=False):
    """``<R(X, Y) Z, W>``."""
    R = curvature_tensor(S, unchecked)
    X, Y, Z, W = (_vec(S, v) for v in (X, Y, Z, W))
    return float(np.einsum("abcd,a,b,c,d->", R, X, Y, Z, W))


def ambient_sectional(S, plane, unchecked=False):
    check_plane(plane)
    return ambient_curvature_quad(S, plane.e1, plane.e2, plane.e2, plane.e1, unchecked)


def nullity_residual(S, X, Y, unchecked=False):
    """Max-abs deviation of ``R(X, Y) xi`` from the (kappa, mu)-nullity form."""
    X, Y = _vec(S, X), _vec(S, Y)
    lhs = ambient_curvature(S, X, Y, S.xi, unchecked)
    ex, ey = float(S.xi @ X), float(S.xi @ Y)
    rhs = S.kappa * (ey * X - ex * Y) + S.mu * (ey * (S.h @ X) - ex * (S.h @ Y))
    return float(np.max(np.abs(lhs - rhs)))


def tensor_symmetry_residuals(R):
    """Algebraic-symmetry residuals of a (0, 4) curvature array."""
    return {
        "antisym_xy": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
        "antisym_zw": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))),
        "pair_symmetry": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))),
        "bianchi": float(np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)))),
    }
