"""Tangent data of a submanifold at one point.

A :class:`SubmanifoldPoint` holds an orthonormal tangent frame ``e_1..e_n``
(containing ``xi`` in its span), a completing normal frame
``e_{n+1}..e_d`` and second-fundamental-form coefficients
``sigma[r, i, j] = <sigma(e_i, e_j), e_{n+r}>``. Indices are 0-based
throughout the Python API.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import PlaneSection, check_plane, complete_basis
from .contact import ValidationReport
from .curvature import curvature_tensor
from .errors import DimensionError, HypothesisError, InvalidPlaneError, InvalidSubmanifoldError, ShapeError

MODES = ("contact", "raw")
TANGENCY_TOL = 1e-10
SUBMANIFOLD_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SubmanifoldPoint:
    structure: object
    tangent: np.ndarray
    normal: np.ndarray
    sigma: np.ndarray
    mode: str = "contact"
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        d = self.structure.d
        t = _frozen(self.tangent)
        if t.ndim != 2 or t.shape[1] != d:
            raise ShapeError(f"tangent frame has shape {t.shape}, expected (n, {d})")
        n = t.shape[0]
        if n < 2:
            raise DimensionError(f"submanifold dimension must be >= 2, got {n}")
        nrm = self.normal
        if nrm is None:
            nrm = complete_basis(t, d).vectors
        nrm = _frozen(np.asarray(nrm, dtype=float).reshape(-1, d) if np.size(nrm) else np.zeros((0, d)))
        if nrm.shape != (d - n, d):
            raise ShapeError(f"normal frame has shape {nrm.shape}, expected ({d - n}, {d})")
        s = _frozen(self.sigma)
        if s.shape != (d - n, n, n):
            raise ShapeError(f"sigma has shape {s.shape}, expected ({d - n}, {n}, {n})")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "tangent", t)
        object.__setattr__(self, "normal", nrm)
        object.__setattr__(self, "sigma", s)

    @property
    def n(self):
        return self.tangent.shape[0]

    @property
    def d(self):
        return self.structure.d

    @property
    def codim(self):
        return self.d - self.n

    @cached_property
    def xi_coords(self):
        """Coordinates of ``xi`` in the tangent frame."""
        return _frozen(self.tangent @ self.structure.xi)

    @cached_property
    def sigma_vectors(self):
        """``sigma(e_i, e_j)`` as ambient vectors, shape ``(n, n, d)``."""
        return _frozen(np.einsum("rij,rd->ijd", self.sigma, self.normal))

    def with_sigma(self, sigma, mode=None):
        return SubmanifoldPoint(self.structure, self.tangent, self.normal, sigma, mode or self.mode)

    def normal_part(self, v):
        return self.normal.T @ (self.normal @ v)

    def tangent_coords(self, v):
        return self.tangent @ v

    def from_coords(self, u):
        return np.asarray(u, dtype=float) @ self.tangent

    def plane_from_coords(self, u, v):
        """Plane spanned by two tangent vectors given in frame coordinates."""
        return PlaneSection.spanned_by(self.from_coords(u), self.from_coords(v))

    def coordinate_plane(self, i=0, j=1):
        return PlaneSection(self.tangent[i], self.tangent[j])

    @cached_property
    def validation(self):
        return validate_submanifold(self, SUBMANIFOLD_TOL)

    def require_valid(self):
        self.structure.require_valid()
        if not self.validation.passed:
            raise InvalidSubmanifoldError(self.validation)

    def require_xi_tangent(self, tol=1e-8):
        res = float(np.linalg.norm(self.normal @ self.structure.xi))
        if res > tol:
            raise HypothesisError(f"xi is not tangent to the submanifold (normal part {res:.3e})")


def contact_xi_slice(sub):
    """Normal parts of ``-phi e_i - phi h e_i``: what contact geometry forces on ``sigma(e_i, xi)``.

    Returned as normal-frame coefficients, shape ``(codim, n)``.
    """
    S = sub.structure
    v = -(S.phi @ sub.tangent.T) - (S.phi_h @ sub.tangent.T)
    return sub.normal @ v


def _max_abs(a):
    return float(np.max(np.abs(a))) if a.size else 0.0


def validate_submanifold(sub, tol=1e-10, mode=None):
    mode = mode or sub.mode
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    S = sub.structure
    frame = np.vstack([sub.tangent, sub.normal])
    r = {
        "frame_orthonormal": float(np.max(np.abs(frame @ frame.T - np.eye(S.d)))),
        "xi_tangent": float(np.linalg.norm(sub.normal @ S.xi)),
        "sigma_symmetric": _max_abs(sub.sigma - sub.sigma.transpose(0, 2, 1)),
    }
    if mode == "contact":
        t = sub.xi_coords
        s_xi = np.einsum("rij,j->ri", sub.sigma, t)
        r["sigma_xi_xi"] = float(np.linalg.norm(s_xi @ t))
        r["sigma_xi_slice"] = _max_abs(s_xi - contact_xi_slice(sub))
    return ValidationReport(r, tol, name=f"submanifold[{mode}]")


@dataclass(frozen=True)
class MeanCurvature:
    vector: np.ndarray
    coefficients: np.ndarray
    norm_sq: float
    sigma_norm_sq: float


def mean_curvature(sub):
    """``H = (1/n) trace(sigma)`` together with ``|H|^2`` and ``|sigma|^2``."""
    hit = sub._cache.get("mean_curvature")
    if hit is not None:
        return hit
    coeff = np.trace(sub.sigma, axis1=1, axis2=2) / sub.n
    out = sub._cache["mean_curvature"] = MeanCurvature(
        vector=coeff @ sub.normal,
        coefficients=coeff,
        norm_sq=float(coeff @ coeff),
        sigma_norm_sq=float(np.sum(sub.sigma**2)),
    )
    return out


@dataclass(frozen=True)
class TangentialOperators:
    P: np.ndarray
    hT: np.ndarray
    phihT: np.ndarray

    @property
    def P_norm_sq(self):
        return float(np.sum(self.P**2))

    @property
    def hT_norm_sq(self):
        return float(np.sum(self.hT**2))

    @property
    def phihT_norm_sq(self):
        return float(np.sum(self.phihT**2))

    @property
    def trace_hT(self):
        return float(np.trace(self.hT))

    @property
    def trace_phihT(self):
        return float(np.trace(self.phihT))


def tangential_operators(sub):
    """Frame matrices ``Q[i, j] = <e_i, Q e_j>`` of P, h^T and (phi h)^T."""
    hit = sub._cache.get("tangential_operators")
    if hit is None:
        S = sub.structure
        E = sub.tangent
        hit = sub._cache["tangential_operators"] = TangentialOperators(
            P=E @ S.phi @ E.T,
            hT=E @ S.h @ E.T,
            phihT=E @ S.phi_h @ E.T,
        )
    return hit


def check_tangent_plane(sub, plane, tol=TANGENCY_TOL):
    check_plane(plane)
    if plane.e1.shape != (sub.d,):
        raise ShapeError(f"plane lives in R^{plane.e1.shape[0]}, ambient is R^{sub.d}")
    res = float(max(np.linalg.norm(sub.normal @ plane.e1), np.linalg.norm(sub.normal @ plane.e2)))
    if res > tol:
        raise InvalidPlaneError(f"plane is not tangent to the submanifold (normal part {res:.3e})")


def plane_invariants(sub, plane):
    """``(alpha, beta, gamma)`` of a tangent plane."""
    check_tangent_plane(sub, plane)
    ops = tangential_operators(sub)
    u, v = sub.tangent_coords(plane.e1), sub.tangent_coords(plane.e2)
    alpha = float(u @ ops.P @ v) ** 2
    t = sub.xi_coords
    eu, ev = float(t @ u), float(t @ v)
    beta = eu**2 + ev**2
    hT = ops.hT
    gamma = eu**2 * float(v @ hT @ v) + ev**2 * float(u @ hT @ u) - 2.0 * eu * ev * float(u @ hT @ v)
    return alpha, beta, gamma


def induced_curvature_tensor(sub, unchecked=False):
    """Induced ``R(e_i, e_j, e_k, e_l)`` for the tangent frame via the Gauss equation."""
    hit = sub._cache.get("induced")
    if hit is not None:
        return hit
    Rt = curvature_tensor(sub.structure, unchecked)
    E = sub.tangent
    amb = np.einsum("abcd,ia,jb,kc,ld->ijkl", Rt, E, E, E, E, optimize=True)
    s = sub.sigma
    # <sigma(e_i,e_l), sigma(e_j,e_k)> - <sigma(e_i,e_k), sigma(e_j,e_l)>
    g1 = np.einsum("ril,rjk->ijkl", s, s)
    g2 = np.einsum("rik,rjl->ijkl", s, s)
    R = amb + g1 - g2
    R.setflags(write=False)
    sub._cache["induced"] = R
    return R


def induced_curvature(sub, i, j, k, l, unchecked=False):
    n = sub.n
    for idx in (i, j, k, l):
        if not 0 <= idx < n:
            raise IndexError(f"index {idx} out of range for n={n}")
    return float(induced_curvature_tensor(sub, unchecked)[i, j, k, l])
