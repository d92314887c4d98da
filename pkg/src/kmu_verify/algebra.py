"""Small dense linear algebra shared by the rest of the package.

All ambient data lives in an orthonormal coordinate system, so the metric is
the identity and inner products are plain dot products.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateInputError, DimensionError, InvalidPlaneError, ShapeError

RANK_TOL = 1e-10
ORTHO_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered orthonormal vectors, stored as the rows of a ``(k, d)`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim == 1 and v.size == 0:
            raise ShapeError("empty frame needs an explicit (0, d) shape")
        if v.ndim != 2:
            raise ShapeError(f"frame must be 2-D, got shape {v.shape}")
        if v.shape[0] > v.shape[1]:
            raise DimensionError(f"{v.shape[0]} vectors cannot be orthonormal in R^{v.shape[1]}")
        object.__setattr__(self, "vectors", _frozen(v))

    def __len__(self):
        return self.vectors.shape[0]

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    @property
    def dim(self):
        return self.vectors.shape[1]

    def gram_residual(self):
        k = len(self)
        if k == 0:
            return 0.0
        return float(np.max(np.abs(self.vectors @ self.vectors.T - np.eye(k))))


@dataclass(frozen=True, eq=False)
class PlaneSection:
    """A 2-plane given by an ordered orthonormal pair of ambient vectors."""

    e1: np.ndarray
    e2: np.ndarray

    def __post_init__(self):
        e1, e2 = _frozen(self.e1), _frozen(self.e2)
        if e1.ndim != 1 or e1.shape != e2.shape:
            raise ShapeError(f"plane vectors must be matching 1-D arrays, got {e1.shape}, {e2.shape}")
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)

    @cached_property
    def basis(self):
        b = np.stack([self.e1, self.e2])
        b.setflags(write=False)
        return b

    @cached_property
    def _residual(self):
        b = self.basis
        return float(np.max(np.abs(b @ b.T - np.eye(2))))

    def orthonormality_residual(self):
        return self._residual

    def rotated(self, theta):
        """Rotate the basis inside the plane by ``theta``."""
        c, s = np.cos(theta), np.sin(theta)
        return PlaneSection(c * self.e1 + s * self.e2, -s * self.e1 + c * self.e2)

    def swapped(self):
        return PlaneSection(self.e2, self.e1)

    @classmethod
    def spanned_by(cls, x, y):
        """Orthonormalize ``(x, y)`` and return the plane they span."""
        f = orthonormalize([x, y])
        return cls(f[0], f[1])


def orthonormalize(vectors, tol=RANK_TOL):
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    The first output vector is parallel to the first input vector and the
    spans of every leading subset are preserved. Raises
    :class:`DegenerateInputError` naming the first vector whose residual norm
    drops below ``tol``.
    """
    a = np.atleast_2d(np.asarray(vectors, dtype=float))
    if a.ndim != 2:
        raise ShapeError(f"expected a list of vectors, got shape {a.shape}")
    k, d = a.shape
    if k > d:
        raise DimensionError(f"{k} vectors in R^{d} are necessarily dependent")
    out = np.zeros((k, d))
    for i in range(k):
        w = a[i].copy()
        for _ in range(2):
            for j in range(i):
                w -= (out[j] @ w) * out[j]
        norm = np.linalg.norm(w)
        scale = max(1.0, np.linalg.norm(a[i]))
        if norm <= tol * scale:
            raise DegenerateInputError(i, norm)
        out[i] = w / norm
    return Frame(out)


def complete_basis(partial, d, seed=0):
    """Extend an orthonormal frame to an orthonormal basis of R^d.

    The ``d - k`` new vectors are drawn from a seeded Gaussian and
    orthogonalized against everything accepted so far, so the result is
    deterministic in ``seed``.
    """
    p = partial.vectors if isinstance(partial, Frame) else np.asarray(partial, dtype=float)
    p = p.reshape(-1, d) if p.size else np.zeros((0, d))
    k = p.shape[0]
    if k > d:
        raise DimensionError(f"partial frame has {k} vectors, more than d={d}")
    if p.shape[1] != d:
        raise ShapeError(f"partial frame lives in R^{p.shape[1]}, not R^{d}")
    rng = np.random.default_rng(seed)
    basis = list(p)
    new = []
    while len(basis) < d:
        w = rng.standard_normal(d)
        for _ in range(2):
            for b in basis:
                w -= (b @ w) * b
        norm = np.linalg.norm(w)
        if norm < 1e-6:
            continue
        w /= norm
        basis.append(w)
        new.append(w)
    return Frame(np.array(new).reshape(len(new), d))


def check_plane(plane, tol=ORTHO_TOL):
    res = plane.orthonormality_residual()
    if not np.isfinite(res) or res > tol:
        raise InvalidPlaneError(f"plane basis is not orthonormal (residual {res:.3e})")


def restrict_to_plane(operator, plane):
    """2x2 matrix ``M[a, b] = <A e_a, e_b>`` of an operator on a plane."""
    a = np.asarray(operator, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != plane.e1.shape[0]:
        raise ShapeError(f"operator shape {a.shape} does not match plane dimension {plane.e1.shape[0]}")
    check_plane(plane)
    e = plane.basis
    return e @ a.T @ e.T


def rotation2(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])
