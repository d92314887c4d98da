"""Scalar curvature, sectional curvature and Chen delta-invariants.

The infimum of sectional curvature over tangent 2-planes is computed by a
multistart Riemannian descent on orthonormal 2-frames (the Stiefel manifold,
with the objective invariant under in-plane rotation so minimizing over it
is minimizing over the Grassmannian). :func:`brute_force_min_sectional` is
an independent grid oracle for small dimensions.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .algebra import PlaneSection, complete_basis
from .errors import BudgetError, DimensionError
from .submanifold import check_tangent_plane, induced_curvature_tensor

DOMAINS = ("all", "D")
DEFAULT_RESTARTS = 64
DEFAULT_MAX_ITER = 500
DEFAULT_GRAD_TOL = 1e-10
DEFAULT_MAX_SAMPLES = 5_000_000
ORACLE_AGREEMENT_TOL = 1e-4


def scalar_curvature(sub, unchecked=False):
    """``tau = sum_{i<j} K(e_i, e_j)`` over the tangent frame."""
    if sub.n < 2:
        raise DimensionError("scalar curvature needs n >= 2")
    R = induced_curvature_tensor(sub, unchecked)
    tau = sub._cache.get("tau")
    if tau is None:
        # sum over i < j is half the full double sum since R[i, i, i, i] = 0
        tau = sub._cache["tau"] = 0.5 * float(np.einsum("ijji->", R))
    return tau


def sectional_curvature(sub, plane, unchecked=False):
    check_tangent_plane(sub, plane)
    R = induced_curvature_tensor(sub, unchecked)
    u, v = sub.tangent_coords(plane.e1), sub.tangent_coords(plane.e2)
    return float(np.einsum("abcd,a,b,c,d->", R, u, v, v, u))


# --- objective on 2-frames ---------------------------------------------------


def _pair_matrix(R):
    k = R.shape[0]
    return R.transpose(0, 3, 1, 2).reshape(k * k, k * k)


def frame_objective(R, U):
    """``R(u, v, v, u)`` for a batch of frames ``U`` of shape ``(B, k, 2)``."""
    k = R.shape[0]
    u, v = U[..., 0], U[..., 1]
    uu = (u[:, :, None] * u[:, None, :]).reshape(-1, k * k)
    vv = (v[:, :, None] * v[:, None, :]).reshape(-1, k * k)
    return np.einsum("bi,bi->b", uu @ _pair_matrix(R), vv)


def frame_gradient(R, U):
    """Euclidean gradient of :func:`frame_objective`, from multilinearity.

    With ``v`` fixed the objective is the quadratic form ``u^T A u`` where
    ``A[a, d] = R(a, v, v, d)``, and symmetrically in ``v``.
    """
    k = R.shape[0]
    M = _pair_matrix(R)
    u, v = U[..., 0], U[..., 1]
    uu = (u[:, :, None] * u[:, None, :]).reshape(-1, k * k)
    vv = (v[:, :, None] * v[:, None, :]).reshape(-1, k * k)
    A = (vv @ M.T).reshape(-1, k, k)
    Bm = (uu @ M).reshape(-1, k, k)
    gu = np.einsum("bij,bj->bi", A + A.transpose(0, 2, 1), u)
    gv = np.einsum("bij,bj->bi", Bm + Bm.transpose(0, 2, 1), v)
    return np.stack([gu, gv], axis=-1)


def _retract(X):
    u = X[..., 0]
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    v = X[..., 1] - np.sum(u * X[..., 1], axis=-1, keepdims=True) * u
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    return np.stack([u, v], axis=-1)


def _riemannian_grad(R, U):
    G = frame_gradient(R, U)
    UtG = np.einsum("bki,bkj->bij", U, G)
    sym = 0.5 * (UtG + UtG.transpose(0, 2, 1))
    return G - U @ sym


@dataclass
class DescentResult:
    frames: np.ndarray
    values: np.ndarray
    grad_norms: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray


def descend(R, U0, max_iter=DEFAULT_MAX_ITER, grad_tol=DEFAULT_GRAD_TOL):
    """Batched projected-gradient descent on orthonormal 2-frames.

    Trial steps are Barzilai-Borwein lengths, safeguarded by Armijo
    backtracking; the retraction is Gram-Schmidt on the two columns.
    """
    U = _retract(np.array(U0, dtype=float))
    B = U.shape[0]
    f = frame_objective(R, U)
    G = _riemannian_grad(R, U)
    gn = np.linalg.norm(G, axis=(1, 2))
    step = np.full(B, 0.5)
    iters = np.zeros(B, dtype=int)
    stalled = np.zeros(B, dtype=bool)
    for _ in range(max_iter):
        active = (gn > grad_tol) & ~stalled
        if not active.any():
            break
        idx = np.flatnonzero(active)
        U_old, G_old = U[idx].copy(), G[idx].copy()
        pending = idx
        trial = step.copy()
        while pending.size:
            cand = _retract(U[pending] - trial[pending, None, None] * G[pending])
            fc = frame_objective(R, cand)
            slack = 1e-14 * (1.0 + np.abs(f[pending]))
            ok = fc <= f[pending] - 1e-4 * trial[pending] * gn[pending] ** 2 + slack
            acc = pending[ok]
            U[acc], f[acc] = cand[ok], fc[ok]
            rej = pending[~ok]
            trial[rej] *= 0.5
            tiny = trial[rej] < 1e-14
            stalled[rej[tiny]] = True
            pending = rej[~tiny]
        G[idx] = _riemannian_grad(R, U[idx])
        gn[idx] = np.linalg.norm(G[idx], axis=(1, 2))
        s_ = (U[idx] - U_old).reshape(len(idx), -1)
        y_ = (G[idx] - G_old).reshape(len(idx), -1)
        sy = np.abs(np.sum(s_ * y_, axis=1))
        ss = np.sum(s_ * s_, axis=1)
        bb = np.where(sy > 1e-300, ss / np.maximum(sy, 1e-300), 1.0)
        step[idx] = np.clip(bb, 1e-8, 10.0)
        iters[idx] += 1
    # A stalled line search only counts as converged at the floating-point floor.
    converged = (gn <= grad_tol) | (stalled & (gn <= 1e-6))
    return DescentResult(U, f, gn, iters, converged)


# --- domains -----------------------------------------------------------------


def domain_basis(sub, domain):
    """Orthonormal basis (tangent coordinates, columns) of the search domain."""
    if domain not in DOMAINS:
        raise ValueError(f"domain must be one of {DOMAINS}, got {domain!r}")
    n = sub.n
    if domain == "all":
        if n < 2:
            raise DimensionError("need n >= 2")
        return np.eye(n)
    if n < 3:
        raise DimensionError(f"domain D needs n >= 3 to contain a 2-plane, got n={n}")
    t = sub.xi_coords / np.linalg.norm(sub.xi_coords)
    return complete_basis(t[None, :], n, seed=0).vectors.T


def _reduced_tensor(sub, B, unchecked=False):
    R = induced_curvature_tensor(sub, unchecked)
    return np.einsum("ijkl,ia,jb,kc,ld->abcd", R, B, B, B, B, optimize=True)


def _plane(sub, B, frame):
    return PlaneSection.spanned_by(sub.from_coords(B @ frame[:, 0]), sub.from_coords(B @ frame[:, 1]))


@dataclass
class SectionalMinimum:
    min_K: float
    plane: PlaneSection
    restarts_used: int
    converged: bool
    iterations: int = 0
    spread: float = 0.0


def min_sectional(
    sub,
    domain="all",
    restarts=DEFAULT_RESTARTS,
    seed=0,
    max_iter=DEFAULT_MAX_ITER,
    grad_tol=DEFAULT_GRAD_TOL,
    unchecked=False,
):
    """Minimize sectional curvature over tangent 2-planes (optionally inside D).

    ``spread`` is the range of the converged restart values, a cheap
    diagnostic for multimodality.
    """
    if restarts < 1:
        raise ValueError("restarts must be positive")
    B = domain_basis(sub, domain)
    k = B.shape[1]
    R = _reduced_tensor(sub, B, unchecked)
    if k == 2:
        frame = np.eye(2)
        val = float(frame_objective(R, frame[None])[0])
        return SectionalMinimum(val, _plane(sub, B, frame), 1, True)
    rng = np.random.default_rng(seed)
    U0 = rng.standard_normal((restarts, k, 2))
    res = descend(R, U0, max_iter, grad_tol)
    best = int(np.argmin(res.values))
    vals = res.values[res.converged] if res.converged.any() else res.values
    return SectionalMinimum(
        min_K=float(res.values[best]),
        plane=_plane(sub, B, res.frames[best]),
        restarts_used=restarts,
        converged=bool(res.converged[best]),
        iterations=int(res.iterations[best]),
        spread=float(vals.max() - vals.min()),
    )


# --- grid oracle -------------------------------------------------------------


def _sphere_frames(resolution):
    theta = np.linspace(0.0, np.pi / 2, resolution)
    phi = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    N = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
    helper = np.zeros_like(N)
    helper[np.arange(len(N)), np.argmin(np.abs(N), axis=1)] = 1.0
    u = helper - np.sum(helper * N, axis=1, keepdims=True) * N
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v = np.cross(N, u)
    return np.stack([u, v], axis=-1)


def _chart_frames(k, resolution, chunk=200_000):
    """Yield frame batches covering G(2, k) by affine charts with entries in [-1, 1].

    Every plane has a chart (its largest 2x2 Pluecker minor) in which the
    off-pivot coordinates are bounded by 1, so the union is a full cover.
    """
    grid = np.linspace(-1.0, 1.0, resolution)
    free = 2 * (k - 2)
    total = resolution**free
    for p, q in combinations(range(k), 2):
        others = [i for i in range(k) if i not in (p, q)]
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total))
            block = np.stack(np.unravel_index(flat, (resolution,) * free), axis=1)
            W = grid[block].reshape(-1, k - 2, 2)
            X = np.zeros((len(W), k, 2))
            X[:, p, 0] = 1.0
            X[:, q, 1] = 1.0
            X[:, others, :] = W
            yield _retract(X)


def grid_sample_count(k, resolution):
    if k <= 2:
        return 1
    if k == 3:
        return resolution * resolution
    return comb(k, 2) * resolution ** (2 * (k - 2))


def brute_force_min_sectional(
    sub, domain="all", resolution=400, max_samples=DEFAULT_MAX_SAMPLES, refine=True, unchecked=False
):
    """Grid minimum of sectional curvature, polished by one local descent.

    For a 3-dimensional domain the planes are indexed by their unit normal
    on a ``resolution x resolution`` hemisphere grid; larger domains use
    bounded affine charts with ``resolution`` points per coordinate.
    """
    B = domain_basis(sub, domain)
    k = B.shape[1]
    R = _reduced_tensor(sub, B, unchecked)
    if k == 2:
        return float(frame_objective(R, np.eye(2)[None])[0])
    count = grid_sample_count(k, resolution)
    if count > max_samples:
        raise BudgetError(f"grid needs {count} samples, cap is {max_samples}")
    best_val, best_frame = np.inf, None
    batches = [_sphere_frames(resolution)] if k == 3 else _chart_frames(k, resolution)
    for frames in batches:
        vals = frame_objective(R, frames)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_frame = float(vals[i]), frames[i]
    if refine:
        res = descend(R, best_frame[None])
        best_val = min(best_val, float(res.values[0]))
    return best_val


# --- delta -------------------------------------------------------------------


@dataclass
class DeltaResult:
    value: float
    minimizing_plane: PlaneSection
    min_K: float
    tau: float
    domain: str
    restarts_used: int
    converged: bool
    oracle_min_K: float = None
    meta: dict = field(default_factory=dict)

    @property
    def oracle_agrees(self):
        if self.oracle_min_K is None:
            return None
        return abs(self.oracle_min_K - self.min_K) < ORACLE_AGREEMENT_TOL

    def to_dict(self):
        return {
            "value": self.value,
            "tau": self.tau,
            "min_K": self.min_K,
            "domain": self.domain,
            "oracle_min_K": self.oracle_min_K,
            "oracle_agrees": self.oracle_agrees,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "minimizing_plane": [self.minimizing_plane.e1.tolist(), self.minimizing_plane.e2.tolist()],
            **self.meta,
        }


def delta(
    sub,
    domain="all",
    restarts=DEFAULT_RESTARTS,
    seed=0,
    grid_resolution=0,
    max_samples=DEFAULT_MAX_SAMPLES,
    unchecked=False,
):
    """Chen's invariant ``tau - inf K`` (``domain="D"`` restricts to planes orthogonal to xi)."""
    tau = scalar_curvature(sub, unchecked)
    m = min_sectional(sub, domain, restarts=restarts, seed=seed, unchecked=unchecked)
    oracle = None
    if grid_resolution:
        oracle = brute_force_min_sectional(sub, domain, grid_resolution, max_samples, unchecked=unchecked)
    return DeltaResult(
        value=tau - m.min_K,
        minimizing_plane=m.plane,
        min_K=m.min_K,
        tau=tau,
        domain=domain,
        restarts_used=m.restarts_used,
        converged=m.converged,
        oracle_min_K=oracle,
        meta={"iterations": m.iterations, "restart_spread": m.spread},
    )
