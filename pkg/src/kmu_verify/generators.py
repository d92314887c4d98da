"""Seeded constructors for submanifold data covering each hypothesis class.

All generators are pure functions of their arguments: the same arguments and
seed give bit-identical arrays.
"""

import numpy as np

from .algebra import PlaneSection, complete_basis, orthonormalize
from .errors import DimensionError, PreconditionError, ShapeError
from .submanifold import SubmanifoldPoint, contact_xi_slice


def _rng(seed):
    return np.random.default_rng(seed)


def _xi_last_frame(S, vecs):
    f = orthonormalize(np.vstack([S.xi[None, :], vecs])).vectors
    return np.vstack([f[1:], f[:1]])


def impose_contact_slice(sub):
    """Overwrite the xi-slices of sigma with what contact geometry forces.

    Works in any tangent frame: sigma is rotated so that the unit xi
    direction is a frame vector, the slices are replaced, and the result is
    rotated back.
    """
    n = sub.n
    t = sub.xi_coords
    if abs(np.linalg.norm(t) - 1.0) > 1e-10:
        raise PreconditionError("xi must be tangent before imposing contact slices")
    Q = np.vstack([complete_basis(t[None, :], n, seed=0).vectors, t[None, :]])
    s = np.einsum("ai,rij,bj->rab", Q, sub.sigma, Q)
    rotated = SubmanifoldPoint(sub.structure, Q @ sub.tangent, sub.normal, s, "raw")
    forced = contact_xi_slice(rotated)
    s[:, -1, :] = forced
    s[:, :, -1] = forced
    s[:, -1, -1] = 0.0
    s = np.einsum("ai,rab,bj->rij", Q, s, Q)
    return sub.with_sigma(0.5 * (s + s.transpose(0, 2, 1)), mode="contact")


def random_submanifold(S, n, seed=0, mode="contact", sigma_scale=1.0):
    """Random tangent n-space through xi with random second fundamental form.

    The tangent frame is the orthonormalization of ``xi`` and ``n - 1``
    Gaussian vectors, reordered so that ``xi`` is the last frame vector.
    ``sigma`` entries are uniform in ``[-sigma_scale, sigma_scale]``; in
    contact mode the xi-slices are then replaced by their forced values.
    """
    d = S.d
    if not 2 <= n <= d:
        raise DimensionError(f"n must lie in [2, {d}], got {n}")
    rng = _rng(seed)
    tangent = _xi_last_frame(S, rng.standard_normal((n - 1, d)))
    normal = complete_basis(tangent, d, seed=seed).vectors
    s = rng.uniform(-sigma_scale, sigma_scale, size=(d - n, n, n))
    s = np.triu(s) + np.triu(s, 1).transpose(0, 2, 1)
    if mode == "contact":
        forced = contact_xi_slice(SubmanifoldPoint(S, tangent, normal, s, "raw"))
        s[:, -1, :] = forced
        s[:, :, -1] = forced
        s[:, -1, -1] = 0.0
    return SubmanifoldPoint(S, tangent, normal, s, mode)


def invariant_frame(S, n, seed=0):
    """Tangent frame ``v_1, phi v_1, ..., v_k, phi v_k, xi`` of a phi-invariant subspace.

    For ``kappa < 1`` the ``v_i`` are taken in the positive eigenspace of h,
    which makes the subspace h-invariant as well.
    """
    if n % 2 == 0:
        raise DimensionError(f"invariant submanifolds have odd dimension, got n={n}")
    k = (n - 1) // 2
    if k < 1 or k > S.m:
        raise DimensionError(f"need 1 <= (n-1)/2 <= m={S.m}, got n={n}")
    rng = _rng(seed)
    if S.kappa < 1.0:
        w, V = np.linalg.eigh(S.h)
        allowed = V[:, w > 0.5 * np.sqrt(1.0 - S.kappa)]
    else:
        allowed = np.eye(S.d) - np.outer(S.xi, S.xi)
    vs = []
    while len(vs) < k:
        v = allowed @ rng.standard_normal(allowed.shape[1])
        for _ in range(2):
            v = v - (S.xi @ v) * S.xi
            for a in vs:
                v = v - (a @ v) * a
                pa = S.phi @ a
                v = v - (pa @ v) * pa
        if np.linalg.norm(v) < 1e-6:
            continue
        vs.append(v / np.linalg.norm(v))
    rows = []
    for v in vs:
        rows.extend([v, S.phi @ v])
    rows.append(S.xi)
    return np.array(rows)


def invariant_submanifold(S, n, seed=0, sigma_scale=1.0):
    """phi-invariant (and, for kappa < 1, h-invariant) tangent space with compatible sigma.

    ``sigma(v_i, v_j) = nu_ij``, ``sigma(v_i, phi v_j) = phi nu_ij`` and
    ``sigma(phi v_i, phi v_j) = -nu_ij`` for seeded normal vectors
    ``nu_ij``, and ``sigma(., xi) = 0``. The shape operators are traceless.
    """
    tangent = invariant_frame(S, n, seed)
    d = S.d
    normal = complete_basis(tangent, d, seed=seed).vectors
    rng = _rng([seed, 1])
    k = (n - 1) // 2
    sv = np.zeros((n, n, d))
    for i in range(k):
        for j in range(i, k):
            nu = rng.uniform(-sigma_scale, sigma_scale, size=d - n) @ normal
            pnu = S.phi @ nu
            for a, b in ((i, j), (j, i)):
                sv[2 * a, 2 * b] = nu
                sv[2 * a, 2 * b + 1] = pnu
                sv[2 * a + 1, 2 * b] = pnu
                sv[2 * a + 1, 2 * b + 1] = -nu
    sigma = np.einsum("ijd,rd->rij", sv, normal)
    return SubmanifoldPoint(S, tangent, normal, sigma, "contact")


def equality_sigma(sub, variant="shape1", a=0.0, b=None, cd=(), mode="raw"):
    """Replace sigma by the normal forms that attain equality at span{e_1, e_2}.

    ``variant="shape1"``: ``A_{n+1} = diag(a, b, (a+b) I)``.
    ``variant="shape1prime"``: ``A_{n+1} = diag(a, -a, 0)``; the frame must
    end with ``xi``. In both cases ``A_r = [[c_r, d_r], [d_r, -c_r]] + 0``
    for the remaining normals, with one ``(c_r, d_r)`` pair per normal.
    """
    n, p = sub.n, sub.codim
    if n < 3:
        raise DimensionError(f"normal forms need n >= 3, got {n}")
    if p < 1:
        raise DimensionError("normal forms need codimension >= 1")
    cd = [tuple(x) for x in cd]
    if len(cd) != p - 1:
        raise ShapeError(f"expected {p - 1} (c_r, d_r) pairs for codimension {p}, got {len(cd)}")
    s = np.zeros((p, n, n))
    if variant == "shape1":
        if b is None:
            raise PreconditionError("shape1 needs both a and b")
        s[0] = np.diag([a, b] + [a + b] * (n - 2))
    elif variant == "shape1prime":
        if b is not None and b != -a:
            raise PreconditionError("shape1prime fixes b = -a")
        if np.linalg.norm(sub.tangent[-1] - sub.structure.xi) > 1e-10:
            raise PreconditionError("shape1prime needs the last tangent frame vector to be xi")
        s[0] = np.diag([a, -a] + [0.0] * (n - 2))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    for r, (c_r, d_r) in enumerate(cd, start=1):
        s[r, :2, :2] = [[c_r, d_r], [d_r, -c_r]]
    return sub.with_sigma(s, mode=mode)


def equality_case(S, n, seed=0, variant="shape1", a=0.0, b=None, cd=None, invariant=False, mode=None):
    """Frame plus normal-form sigma. With ``invariant=True`` the frame is
    phi- and h-invariant, so the shape1prime forms are contact-compatible."""
    if invariant:
        tangent = invariant_frame(S, n, seed)
        normal = complete_basis(tangent, S.d, seed=seed).vectors
        base = SubmanifoldPoint(S, tangent, normal, np.zeros((S.d - n, n, n)))
    else:
        base = random_submanifold(S, n, seed, mode="raw", sigma_scale=0.0)
    if cd is None:
        rng = _rng([seed, 2])
        cd = rng.uniform(-1.0, 1.0, size=(base.codim - 1, 2))
    if mode is None:
        mode = "contact" if (variant == "shape1prime" and invariant) else "raw"
    return equality_sigma(base, variant, a, b, cd, mode=mode)


def umbilical_sigma(sub, H_request, mode="contact"):
    """``sigma(X, Y) = <X, Y> H`` for the requested (ambient) normal vector."""
    H = np.asarray(H_request, dtype=float)
    if H.shape != (sub.d,):
        raise ShapeError(f"H_request must be an ambient vector of length {sub.d}")
    coeff = sub.normal @ H
    s = coeff[:, None, None] * np.eye(sub.n)[None, :, :]
    return sub.with_sigma(s, mode=mode)


def random_plane(sub, rng, domain="all"):
    """Uniformly random tangent plane (inside D when ``domain="D"``)."""
    n = sub.n
    if domain == "D":
        t = sub.xi_coords
        X = rng.standard_normal((2, n))
        X = X - np.outer(X @ t, t)
    else:
        X = rng.standard_normal((2, n))
    return PlaneSection.spanned_by(sub.from_coords(X[0]), sub.from_coords(X[1]))


def phi_plane(sub, rng):
    """Plane ``span{X, phi X}`` for a random unit X in D (phi-invariant tangent spaces only)."""
    S = sub.structure
    t = sub.xi_coords
    x = rng.standard_normal(sub.n)
    x = sub.from_coords(x - (x @ t) * t)
    x /= np.linalg.norm(x)
    return PlaneSection(x, S.phi @ x)
