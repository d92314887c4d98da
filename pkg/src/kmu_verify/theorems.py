"""Both sides of the curvature identities and inequalities, plus equality diagnosis.

Every inequality checker returns an :class:`InequalityReport` whose ``rhs``
is assembled term by term from the printed statement. Quantities that the
proofs compute along the way (``rho``, the closed form of ``K(pi)``) are
recomputed as diagnostics and used only for cross-checks.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import Frame, PlaneSection, complete_basis, restrict_to_plane
from .contact import ValidationReport, _plain
from .errors import (
    ConsistencyError,
    DimensionError,
    DomainError,
    HypothesisError,
    PreconditionError,
    ShapeError,
)
from .invariants import DEFAULT_RESTARTS, delta, scalar_curvature, sectional_curvature
from .submanifold import (
    check_tangent_plane,
    mean_curvature,
    plane_invariants,
    tangential_operators,
)

IDENTITY_TOL = 1e-8
INEQUALITY_TOL = 1e-8
EQUALITY_TOL = 1e-6
CROSS_CHECK_TOL = 1e-8
SUBSTITUTION_TOL = 1e-10
H_ZERO_TOL = 1e-10
D_TOL = 1e-10
INVARIANCE_TOL = 1e-8
VARIANTS = ("shape1", "shape1prime")


@dataclass
class ShapeFormDiagnosis:
    """How far the shape operators are from the equality normal forms.

    ``chosen_frame`` holds the rotated tangent frame followed by the normal
    frame (``e_{n+1}`` first). ``parameters`` has ``a``, ``b`` and the list
    ``cd`` of ``(c_r, d_r)`` pairs read off that frame.
    """

    variant: str
    residual_A_n1: float
    residual_A_r: float
    matched: bool
    chosen_frame: Frame
    parameters: dict

    def to_dict(self):
        return {
            "variant": self.variant,
            "residual_A_n1": self.residual_A_n1,
            "residual_A_r": self.residual_A_r,
            "matched": self.matched,
            "parameters": _plain(self.parameters),
        }


@dataclass
class InequalityReport:
    """``lhs <= rhs`` evaluated at one point.

    ``expect_equality`` is set when something independent of the gap (the
    shape-form classifier, or a structural fact such as ``sigma = 0``) says
    whether equality should hold; :attr:`passed` then also demands that the
    equality flag agrees.
    """

    name: str
    lhs: float
    rhs: float
    tol: float = INEQUALITY_TOL
    eq_tol: float = EQUALITY_TOL
    diagnostics: dict = field(default_factory=dict)
    shape_classification: ShapeFormDiagnosis = None
    expect_equality: bool = None
    eq_gap_tol: float = None

    @property
    def gap(self):
        return self.rhs - self.lhs

    @property
    def satisfied(self):
        return bool(self.gap >= -self.tol)

    @property
    def equality(self):
        limit = self.eq_tol if self.eq_gap_tol is None else self.eq_gap_tol
        return bool(abs(self.gap) <= limit)

    @property
    def passed(self):
        if not self.satisfied:
            return False
        return self.expect_equality is None or self.equality == self.expect_equality

    def to_dict(self):
        out = {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "satisfied": self.satisfied,
            "equality": self.equality,
            "expect_equality": self.expect_equality,
            "residuals": {},
            "diagnostics": _plain(self.diagnostics),
        }
        if self.shape_classification is not None:
            out["shape_classification"] = self.shape_classification.to_dict()
            out["residuals"] = {
                "shape_A_n1": self.shape_classification.residual_A_n1,
                "shape_A_r": self.shape_classification.residual_A_r,
            }
        return out


# --- Chen's algebraic lemma --------------------------------------------------


def chen_forced_last(a):
    """The ``a_{n+1}`` that the lemma's constraint forces for given ``a_1..a_n``."""
    a = np.asarray(a, dtype=float)
    n = a.size
    if n < 2:
        raise DimensionError(f"need n >= 2 values, got {n}")
    return float(a.sum() ** 2 / (n - 1) - a @ a)


def chen_lemma(a, tol=1e-9):
    """``(holds, equality)`` for ``2 a_1 a_2 >= a_{n+1}`` under the constraint.

    ``a`` holds ``n + 1`` reals. Equality means ``a_1 + a_2 = a_3 = ... = a_n``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size < 3:
        raise DimensionError(f"need n + 1 >= 3 values, got shape {a.shape}")
    head, last = a[:-1], float(a[-1])
    n = head.size
    residual = chen_forced_last(head) - last
    scale = max(1.0, float(np.max(np.abs(a))) ** 2)
    if abs(residual) > tol * scale:
        raise PreconditionError(f"constraint violated: residual {residual:.3e}")
    holds = 2.0 * head[0] * head[1] >= last - tol * scale
    target = head[0] + head[1]
    equality = all(abs(x - target) <= tol * max(1.0, abs(target)) for x in head[2:n])
    return bool(holds), bool(equality)


# --- shared pieces -----------------------------------------------------------


def _prepare(sub, min_n, unchecked):
    if not unchecked:
        sub.structure.require_valid()
    sub.require_xi_tangent()
    if not unchecked:
        sub.require_valid()
    if sub.n < min_n:
        raise DimensionError(f"needs n >= {min_n}, got n={sub.n}")


def _norm_block(ops):
    """``|phi h^T|^2 - |h^T|^2 - (tr phi h^T)^2 + (tr h^T)^2``."""
    return ops.phihT_norm_sq - ops.hT_norm_sq - ops.trace_phihT**2 + ops.trace_hT**2


def _plane_block(S, plane):
    """``2 tr(h|pi) + det(h|pi) - det(phi h|pi)``."""
    Mh = restrict_to_plane(S.h, plane)
    Mph = restrict_to_plane(S.phi_h, plane)
    return 2.0 * np.trace(Mh) + np.linalg.det(Mh) - np.linalg.det(Mph), Mh, Mph


def _lemma_constant(S, n, ops):
    c, kappa = S.c, S.kappa
    return 0.25 * (n * (n - 1) * (c + 3) + 3 * (c - 1) * ops.P_norm_sq - 2 * (n - 1) * (c + 3 - 4 * kappa))


def _sigma_plane_det(sub, plane):
    """``sum_r (sigma^r_11 sigma^r_22 - (sigma^r_12)^2)`` on the plane."""
    u, v = sub.tangent_coords(plane.e1), sub.tangent_coords(plane.e2)
    s11 = np.einsum("rij,i,j->r", sub.sigma, u, u)
    s22 = np.einsum("rij,i,j->r", sub.sigma, v, v)
    s12 = np.einsum("rij,i,j->r", sub.sigma, u, v)
    return float(s11 @ s22 - s12 @ s12)


@dataclass
class IdentityCheck:
    lhs: float
    rhs: float
    terms: dict

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)

    def to_dict(self, tol=IDENTITY_TOL):
        return {
            "name": "fundamental_identity",
            "status": "pass" if self.residual <= tol else "fail",
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.rhs - self.lhs,
            "residuals": {"identity": self.residual},
            "diagnostics": _plain(self.terms),
        }


def fundamental_identity_terms(sub):
    """Closed-form pieces of ``2 tau`` in terms of tangential and normal data."""
    S, n = sub.structure, sub.n
    ops = tangential_operators(sub)
    mc = mean_curvature(sub)
    return {
        "constant": _lemma_constant(S, n, ops),
        "norm_block": 0.5 * _norm_block(ops),
        "trace_term": 2.0 * (S.mu + n - 2) * ops.trace_hT,
        "mean_curvature": n * n * mc.norm_sq,
        "sigma": -mc.sigma_norm_sq,
    }


def fundamental_identity(sub, unchecked=False):
    """``2 tau`` through the Gauss equation against its closed form.

    The closed form uses only the Gauss equation and ambient algebra, so it
    holds in raw mode as well as contact mode.
    """
    _prepare(sub, 2, unchecked)
    terms = fundamental_identity_terms(sub)
    lhs = 2.0 * scalar_curvature(sub, unchecked)
    return IdentityCheck(lhs=lhs, rhs=float(sum(terms.values())), terms=terms)


# --- plane inequalities ------------------------------------------------------


def theorem1_terms(sub, plane):
    """Right-hand side of the general plane inequality, one entry per printed term."""
    S, n = sub.structure, sub.n
    c, kappa, mu = S.c, S.kappa, S.mu
    ops = tangential_operators(sub)
    mc = mean_curvature(sub)
    alpha, beta, gamma = plane_invariants(sub, plane)
    block, _, _ = _plane_block(S, plane)
    return {
        "mean_curvature": n * n * (n - 2) / (2.0 * (n - 1)) * mc.norm_sq,
        "c_term": n * (n - 3) * (c + 3) / 8.0,
        "kappa_term": (n - 1) * kappa,
        "P_term": 3.0 * (c - 1) / 8.0 * (ops.P_norm_sq - 2.0 * alpha),
        "beta_term": (c + 3 - 4 * kappa) / 4.0 * beta,
        "gamma_term": -(mu - 1) * gamma,
        "plane_h_term": -0.5 * block,
        "trace_term": (mu + n - 2) * ops.trace_hT,
        "norm_block": 0.25 * _norm_block(ops),
    }


def theorem2_terms(sub, plane):
    """Right-hand side for planes orthogonal to xi (no beta or gamma terms)."""
    S, n = sub.structure, sub.n
    c, kappa, mu = S.c, S.kappa, S.mu
    ops = tangential_operators(sub)
    mc = mean_curvature(sub)
    alpha, _, _ = plane_invariants(sub, plane)
    block, _, _ = _plane_block(S, plane)
    return {
        "mean_curvature": n * n * (n - 2) / (2.0 * (n - 1)) * mc.norm_sq,
        "c_term": n * (c + 3) * (n - 3) / 8.0,
        "kappa_term": (n - 1) * kappa,
        "P_term": 3.0 * (c - 1) / 8.0 * (ops.P_norm_sq - 2.0 * alpha),
        "plane_h_term": -0.5 * block,
        "trace_term": (mu + n - 2) * ops.trace_hT,
        "norm_block": 0.25 * _norm_block(ops),
    }


def corollary1_terms(sub, plane):
    """Right-hand side written with kappa alone (``c = -2 kappa - 1``, ``mu = kappa + 1``)."""
    S, n = sub.structure, sub.n
    kappa = S.kappa
    ops = tangential_operators(sub)
    mc = mean_curvature(sub)
    alpha, beta, gamma = plane_invariants(sub, plane)
    block, _, _ = _plane_block(S, plane)
    return {
        "mean_curvature": n * n * (n - 2) / (2.0 * (n - 1)) * mc.norm_sq,
        "kappa_constant": -0.25 * n * (n - 3) * (kappa - 1),
        "kappa_term": (n - 1) * kappa,
        "P_term": -0.75 * (kappa + 1) * ops.P_norm_sq,
        "plane_terms": 0.5 * (3 * (kappa + 1) * alpha - (3 * kappa - 1) * beta - 2 * kappa * gamma),
        "plane_h_term": -0.5 * block,
        "trace_term": (kappa + n - 1) * ops.trace_hT,
        "norm_block": 0.25 * _norm_block(ops),
    }


def sectional_closed_form(sub, plane):
    """``K(pi)`` from the ambient closed form plus the Gauss term."""
    S = sub.structure
    c, kappa, mu = S.c, S.kappa, S.mu
    alpha, beta, gamma = plane_invariants(sub, plane)
    block, _, _ = _plane_block(S, plane)
    amb = 0.25 * (3 + c + 3 * (c - 1) * alpha - (c + 3 - 4 * kappa) * beta + 4 * (mu - 1) * gamma)
    return amb + 0.5 * block + _sigma_plane_det(sub, plane)


def _common_diagnostics(sub, plane, lhs, unchecked):
    """rho in two forms and the closed-form cross-check of ``tau - K``."""
    S, n = sub.structure, sub.n
    ops = tangential_operators(sub)
    mc = mean_curvature(sub)
    tau = scalar_curvature(sub, unchecked)
    K = sectional_curvature(sub, plane, unchecked)
    alpha, beta, gamma = plane_invariants(sub, plane)
    block, Mh, Mph = _plane_block(S, plane)
    const = _lemma_constant(S, n, ops)
    nb = 0.5 * _norm_block(ops)
    tr = 2.0 * (S.mu + n - 2) * ops.trace_hT
    mean = n * n * (n - 2) / (n - 1) * mc.norm_sq
    rho = 2.0 * tau - mean - tr - const - nb
    # Adapted frame with e_{n+1} along H: (sum_i sigma^{n+1}_ii)^2 = n^2 |H|^2.
    rho_sigma = n * n * mc.norm_sq / (n - 1) - mc.sigma_norm_sq
    tau_closed = 0.5 * (rho_sigma + mean + tr + const + nb)
    cross = tau_closed - sectional_closed_form(sub, plane)
    if abs(cross - lhs) > CROSS_CHECK_TOL * max(1.0, abs(lhs)):
        raise ConsistencyError(
            f"closed-form tau - K(pi) = {cross!r} disagrees with Gauss-equation value {lhs!r}"
        )
    return {
        "tau": tau,
        "K": K,
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
        "rho": rho,
        "rho_from_sigma": rho_sigma,
        "cross_check": abs(cross - lhs),
        "trace_h_plane": float(np.trace(Mh)),
        "det_h_plane": float(np.linalg.det(Mh)),
        "det_phih_plane": float(np.linalg.det(Mph)),
        "trace_hT": ops.trace_hT,
    }


def _require_plane(sub, plane):
    if not isinstance(plane, PlaneSection):
        raise ShapeError("plane must be a PlaneSection")
    check_tangent_plane(sub, plane)


def _in_D_residual(sub, plane):
    xi = sub.structure.xi
    return max(abs(float(xi @ plane.e1)), abs(float(xi @ plane.e2)))


def check_theorem1(sub, plane, tol=INEQUALITY_TOL, eq_tol=EQUALITY_TOL, classify=True, unchecked=False):
    """``tau - K(pi) <= rhs`` for any tangent plane."""
    _prepare(sub, 3, unchecked)
    _require_plane(sub, plane)
    lhs = scalar_curvature(sub, unchecked) - sectional_curvature(sub, plane, unchecked)
    terms = theorem1_terms(sub, plane)
    diag = _common_diagnostics(sub, plane, lhs, unchecked)
    diag["terms"] = terms
    shape = classify_shape_operators(sub, plane, "shape1", eq_tol) if classify else None
    return InequalityReport(
        name="theorem1",
        lhs=lhs,
        rhs=float(sum(terms.values())),
        tol=tol,
        eq_tol=eq_tol,
        diagnostics=diag,
        shape_classification=shape,
        expect_equality=shape.matched if shape is not None else None,
    )


def check_theorem2(
    sub, plane, tol=INEQUALITY_TOL, eq_tol=EQUALITY_TOL, classify=True, unchecked=False, variant=None
):
    """``tau - K(pi) <= rhs`` for planes inside D.

    Equality is classified against the primed normal form, which assumes
    ``sigma(xi, xi) = 0``. That only holds in contact mode, so raw-mode
    points default to the unprimed form.
    """
    _prepare(sub, 3, unchecked)
    _require_plane(sub, plane)
    res = _in_D_residual(sub, plane)
    if res > D_TOL:
        raise DomainError(f"plane is not orthogonal to xi (|eta| = {res:.3e})")
    lhs = scalar_curvature(sub, unchecked) - sectional_curvature(sub, plane, unchecked)
    terms = theorem2_terms(sub, plane)
    rhs = float(sum(terms.values()))
    t1 = theorem1_terms(sub, plane)
    diag = _common_diagnostics(sub, plane, lhs, unchecked)
    diag["terms"] = terms
    diag["theorem1_rhs_minus_plane_terms"] = abs(
        rhs - (sum(t1.values()) - t1["beta_term"] - t1["gamma_term"])
    )
    if variant is None:
        variant = "shape1prime" if sub.mode == "contact" else "shape1"
    shape = classify_shape_operators(sub, plane, variant, eq_tol) if classify else None
    return InequalityReport(
        name="theorem2",
        lhs=lhs,
        rhs=rhs,
        tol=tol,
        eq_tol=eq_tol,
        diagnostics=diag,
        shape_classification=shape,
        expect_equality=shape.matched if shape is not None else None,
    )


def check_corollary1(sub, plane, tol=INEQUALITY_TOL, eq_tol=EQUALITY_TOL, classify=True, unchecked=False):
    """The kappa-only form of the plane inequality (non-Sasakian ambients)."""
    if sub.structure.kappa >= 1.0:
        raise HypothesisError("the kappa-only form needs a non-Sasakian ambient (kappa < 1)")
    _prepare(sub, 3, unchecked)
    _require_plane(sub, plane)
    lhs = scalar_curvature(sub, unchecked) - sectional_curvature(sub, plane, unchecked)
    terms = corollary1_terms(sub, plane)
    rhs = float(sum(terms.values()))
    rhs1 = float(sum(theorem1_terms(sub, plane).values()))
    if abs(rhs - rhs1) > SUBSTITUTION_TOL * max(1.0, abs(rhs1)):
        raise ConsistencyError(f"kappa-form rhs {rhs!r} differs from general rhs {rhs1!r}")
    diag = _common_diagnostics(sub, plane, lhs, unchecked)
    diag["terms"] = terms
    diag["substitution_residual"] = abs(rhs - rhs1)
    shape = classify_shape_operators(sub, plane, "shape1", eq_tol) if classify else None
    return InequalityReport(
        name="corollary1",
        lhs=lhs,
        rhs=rhs,
        tol=tol,
        eq_tol=eq_tol,
        diagnostics=diag,
        shape_classification=shape,
        expect_equality=shape.matched if shape is not None else None,
    )


# --- equality normal forms ---------------------------------------------------


def _in_plane_angle(A):
    """Smallest rotation angle in (-pi/4, pi/4] that diagonalizes a 2x2 block."""
    theta = 0.5 * np.arctan2(2.0 * A[0, 1], A[0, 0] - A[1, 1])
    if theta > np.pi / 4:
        theta -= np.pi / 2
    elif theta <= -np.pi / 4:
        theta += np.pi / 2
    return float(theta)


def _normal_frame(first, normal):
    """Gram-Schmidt over ``[first, *normal]``, skipping dependent vectors."""
    out = [first]
    for w in normal:
        w = w.copy()
        for _ in range(2):
            for b in out:
                w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-8 and len(out) < normal.shape[0]:
            out.append(w / nw)
    return np.array(out)


def classify_shape_operators(sub, plane, variant="shape1", tol=EQUALITY_TOL):
    """Compare the shape operators with the equality normal forms at ``plane``.

    The frame follows the equality argument: ``(e_1, e_2)`` is rotated inside
    the plane so that ``sigma^{n+1}_12 = 0`` and ``e_{n+1}`` points along H.
    When ``H = 0`` the normal ``e_{n+1}`` is the direction of
    ``sigma(e_1, e_1) + sigma(e_2, e_2)`` (which maximizes the trace of
    ``A`` over the plane), falling back to the first normal frame vector.
    ``e_{n+1}`` is sign-aligned with the first given normal so that a frame
    already in normal form is reproduced.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    n, p = sub.n, sub.codim
    if n < 3:
        raise DimensionError(f"normal forms need n >= 3, got {n}")
    _require_plane(sub, plane)
    u, v = sub.tangent_coords(plane.e1), sub.tangent_coords(plane.e2)
    if variant == "shape1prime":
        if _in_D_residual(sub, plane) > D_TOL:
            raise DomainError("shape1prime needs a plane orthogonal to xi")
        t = sub.xi_coords / np.linalg.norm(sub.xi_coords)
        mid = complete_basis(np.vstack([u, v, t]), n, seed=0).vectors
        Q = np.vstack([u, v, mid, t[None, :]])
    else:
        Q = np.vstack([u, v, complete_basis(np.vstack([u, v]), n, seed=0).vectors])
    s = np.einsum("ai,rij,bj->rab", Q, sub.sigma, Q)
    sv = np.einsum("rab,rd->abd", s, sub.normal)

    if p == 0:
        frame = Frame(Q @ sub.tangent)
        return ShapeFormDiagnosis(variant, 0.0, 0.0, True, frame, {"a": 0.0, "b": 0.0, "cd": []})

    H = mean_curvature(sub).vector
    if np.linalg.norm(H) > H_ZERO_TOL:
        first = H / np.linalg.norm(H)
    else:
        w = sv[0, 0] + sv[1, 1]
        first = w / np.linalg.norm(w) if np.linalg.norm(w) > H_ZERO_TOL else sub.normal[0].copy()
    if first @ sub.normal[0] < 0:
        first = -first
    N = _normal_frame(first, sub.normal)
    A = np.einsum("abd,rd->rab", sv, N)

    theta = _in_plane_angle(A[0, :2, :2])
    c, sn = np.cos(theta), np.sin(theta)
    Rot = np.eye(n)
    Rot[:2, :2] = [[c, sn], [-sn, c]]
    A = np.einsum("ai,rij,bj->rab", Rot, A, Rot)
    tangent = Rot @ Q @ sub.tangent

    a, b = float(A[0, 0, 0]), float(A[0, 1, 1])
    if variant == "shape1":
        target = np.diag([a, b] + [a + b] * (n - 2))
    else:
        b = -a
        target = np.diag([a, -a] + [0.0] * (n - 2))
    res_n1 = float(np.max(np.abs(A[0] - target)))
    cd, res_r = [], 0.0
    for r in range(1, p):
        c_r, d_r = float(A[r, 0, 0]), float(A[r, 0, 1])
        T = np.zeros((n, n))
        T[:2, :2] = [[c_r, d_r], [d_r, -c_r]]
        res_r = max(res_r, float(np.max(np.abs(A[r] - T))))
        cd.append((c_r, d_r))
    return ShapeFormDiagnosis(
        variant=variant,
        residual_A_n1=res_n1,
        residual_A_r=res_r,
        matched=bool(res_n1 <= tol and res_r <= tol),
        chosen_frame=Frame(np.vstack([tangent, N])),
        parameters={"a": a, "b": b, "cd": cd, "theta": theta},
    )


# --- invariant submanifolds --------------------------------------------------


def phi_invariance_residual(sub):
    """Size of the normal part of ``phi`` applied to the tangent frame."""
    return float(np.max(np.abs(sub.normal @ sub.structure.phi @ sub.tangent.T))) if sub.codim else 0.0


def _require_invariant(sub, unchecked):
    if not unchecked:
        sub.structure.require_valid()
    sub.require_xi_tangent()
    if not unchecked:
        sub.require_valid()
    res = phi_invariance_residual(sub)
    if res > INVARIANCE_TOL:
        raise HypothesisError(f"tangent space is not phi-invariant (normal part {res:.3e})")


def check_invariant_properties(sub, tol=1e-10, unchecked=False):
    """Algebraic consequences of phi-invariance of the tangent space."""
    _require_invariant(sub, unchecked)
    n = sub.n
    ops = tangential_operators(sub)
    mc = mean_curvature(sub)
    s_xi = np.einsum("rij,j->ri", sub.sigma, sub.xi_coords)
    residuals = {
        "P_norm": abs(ops.P_norm_sq - (n - 1)),
        "trace_hT": abs(ops.trace_hT),
        "trace_phihT": abs(ops.trace_phihT),
        "norm_equality": abs(ops.phihT_norm_sq - ops.hT_norm_sq),
        "sigma_xi": float(np.max(np.abs(s_xi))) if sub.codim else 0.0,
        "mean_curvature": float(np.sqrt(mc.norm_sq)),
    }
    return ValidationReport(
        residuals,
        tol,
        name="invariant_properties",
        diagnostics={"phi_invariance": phi_invariance_residual(sub)},
    )


def invariant_tau_rhs(S, n):
    return (n - 1) * ((n + 1) * S.c + 8 * S.kappa + 3 * n - 9) / 8.0


def check_invariant_tau_bound(sub, tol=INEQUALITY_TOL, eq_tol=EQUALITY_TOL, unchecked=False):
    """Scalar-curvature bound for invariant submanifolds.

    The gap equals ``|sigma|^2 / 2``, so equality is detected on the scale
    of ``sigma``: the flag is set when ``|sigma| <= eq_tol``.
    """
    _require_invariant(sub, unchecked)
    n = sub.n
    tau = scalar_curvature(sub, unchecked)
    rhs = invariant_tau_rhs(sub.structure, n)
    sigma_sq = mean_curvature(sub).sigma_norm_sq
    identity = abs(2.0 * tau - (2.0 * rhs - sigma_sq))
    if identity > IDENTITY_TOL * max(1.0, abs(tau)):
        raise ConsistencyError(f"2 tau misses 2 rhs - |sigma|^2 by {identity:.3e}")
    return InequalityReport(
        name="invariant_tau_bound",
        lhs=tau,
        rhs=rhs,
        tol=tol,
        eq_tol=eq_tol,
        diagnostics={"sigma_norm_sq": sigma_sq, "identity_residual": identity},
        expect_equality=bool(np.sqrt(sigma_sq) <= eq_tol),
        eq_gap_tol=0.5 * eq_tol**2,
    )


def invariant_delta_rhs(S, n):
    return (n - 3) / 8.0 * ((n + 3) * S.c + 3 * (n - 1)) + (n - 1) * S.kappa


def check_invariant_delta_bound(sub, restarts=DEFAULT_RESTARTS, seed=0, tol=INEQUALITY_TOL, unchecked=False):
    """Bound on the D-restricted delta-invariant of an invariant submanifold."""
    _require_invariant(sub, unchecked)
    if sub.n < 3:
        raise DimensionError(f"needs n >= 3, got n={sub.n}")
    d = delta(sub, "D", restarts=restarts, seed=seed, unchecked=unchecked)
    return InequalityReport(
        name="invariant_delta_bound",
        lhs=d.value,
        rhs=invariant_delta_rhs(sub.structure, sub.n),
        tol=tol,
        diagnostics={"tau": d.tau, "min_K": d.min_K, "converged": d.converged},
    )


def basic_equality_rhs(sub):
    n = sub.n
    mc = mean_curvature(sub)
    return n * n * (n - 2) / (2.0 * (n - 1)) * mc.norm_sq + (
        n * (n - 3) * sub.structure.c + 3 * n * n - n - 8
    ) / 8.0


def check_basic_equality(sub, restarts=DEFAULT_RESTARTS, seed=0, tol=INEQUALITY_TOL, eq_tol=EQUALITY_TOL, unchecked=False):
    """Chen's basic inequality in a Sasakian space form with ``c < 1``.

    For a 3-dimensional minimal invariant submanifold equality is required
    (and then ``delta = 2``); otherwise only the inequality is checked.
    """
    S = sub.structure
    if S.kappa != 1.0:
        raise HypothesisError("basic equality check needs a Sasakian ambient (kappa = 1)")
    if not S.c < 1.0:
        raise HypothesisError(f"basic equality check needs c < 1, got c={S.c}")
    _prepare(sub, 2, unchecked)
    d = delta(sub, "all", restarts=restarts, seed=seed, unchecked=unchecked)
    invariant = phi_invariance_residual(sub) <= INVARIANCE_TOL
    minimal = np.sqrt(mean_curvature(sub).norm_sq) <= H_ZERO_TOL
    expected = bool(sub.n == 3 and invariant and minimal)
    return InequalityReport(
        name="basic_equality",
        lhs=d.value,
        rhs=basic_equality_rhs(sub),
        tol=tol,
        eq_tol=eq_tol,
        diagnostics={
            "tau": d.tau,
            "min_K": d.min_K,
            "invariant": bool(invariant),
            "minimal": bool(minimal),
            "delta_minus_2": d.value - 2.0 if expected else None,
        },
        expect_equality=True if expected else None,
    )


def check_umbilical(sub, tol=1e-10):
    """Totally umbilical points of contact submanifolds are totally geodesic.

    Only the structure is required to be valid: an umbilical sigma with
    ``H != 0`` is exactly the input that contact-mode validation rejects,
    and the report shows where.
    """
    sub.structure.require_valid()
    sub.require_xi_tangent()
    mc = mean_curvature(sub)
    umb = sub.sigma - mc.coefficients[:, None, None] * np.eye(sub.n)[None]
    res = float(np.max(np.abs(umb))) if sub.codim else 0.0
    if res > tol:
        raise HypothesisError(f"second fundamental form is not umbilical (residual {res:.3e})")
    t = sub.xi_coords
    sxx = np.einsum("rij,i,j->r", sub.sigma, t, t)
    return ValidationReport(
        {
            "mean_curvature": float(np.sqrt(mc.norm_sq)),
            "sigma": float(np.sqrt(mc.sigma_norm_sq)),
            "sigma_xi_xi": float(np.linalg.norm(sxx)),
        },
        tol,
        name="umbilical",
    )


# --- exploratory -------------------------------------------------------------


def contact_equality_search(S, n, seeds, a=1.0, b=0.5):
    """Try to reach equality in the general plane inequality with contact-consistent data.

    For each seed the equality normal form is built on a random frame, then
    the xi-slices are overwritten with their forced contact values. Returns
    one record per seed with the resulting gap and the classifier verdict.
    Nothing is asserted: whether such points exist is an open question.
    """
    from .generators import equality_case, impose_contact_slice

    out = []
    for seed in seeds:
        sub = impose_contact_slice(equality_case(S, n, seed=seed, a=a, b=b))
        rep = check_theorem1(sub, sub.coordinate_plane())
        out.append({
            "seed": seed,
            "gap": rep.gap,
            "equality": rep.equality,
            "matched": rep.shape_classification.matched,
        })
    return out
