"""Pointwise (kappa, mu)-contact metric structures.

A structure is the algebraic data ``(phi, xi, eta, h)`` at one point together
with the constants ``kappa``, ``mu`` and the phi-sectional curvature ``c``.
The metric is the identity, so ``eta`` is simply ``xi`` read as a covector.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidStructureError, MissingParameterError, ShapeError

STRUCTURE_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _plain(obj):
    """JSON-friendly copy of nested diagnostics."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


@dataclass
class ValidationReport:
    """Named residuals, each a max-abs-entry deviation, against one tolerance."""

    residuals: dict
    tol: float
    name: str = "validation"
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(np.isfinite(v) and v <= self.tol for v in self.residuals.values())

    @property
    def max_residual(self):
        return max(self.residuals.values(), default=0.0)

    def failures(self):
        return {k: v for k, v in self.residuals.items() if not (np.isfinite(v) and v <= self.tol)}

    def to_dict(self):
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "tol": self.tol,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "diagnostics": _plain(self.diagnostics),
        }


@dataclass(frozen=True, eq=False)
class KMuStructure:
    m: int
    kappa: float
    mu: float
    c: float
    phi: np.ndarray
    xi: np.ndarray
    h: np.ndarray
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        d = 2 * self.m + 1
        if self.m < 1:
            raise ShapeError(f"m must be a positive integer, got {self.m}")
        for name, shape in (("phi", (d, d)), ("xi", (d,)), ("h", (d, d))):
            arr = _frozen(getattr(self, name))
            if arr.shape != shape:
                raise ShapeError(f"{name} has shape {arr.shape}, expected {shape} for m={self.m}")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "m", int(self.m))
        for name in ("kappa", "mu", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def d(self):
        return 2 * self.m + 1

    @property
    def eta(self):
        return self.xi

    @property
    def is_sasakian(self):
        return self.kappa == 1.0

    @cached_property
    def phi_h(self):
        return _frozen(self.phi @ self.h)

    @cached_property
    def validation(self):
        return validate_structure(self, STRUCTURE_TOL)

    def require_valid(self):
        if not self.validation.passed:
            raise InvalidStructureError(self.validation)

    def replace(self, **changes):
        kw = dict(m=self.m, kappa=self.kappa, mu=self.mu, c=self.c, phi=self.phi, xi=self.xi, h=self.h)
        kw.update(changes)
        return KMuStructure(**kw)

    def rotated(self, q):
        """Conjugate ``(phi, h)`` and rotate ``xi`` by an orthogonal matrix."""
        q = np.asarray(q, dtype=float)
        return self.replace(phi=q @ self.phi @ q.T, xi=q @ self.xi, h=q @ self.h @ q.T)


def validate_structure(S, tol=1e-10):
    """Residual of every pointwise axiom of a (kappa, mu)-contact space form."""
    d = S.d
    for name, arr, shape in (("phi", S.phi, (d, d)), ("xi", S.xi, (d,)), ("h", S.h, (d, d))):
        if arr.shape != shape:
            raise ShapeError(f"{name} has shape {arr.shape}, expected {shape}")
    eye = np.eye(d)
    phi, xi, h = S.phi, S.xi, S.h
    xx = np.outer(xi, xi)
    phi2 = phi @ phi
    phih = phi @ h

    def mx(a):
        return float(np.max(np.abs(a)))

    r = {
        "phi_squared": mx(phi2 - (-eye + xx)),
        "eta_xi": abs(float(xi @ xi) - 1.0),
        "phi_xi": mx(phi @ xi),
        "eta_phi": mx(xi @ phi),
        "compatibility": mx(phi.T @ phi - (eye - xx)),
        "phi_antisymmetric": mx(phi.T + phi),
        "h_symmetric": mx(h - h.T),
        "h_xi": mx(h @ xi),
        "h_phi_anticommute": mx(h @ phi + phi @ h),
        "trace_h": abs(float(np.trace(h))),
        "trace_phi_h": abs(float(np.trace(phih))),
        "h_squared": mx(h @ h - (S.kappa - 1.0) * phi2),
        "kappa_bound": max(0.0, S.kappa - 1.0),
    }
    if S.kappa == 1.0:
        r["sasakian_h"] = mx(h)
    else:
        r["c_constraint"] = abs(S.c + 2.0 * S.kappa + 1.0)
        r["mu_constraint"] = abs(S.kappa - S.mu + 1.0)
    return ValidationReport(r, tol, name="structure")


def canonical_structure(m, kappa, c_sasakian=None):
    """Block-form structure on the basis ``u_1..u_m, phi u_1..phi u_m, xi``.

    ``h`` is ``+lambda`` on the ``u`` block and ``-lambda`` on the ``phi u``
    block with ``lambda = sqrt(1 - kappa)``. For ``kappa < 1`` the constants
    are forced to ``c = -2 kappa - 1`` and ``mu = kappa + 1``; for
    ``kappa = 1`` the caller supplies ``c`` and ``mu`` is stored as 0.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    kappa = float(kappa)
    if kappa > 1.0:
        raise DomainError(f"kappa must be <= 1, got {kappa}")
    sasakian = kappa == 1.0
    if sasakian and c_sasakian is None:
        raise MissingParameterError("kappa = 1 (Sasakian) requires c_sasakian")
    if not sasakian and c_sasakian is not None:
        raise DomainError("c is forced to -2*kappa-1 when kappa < 1; do not pass c_sasakian")
    d = 2 * m + 1
    phi = np.zeros((d, d))
    for i in range(m):
        phi[m + i, i] = 1.0
        phi[i, m + i] = -1.0
    xi = np.zeros(d)
    xi[-1] = 1.0
    lam = np.sqrt(1.0 - kappa)
    h = np.diag([lam] * m + [-lam] * m + [0.0])
    if sasakian:
        c, mu = float(c_sasakian), 0.0
    else:
        c, mu = -2.0 * kappa - 1.0, kappa + 1.0
    return KMuStructure(m=m, kappa=kappa, mu=mu, c=c, phi=phi, xi=xi, h=h)


def random_orthogonal(d, rng):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def random_structure(m, kappa, c_sasakian=None, seed=0):
    """Canonical structure in a seeded random orthonormal coordinate system."""
    S = canonical_structure(m, kappa, c_sasakian)
    return S.rotated(random_orthogonal(S.d, np.random.default_rng(seed)))
