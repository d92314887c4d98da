"""The battery of checks run by ``kmu-verify check`` on one model."""

import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .contact import ValidationReport
from .curvature import ambient_sectional, curvature_tensor, nullity_residual, tensor_symmetry_residuals
from .algebra import PlaneSection
from .errors import KMuError
from .generators import phi_plane, random_plane
from .invariants import DEFAULT_RESTARTS, delta, domain_basis
from .theorems import (
    INVARIANCE_TOL,
    check_basic_equality,
    check_corollary1,
    check_invariant_delta_bound,
    check_invariant_properties,
    check_invariant_tau_bound,
    check_theorem1,
    check_theorem2,
    check_umbilical,
    fundamental_identity,
    phi_invariance_residual,
)

PROBE_TOL = 1e-9
ENTRY_KEYS = ("name", "status", "lhs", "rhs", "gap", "residuals")


@dataclass
class RunConfig:
    tol: float = 1e-8
    eq_tol: float = 1e-6
    seed: int = 0
    trials: int = 32
    restarts: int = DEFAULT_RESTARTS
    grid_resolution: int = 0
    domain: str = "all"
    mode: str = None
    unchecked: bool = False

    def __post_init__(self):
        for name in ("trials", "restarts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.grid_resolution < 0:
            raise ValueError("grid_resolution must be >= 0")
        if self.tol <= 0 or self.eq_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tol > self.eq_tol:
            warnings.warn(f"tol={self.tol} is larger than eq_tol={self.eq_tol}", stacklevel=2)

    def to_dict(self):
        return asdict(self)


def entry(report, name=None):
    """Normalize any report to the common entry layout."""
    d = report.to_dict()
    if name is not None:
        d["name"] = name
    out = {k: d.get(k) for k in ENTRY_KEYS}
    out["residuals"] = d.get("residuals") or {}
    for k, v in d.items():
        if k not in out:
            out[k] = v
    return out


def _error_entry(name, exc):
    return {"name": name, "status": "fail", "lhs": None, "rhs": None, "gap": None, "residuals": {}, "error": str(exc)}


def validation_entries(model, config):
    """Structure and submanifold validation; failures mean invalid input."""
    S, sub = model.structure, model.submanifold
    out = [entry(S.validation)]
    if sub is not None:
        out.append(entry(sub.validation))
        rep = ValidationReport({"xi_tangent": float(np.linalg.norm(sub.normal @ S.xi))}, 1e-8, name="xi_tangent")
        out.append(entry(rep))
    return out


def curvature_probes(S, config, rng):
    unchecked = config.unchecked
    R = curvature_tensor(S, unchecked)
    out = [entry(ValidationReport(tensor_symmetry_residuals(R), PROBE_TOL, name="curvature_symmetries"))]
    X = rng.standard_normal((config.trials, 2, S.d))
    null = max(nullity_residual(S, x, y, unchecked) for x, y in X)
    phisec = 0.0
    for x in X[:, 0]:
        x = x - (S.xi @ x) * S.xi
        x /= np.linalg.norm(x)
        K = ambient_sectional(S, PlaneSection(x, S.phi @ x), unchecked)
        phisec = max(phisec, abs(K - S.c))
    out.append(entry(ValidationReport({"nullity": null}, PROBE_TOL, name="nullity")))
    out.append(entry(ValidationReport({"phi_sectional": phisec}, PROBE_TOL, name="phi_sectional")))
    return out


def _d_plane(sub):
    B = domain_basis(sub, "D")
    if max(abs(sub.xi_coords[0]), abs(sub.xi_coords[1])) < 1e-12:
        return sub.coordinate_plane(0, 1)
    return sub.plane_from_coords(B[:, 0], B[:, 1])


def _guarded(name, fn, out):
    try:
        rep = fn()
    except KMuError as exc:
        out.append(_error_entry(name, exc))
        return None
    out.append(entry(rep, name))
    return rep


def theorem_checks(sub, config, rng):
    S = sub.structure
    kw = dict(tol=config.tol, eq_tol=config.eq_tol, unchecked=config.unchecked)
    out = []
    fi = fundamental_identity(sub, config.unchecked)
    out.append(fi.to_dict(config.tol))
    if sub.n < 3:
        return out, {}
    invariant = sub.mode == "contact" and phi_invariance_residual(sub) <= INVARIANCE_TOL
    planes = [("canonical", sub.coordinate_plane(0, 1))]
    if invariant:
        planes.append(("phi_plane", phi_plane(sub, rng)))
    planes += [(f"random-{i}", random_plane(sub, rng)) for i in range(config.trials)]
    d_planes = [("canonical", _d_plane(sub))]
    d_planes += [(f"random-{i}", random_plane(sub, rng, "D")) for i in range(config.trials)]
    canon = {}
    for label, pl in planes:
        rep = _guarded(f"theorem1[{label}]", lambda: check_theorem1(sub, pl, **kw), out)
        if label == "canonical":
            canon["theorem1"] = rep
        if S.kappa < 1.0:
            _guarded(f"corollary1[{label}]", lambda: check_corollary1(sub, pl, **kw), out)
    for label, pl in d_planes:
        rep = _guarded(f"theorem2[{label}]", lambda: check_theorem2(sub, pl, **kw), out)
        if label == "canonical":
            canon["theorem2"] = rep
    if invariant:
        _guarded(
            "invariant_properties",
            lambda: check_invariant_properties(sub, unchecked=config.unchecked),
            out,
        )
        _guarded("invariant_tau_bound", lambda: check_invariant_tau_bound(sub, **kw), out)
        _guarded(
            "invariant_delta_bound",
            lambda: check_invariant_delta_bound(
                sub, config.restarts, config.seed, config.tol, config.unchecked
            ),
            out,
        )
    if S.kappa == 1.0 and S.c < 1.0:
        _guarded(
            "basic_equality",
            lambda: check_basic_equality(sub, config.restarts, config.seed, **kw),
            out,
        )
    mc = np.trace(sub.sigma, axis1=1, axis2=2) / sub.n
    if sub.codim and np.max(np.abs(sub.sigma - mc[:, None, None] * np.eye(sub.n))) <= 1e-10:
        _guarded("umbilical", lambda: check_umbilical(sub), out)
    return out, canon


def claim_checks(model, config, canon):
    """Compare the model's stated claims with computed values."""
    sub = model.submanifold
    out = []
    for key, claimed in sorted(model.claims.items()):
        name = f"claim[{key}]"
        try:
            if key in ("theorem1_equality", "theorem2_equality"):
                rep = canon.get(key.split("_")[0])
                actual = None if rep is None else rep.equality
                ok = actual is not None and bool(claimed) == actual
                out.append({"name": name, "status": "pass" if ok else "fail", "lhs": actual,
                            "rhs": bool(claimed), "gap": None, "residuals": {}})
                continue
            if key == "tau":
                from .invariants import scalar_curvature

                actual = scalar_curvature(sub, config.unchecked)
            else:
                dom = "D" if key == "delta_D" else "all"
                d = delta(sub, dom, config.restarts, config.seed, unchecked=config.unchecked)
                actual = d.min_K if key == "min_K" else d.value
        except (KMuError, AttributeError) as exc:
            out.append(_error_entry(name, exc))
            continue
        gap = float(claimed) - actual
        out.append({"name": name, "status": "pass" if abs(gap) <= config.eq_tol else "fail",
                    "lhs": actual, "rhs": float(claimed), "gap": gap, "residuals": {"claim": abs(gap)}})
    return out


def run_checks(model, config):
    """Run every applicable check. Returns ``(report_dict, exit_code)``."""
    rng = np.random.default_rng(config.seed)
    report = {"model": model.meta.get("name"), "config": config.to_dict(), "validation": [], "checks": []}
    report["validation"] = validation_entries(model, config)
    invalid = [e["name"] for e in report["validation"] if e["status"] != "pass"]
    if invalid and not config.unchecked:
        report["status"] = "invalid"
        report["exit_code"] = 2
        report["invalid"] = invalid
        return report, 2
    checks = curvature_probes(model.structure, config, rng)
    canon = {}
    if model.submanifold is not None:
        more, canon = theorem_checks(model.submanifold, config, rng)
        checks += more
    checks += claim_checks(model, config, canon)
    report["checks"] = checks
    failed = [e["name"] for e in checks if e["status"] != "pass"]
    report["failed"] = failed
    report["status"] = "fail" if failed else "pass"
    report["exit_code"] = 1 if failed else 0
    return report, report["exit_code"]
