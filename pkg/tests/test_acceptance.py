"""Acceptance gate: one test per criterion AC1-AC12.

Each test records a ``ACn PASS|FAIL: detail`` line; the lines are printed
in the terminal summary (see conftest.py). Run directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""

import importlib.util
import io
import json
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from kmu_verify.cli import main as cli_main
from kmu_verify.contact import canonical_structure, random_structure, validate_structure
from kmu_verify.curvature import (
    ambient_curvature_direct,
    ambient_sectional,
    curvature_tensor,
    nullity_residual,
    tensor_symmetry_residuals,
)
from kmu_verify.algebra import PlaneSection
from kmu_verify.errors import KMuError
from kmu_verify.generators import (
    equality_case,
    invariant_submanifold,
    random_plane,
    random_submanifold,
    umbilical_sigma,
)
from kmu_verify.invariants import (
    brute_force_min_sectional,
    frame_gradient,
    frame_objective,
    min_sectional,
)
from kmu_verify.submanifold import induced_curvature_tensor
from kmu_verify.theorems import (
    check_basic_equality,
    check_corollary1,
    check_invariant_delta_bound,
    check_invariant_properties,
    check_invariant_tau_bound,
    check_theorem1,
    check_theorem2,
    check_umbilical,
    fundamental_identity,
)

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
KAPPA_C = ((1.0, -3.0), (0.5, None), (0.0, None))
SUITE_START = time.perf_counter()
SUITE_BUDGET = 120.0

RESULTS = {}


def record(ac, ok, detail):
    RESULTS[ac] = (bool(ok), detail)
    line = f"{ac} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    return line


def summary_lines():
    order = sorted(RESULTS, key=lambda k: int(k[2:]))
    return [f"{k} {'PASS' if RESULTS[k][0] else 'FAIL'}: {RESULTS[k][1]}" for k in order]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def unit_perp_xi(S, rng, count):
    X = rng.standard_normal((count, S.d))
    X -= np.outer(X @ S.xi, S.xi)
    return X / np.linalg.norm(X, axis=1, keepdims=True)


# --- AC1-AC4: ambient structure and curvature ----------------------------------


def test_ac1_structure_axioms():
    with Timer() as t:
        rep = validate_structure(canonical_structure(2, 0.5), tol=1e-12)
    worst = max(rep.residuals.values())
    ok = rep.passed and worst < 1e-12 and t.elapsed < 1.0
    record("AC1", ok, f"{len(rep.residuals)} axioms, max residual {worst:.1e}, {t.elapsed:.3f}s")
    assert ok


def test_ac2_phi_sectional_constancy():
    rng = np.random.default_rng(2)
    worst = 0.0
    with Timer() as t:
        for kappa, c in KAPPA_C:
            S = canonical_structure(2, kappa, c)
            for x in unit_perp_xi(S, rng, 1000):
                worst = max(worst, abs(ambient_sectional(S, PlaneSection(x, S.phi @ x)) - S.c))
    ok = worst < 1e-9 and t.elapsed < 5.0
    record("AC2", ok, f"max |K(X, phi X) - c| = {worst:.1e} over 3000 planes, {t.elapsed:.2f}s")
    assert ok


def _triple_residuals(S, triples, unchecked=False):
    """Symmetry residuals of the direct transcription on random vectors."""
    out = {"antisym_XY": 0.0, "antisym_ZW": 0.0, "pair": 0.0, "bianchi": 0.0}
    for X, Y, Z, W in triples:
        def R(a, b, c):
            return ambient_curvature_direct(S, a, b, c, unchecked)

        rxyz = R(X, Y, Z)
        out["antisym_XY"] = max(out["antisym_XY"], float(np.max(np.abs(rxyz + R(Y, X, Z)))))
        out["antisym_ZW"] = max(out["antisym_ZW"], abs(float(rxyz @ W + R(X, Y, W) @ Z)))
        out["pair"] = max(out["pair"], abs(float(rxyz @ W - R(Z, W, X) @ Y)))
        out["bianchi"] = max(out["bianchi"], float(np.max(np.abs(rxyz + R(Y, Z, X) + R(Z, X, Y)))))
    return out


def test_ac3_curvature_well_formed():
    rng = np.random.default_rng(3)
    worst = 0.0
    with Timer() as t:
        for kappa, c in KAPPA_C:
            S = random_structure(2, kappa, c, seed=3)
            res = _triple_residuals(S, rng.standard_normal((1000, 4, S.d)))
            res.update(tensor_symmetry_residuals(curvature_tensor(S)))
            worst = max(worst, max(res.values()))
        # negative control: (c, kappa, mu) drawn with no relation between them
        base = canonical_structure(2, 0.5)
        control = 0.0
        for _ in range(20):
            c, kappa, mu = rng.uniform(-5.0, 5.0, 3)
            bad = base.replace(c=c, kappa=kappa, mu=mu)
            control = max(control, _triple_residuals(bad, rng.standard_normal((10, 4, 5)), True)["bianchi"])
        # supplementary control: an h violating its own axioms
        h = rng.standard_normal((5, 5))
        broken = tensor_symmetry_residuals(curvature_tensor(base.replace(h=h + h.T), unchecked=True))["bianchi"]
    ok = worst < 1e-9 and control > 1e-3 and t.elapsed < 10.0
    record(
        "AC3",
        ok,
        f"max symmetry/Bianchi residual {worst:.1e}; unconstrained (c, kappa, mu) control Bianchi "
        f"{control:.1e} (needs > 1e-3); broken-h control Bianchi {broken:.1e}; {t.elapsed:.2f}s",
    )
    assert ok


def test_ac4_nullity():
    rng = np.random.default_rng(4)
    worst = 0.0
    for kappa, c in KAPPA_C:
        S = random_structure(2, kappa, c, seed=4)
        for X, Y in rng.standard_normal((1000, 2, S.d)):
            worst = max(worst, nullity_residual(S, X, Y))
    ok = worst < 1e-10
    record("AC4", ok, f"max nullity residual {worst:.1e} over 3000 pairs")
    assert ok


# --- AC5-AC6: the 500-model sweep ------------------------------------------------


@lru_cache(maxsize=1)
def sweep_models():
    models = []
    for i in range(500):
        n = (3, 4, 5)[i % 3]
        kappa = (1.0, 0.5, 0.0)[(i // 3) % 3]
        c = float(np.random.default_rng([i, 1]).uniform(-4.0, 2.0)) if kappa == 1.0 else None
        S = random_structure(3, kappa, c, seed=i)
        models.append(random_submanifold(S, n, seed=i))
    return models


def test_ac5_fundamental_identity():
    with Timer() as t:
        models = sweep_models()
        worst = max(fundamental_identity(sub).residual for sub in models)
    codims = {sub.codim for sub in models}
    ok = worst < 1e-8 and t.elapsed < 30.0 and min(codims) >= 2
    record("AC5", ok, f"max |2 tau - rhs| = {worst:.1e} on {len(models)} models, codim {sorted(codims)}, "
                      f"{t.elapsed:.2f}s")
    assert ok


def test_ac6_plane_inequalities():
    rng = np.random.default_rng(6)
    worst = {"theorem1": np.inf, "theorem2": np.inf, "corollary1": np.inf}
    counts = dict.fromkeys(worst, 0)
    subst = 0.0
    errors = []
    with Timer() as t:
        for idx, sub in enumerate(sweep_models()):
            for _ in range(32):
                try:
                    pl = random_plane(sub, rng)
                    rep = check_theorem1(sub, pl, classify=False)
                    worst["theorem1"] = min(worst["theorem1"], rep.gap)
                    counts["theorem1"] += 1
                    if sub.structure.kappa < 1.0:
                        rep = check_corollary1(sub, pl, classify=False)
                        worst["corollary1"] = min(worst["corollary1"], rep.gap)
                        subst = max(subst, rep.diagnostics["substitution_residual"])
                        counts["corollary1"] += 1
                    rep = check_theorem2(sub, random_plane(sub, rng, "D"), classify=False)
                    worst["theorem2"] = min(worst["theorem2"], rep.gap)
                    counts["theorem2"] += 1
                except KMuError as exc:
                    errors.append(f"model {idx}: {exc}")
    ok = min(worst.values()) >= -1e-8 and subst <= 1e-10 and not errors
    detail = ", ".join(f"{k} min gap {v:.3f} ({counts[k]})" for k, v in worst.items())
    record("AC6", ok, f"{detail}; substitution residual {subst:.1e}; {len(errors)} errors; {t.elapsed:.1f}s")
    assert ok, errors[:3]


# --- AC7: equality cases -----------------------------------------------------------


def test_ac7_equality_cases():
    rng = np.random.default_rng(7)
    bad = []
    for i in range(50):
        kappa, c = KAPPA_C[i % 3]
        S = random_structure(3, kappa, c, seed=100 + i)
        n = (3, 4, 5)[(i // 3) % 3]
        a, b = rng.uniform(-2.0, 2.0, 2)
        sub = equality_case(S, n, seed=i, a=a, b=b)
        rep = check_theorem1(sub, sub.coordinate_plane())
        p = rep.shape_classification.parameters
        cd = np.random.default_rng([i, 2]).uniform(-1.0, 1.0, size=(sub.codim - 1, 2))
        err = max(abs(p["a"] - a), abs(p["b"] - b), float(np.max(np.abs(np.asarray(p["cd"]) - cd))))
        if not (rep.equality and rep.shape_classification.matched and err < 1e-10):
            bad.append(("shape1", i, rep.gap, err))

    for i in range(50):
        kappa, c = KAPPA_C[i % 3]
        S = random_structure(3, kappa, c, seed=200 + i)
        n = (3, 5)[(i // 3) % 2]
        a = float(rng.uniform(-2.0, 2.0))
        sub = equality_case(S, n, seed=i, variant="shape1prime", a=a, invariant=True)
        rep = check_theorem2(sub, sub.coordinate_plane())
        diag = rep.shape_classification
        cd = np.random.default_rng([i, 2]).uniform(-1.0, 1.0, size=(sub.codim - 1, 2))
        err = max(abs(diag.parameters["a"] - a), float(np.max(np.abs(np.asarray(diag.parameters["cd"]) - cd))))
        if not (sub.mode == "contact" and rep.equality and diag.matched and err < 1e-10):
            bad.append(("shape1prime", i, rep.gap, err))

    agree = 0
    for i in range(50):
        kappa, c = KAPPA_C[i % 3]
        S = random_structure(3, kappa, c, seed=300 + i)
        sub = random_submanifold(S, (3, 4, 5)[i % 3], seed=300 + i)
        r1 = check_theorem1(sub, random_plane(sub, rng))
        r2 = check_theorem2(sub, random_plane(sub, rng, "D"))
        if not (r1.equality or r1.shape_classification.matched or r2.equality or r2.shape_classification.matched):
            agree += 1
    ok = not bad and agree == 50
    record("AC7", ok, f"{100 - len(bad)}/100 equality constructions round-trip within 1e-10; "
                      f"{agree}/50 random models rejected by flag and classifier")
    assert ok, bad[:3]


# --- AC8: optimizer against oracle and gradient ------------------------------------


def fd_gradient(R, U, step=1e-5):
    G = np.zeros_like(U)
    for idx in np.ndindex(U.shape[1:]):
        E = np.zeros_like(U)
        E[(slice(None),) + idx] = step
        G[(slice(None),) + idx] = (frame_objective(R, U + E) - frame_objective(R, U - E)) / (2 * step)
    return G


def test_ac8_optimizer():
    worst = {3: 0.0, 4: 0.0}
    resolution = {3: 400, 4: 15}
    with Timer() as t:
        for n in (3, 4):
            for i in range(50):
                kappa, c = KAPPA_C[i % 3]
                S = random_structure(2 + i % 2, kappa, c, seed=800 + i)
                sub = random_submanifold(S, n, seed=800 + i)
                opt = min_sectional(sub, seed=i).min_K
                oracle = brute_force_min_sectional(sub, resolution=resolution[n])
                worst[n] = max(worst[n], abs(opt - oracle))
    rng = np.random.default_rng(8)
    R = induced_curvature_tensor(random_submanifold(random_structure(3, 0.5, seed=8), 5, seed=8))
    U = rng.standard_normal((100, 5, 2))
    F = fd_gradient(R, U)
    rel = float(np.max(np.linalg.norm(frame_gradient(R, U) - F, axis=(1, 2)) / np.linalg.norm(F, axis=(1, 2))))
    ok = max(worst.values()) < 1e-4 and rel < 1e-6
    record("AC8", ok, f"max |optimizer - oracle| n=3 {worst[3]:.1e}, n=4 {worst[4]:.1e}; "
                      f"gradient rel. error {rel:.1e} on 100 frames; {t.elapsed:.1f}s")
    assert ok


# --- AC9: pinned value -------------------------------------------------------------


def test_ac9_basic_equality_value():
    with Timer() as t:
        S = random_structure(3, 1.0, -3.0, seed=1)
        rep = check_basic_equality(invariant_submanifold(S, 3, seed=1))
    ok = abs(rep.lhs - 2.0) < 1e-6 and rep.rhs == 2.0 and rep.equality and rep.passed and t.elapsed < 10.0
    record("AC9", ok, f"delta_M = {rep.lhs:.12f}, rhs = {rep.rhs}, equality {rep.equality}, {t.elapsed:.2f}s")
    assert ok


# --- AC10: invariant submanifolds ----------------------------------------------------


def test_ac10_invariant_suite():
    prop = 0.0
    for kappa, c in KAPPA_C:
        S = random_structure(3, kappa, c, seed=10)
        for n in (3, 5, 7):
            for seed in range(3):
                prop = max(prop, max(check_invariant_properties(invariant_submanifold(S, n, seed)).residuals.values()))

    tau_bad = []
    for i, scale in enumerate([0.0, 1e-9, 1e-7, 1e-5, 1e-3, 0.1, 1.0] * 3):
        kappa, c = KAPPA_C[i % 3]
        sub = invariant_submanifold(random_structure(3, kappa, c, seed=i), (3, 5, 7)[i % 3], seed=i, sigma_scale=scale)
        rep = check_invariant_tau_bound(sub)
        norm = float(np.sqrt(np.sum(sub.sigma**2)))
        consistent = rep.equality == (norm < 1e-6)
        if not consistent or (not rep.equality and abs(rep.gap - norm**2 / 2) > 1e-8):
            tau_bad.append((i, scale, rep.gap))

    failures = []
    scales = (0.0, 0.25, 0.5, 1.0)
    for i in range(100):
        n = (3, 5)[i % 2]
        kappa, c = ((1.0, -3.0), (0.5, None))[(i // 2) % 2]
        S = random_structure(2 if n == 3 else 3, kappa, c, seed=1000 + i)
        sub = invariant_submanifold(S, n, seed=i, sigma_scale=scales[(i // 4) % 4])
        rep = check_invariant_delta_bound(sub, seed=i)
        if not rep.satisfied:
            failures.append((n, kappa, scales[(i // 4) % 4], rep.gap))
    worst = min((f[3] for f in failures), default=0.0)
    pattern = sorted({(f[0], f[1], f[2]) for f in failures})
    ok = prop < 1e-10 and not tau_bad and not failures
    record(
        "AC10",
        ok,
        f"invariant-property residual {prop:.1e}; scalar-curvature bound equality/gap consistent on "
        f"{21 - len(tau_bad)}/21; D-delta bound satisfied on {100 - len(failures)}/100 "
        f"(violations at (n, kappa, sigma_scale) {pattern}, worst gap {worst:.3f})",
    )
    assert ok


# --- AC11: umbilical -----------------------------------------------------------------


def test_ac11_umbilical():
    rng = np.random.default_rng(11)
    dev = 0.0
    rejected = 0
    clean = True
    for i in range(30):
        kappa, c = KAPPA_C[i % 3]
        S = random_structure(3, kappa, c, seed=1100 + i)
        base = invariant_submanifold(S, (3, 5)[i % 2], seed=i, sigma_scale=0.0)
        H = rng.standard_normal(base.codim) @ base.normal
        sub = umbilical_sigma(base, H, mode="contact")
        val = sub.validation
        rejected += not val.passed
        dev = max(dev, abs(val.residuals["sigma_xi_xi"] - float(np.linalg.norm(H))))

        flat = umbilical_sigma(base, np.zeros(S.d), mode="contact")
        rng_p = np.random.default_rng(i)
        reps = [check_theorem1(flat, random_plane(flat, rng_p)) for _ in range(4)]
        reps += [check_theorem2(flat, random_plane(flat, rng_p, "D")) for _ in range(4)]
        clean &= (
            flat.validation.passed
            and check_umbilical(flat).passed
            and fundamental_identity(flat).residual < 1e-8
            and all(r.passed for r in reps)
            and not np.any(flat.sigma)
        )
    ok = rejected == 30 and dev <= 1e-12 and clean
    record("AC11", ok, f"H != 0 rejected {rejected}/30 with ||residual - |H||| <= {dev:.1e}; "
                       f"H = 0 passes everything: {clean}")
    assert ok


# --- AC12: CLI ---------------------------------------------------------------------


def _cli(*argv):
    return cli_main([str(a) for a in argv], out=io.StringIO())


def _generate_args():
    spec = importlib.util.spec_from_file_location("build_models", ROOT / "scripts" / "build_models.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod.GENERATE


def test_ac12_cli(tmp_path):
    gen = _generate_args()
    codes = {}
    with Timer() as t:
        for name in ("sasakian", "kmu_random", "invariant"):
            path = tmp_path / f"{name}.json"
            codes[f"{name}:generate"] = _cli("generate", *gen[name], "--model", path)
            same = json.loads(path.read_text()) == json.loads((MODELS / f"{name}.json").read_text())
            codes[f"{name}:matches_bundled"] = 0 if same else 1
            codes[f"{name}:check"] = _cli("check", "--model", path)
            codes[f"{name}:delta"] = _cli("delta", "--model", path, "--grid-resolution", 200)
        corrupted = _cli("check", "--model", MODELS / "corrupted_h.json", "--report", tmp_path / "c.json")
        falsified = _cli("check", "--model", MODELS / "falsified_claims.json", "--report", tmp_path / "f.json")
    suite = time.perf_counter() - SUITE_START
    round_trip = all(v == 0 for v in codes.values())
    ok = round_trip and corrupted == 2 and falsified == 1 and suite < SUITE_BUDGET
    bad = [k for k, v in codes.items() if v]
    record("AC12", ok, f"round trips exit 0: {round_trip}{' ' + str(bad) if bad else ''}; corrupted-h exit "
                       f"{corrupted}; falsified exit {falsified}; CLI {t.elapsed:.1f}s, acceptance suite "
                       f"{suite:.1f}s (budget {SUITE_BUDGET:.0f}s)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
