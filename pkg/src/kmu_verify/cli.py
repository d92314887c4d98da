"""Command line front end: ``kmu-verify generate|check|delta``.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import generators
from .contact import canonical_structure, random_structure
from .errors import BudgetError, KMuError
from .invariants import DEFAULT_MAX_SAMPLES, DEFAULT_RESTARTS, brute_force_min_sectional, delta
from .modelfile import ModelFile
from .suite import RunConfig, run_checks

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
KINDS = ("sasakian", "kmu", "random-sub", "invariant-sub", "equality-case", "umbilical")


def _default_seed():
    raw = os.environ.get("KMU_VERIFY_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"KMU_VERIFY_SEED must be an integer, got {raw!r}") from None


def _common(p, seed):
    p.add_argument("--model", required=True, help="model file path")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--unchecked", action="store_true", help="skip input validation")


def build_parser():
    seed = _default_seed()
    parser = argparse.ArgumentParser(prog="kmu-verify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded model file")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--model", required=True, help="output path")
    g.add_argument("--seed", type=int, default=seed)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--kappa", type=float, default=None)
    g.add_argument("--c", type=float, default=None, help="phi-sectional curvature (kappa = 1 only)")
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--mode", choices=("contact", "raw"), default=None)
    g.add_argument("--sigma-scale", type=float, default=1.0)
    g.add_argument("--variant", choices=("shape1", "shape1prime"), default="shape1")
    g.add_argument("--a", type=float, default=1.0)
    g.add_argument("--b", type=float, default=None)
    g.add_argument("--invariant", action="store_true", help="equality case on a phi-invariant frame")
    g.add_argument("--H", type=float, nargs="*", default=None,
                   help="umbilical: mean curvature coefficients in the normal frame")
    g.add_argument("--canonical", action="store_true", help="block-form structure instead of a rotated one")
    g.add_argument("--name", default=None)

    c = sub.add_parser("check", help="run every applicable check on a model")
    _common(c, seed)
    c.add_argument("--report", default=None, help="report path (default: <model>.report.json)")
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--eq-tol", type=float, default=1e-6)
    c.add_argument("--trials", type=int, default=32, help="random planes per theorem")
    c.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    c.add_argument("--grid-resolution", type=int, default=0)
    c.add_argument("--domain", choices=("all", "D"), default="all")
    c.add_argument("--mode", choices=("contact", "raw"), default=None, help="override the model's mode")

    d = sub.add_parser("delta", help="compute Chen's delta-invariant of a model")
    _common(d, seed)
    d.add_argument("--domain", choices=("all", "D"), default="all")
    d.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    d.add_argument("--grid-resolution", type=int, default=0)
    d.add_argument("--max-samples", type=int, default=DEFAULT_MAX_SAMPLES)
    d.add_argument("--mode", choices=("contact", "raw"), default=None, help="override the model's mode")
    return parser


# --- generate ----------------------------------------------------------------


def _structure(args, kappa_default):
    kappa = kappa_default if args.kappa is None else args.kappa
    c = args.c
    if kappa == 1.0 and c is None:
        c = -3.0
    if kappa != 1.0:
        if args.c is not None:
            raise KMuError("--c applies to kappa = 1 only; it is forced to -2*kappa-1 otherwise")
        c = None
    if args.canonical:
        return canonical_structure(args.m, kappa, c)
    return random_structure(args.m, kappa, c, seed=args.seed)


def generate_model(args):
    kind = args.kind
    seed = args.seed
    mode = args.mode or "contact"
    meta = {"name": args.name or Path(args.model).stem, "kind": kind, "seed": seed}
    if kind == "sasakian":
        if args.kappa not in (None, 1.0):
            raise KMuError("sasakian models have kappa = 1")
        S = _structure(args, 1.0)
        sub = generators.random_submanifold(S, args.n, seed, mode, args.sigma_scale)
    elif kind in ("kmu", "random-sub"):
        S = _structure(args, 0.5)
        sub = generators.random_submanifold(S, args.n, seed, mode, args.sigma_scale)
    elif kind == "invariant-sub":
        S = _structure(args, 1.0)
        sub = generators.invariant_submanifold(S, args.n, seed, args.sigma_scale)
    elif kind == "equality-case":
        if args.variant == "shape1" and args.b is None:
            raise KMuError("equality-case shape1 needs --b")
        S = _structure(args, 0.5)
        sub = generators.equality_case(
            S, args.n, seed, args.variant, a=args.a, b=args.b if args.variant == "shape1" else None,
            invariant=args.invariant, mode=args.mode,
        )
        meta.update(variant=args.variant, a=args.a, b=args.b)
    else:
        S = _structure(args, 0.5)
        # sigma = 0 is contact-consistent only on a phi-invariant tangent space
        base = generators.invariant_submanifold(S, args.n, seed, 0.0)
        coeff = np.zeros(base.codim)
        if args.H:
            if len(args.H) > base.codim:
                raise KMuError(f"--H takes at most {base.codim} coefficients")
            coeff[: len(args.H)] = args.H
        sub = generators.umbilical_sigma(base, coeff @ base.normal, mode="raw" if coeff.any() else mode)
        meta["H"] = coeff.tolist()
    meta["mode"] = sub.mode
    return ModelFile(S, sub, meta)


def cmd_generate(args, out):
    model = generate_model(args)
    model.save(args.model)
    # re-read so the file on disk is known to parse and to validate
    back = ModelFile.load(args.model)
    back.structure.require_valid()
    if back.submanifold is not None:
        back.submanifold.require_valid()
    print(f"wrote {args.model} ({model.meta['kind']}, n={model.submanifold.n}, d={model.structure.d})", file=out)
    return EXIT_OK


# --- check / delta -----------------------------------------------------------


def _load(args):
    model = ModelFile.load(args.model)
    if args.mode and model.submanifold is not None:
        model.submanifold = model.submanifold.with_sigma(model.submanifold.sigma, args.mode)
    return model


def _report_path(args):
    if args.report:
        return Path(args.report)
    p = Path(args.model)
    return p.with_name(p.stem + ".report.json")


def _write_json(path, data):
    Path(path).write_text(json.dumps(data, indent=1, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def cmd_check(args, out):
    config = RunConfig(
        tol=args.tol, eq_tol=args.eq_tol, seed=args.seed, trials=args.trials, restarts=args.restarts,
        grid_resolution=args.grid_resolution, domain=args.domain, mode=args.mode, unchecked=args.unchecked,
    )
    model = _load(args)
    report, code = run_checks(model, config)
    _write_json(_report_path(args), report)
    if args.format == "json":
        print(json.dumps(report, indent=1, default=_jsonable), file=out)
        return code
    for e in report["validation"] + report["checks"]:
        gap = "" if e.get("gap") is None else f" gap={e['gap']:.3e}"
        res = e.get("residuals") or {}
        worst = f" max_residual={max(res.values()):.3e}" if res else ""
        print(f"{e['status'].upper():4s} {e['name']}{gap}{worst}", file=out)
    print(f"status: {report['status']} (exit {code}); report: {_report_path(args)}", file=out)
    return code


def cmd_delta(args, out):
    model = _load(args)
    sub = model.submanifold
    if sub is None:
        raise KMuError("model has no submanifold")
    if not args.unchecked:
        sub.require_valid()
    res = delta(sub, args.domain, args.restarts, args.seed, unchecked=args.unchecked)
    data = res.to_dict()
    code = EXIT_OK
    if args.grid_resolution:
        try:
            oracle = brute_force_min_sectional(
                sub, args.domain, args.grid_resolution, args.max_samples, unchecked=args.unchecked
            )
        except BudgetError as exc:
            data["error"] = str(exc)
            code = EXIT_FAIL
        else:
            res.oracle_min_K = oracle
            data = res.to_dict()
            if not res.oracle_agrees:
                code = EXIT_FAIL
    if args.format == "json":
        print(json.dumps(data, indent=1, default=_jsonable), file=out)
        return code
    print(f"delta[{args.domain}] = {res.value:.12g}", file=out)
    print(f"tau = {res.tau:.12g}, min K = {res.min_K:.12g}", file=out)
    print(f"plane e1 = {np.array2string(res.minimizing_plane.e1, precision=6)}", file=out)
    print(f"plane e2 = {np.array2string(res.minimizing_plane.e2, precision=6)}", file=out)
    print(f"restarts = {res.restarts_used}, converged = {res.converged}", file=out)
    if "error" in data:
        print(f"oracle: {data['error']}", file=out)
    elif res.oracle_min_K is not None:
        print(f"oracle min K = {res.oracle_min_K:.12g}, agrees = {res.oracle_agrees}", file=out)
    return code


COMMANDS = {"generate": cmd_generate, "check": cmd_check, "delta": cmd_delta}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (KMuError, ValueError) as exc:
        print(f"kmu-verify: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
