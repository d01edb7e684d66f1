"""Batch front-end: build a model from a JSON spec, run selected checkers,
emit a machine-readable JSON report.

Exit codes: 0 when every requested check passes, 1 on a check failure,
2 on a configuration or parse error.  Reports are a deterministic function
of (config, seed): floats are printed with 17 significant digits and all
iteration orders are fixed, so identical invocations produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import (
    IsometrySystem,
    check_coefficient_algebra,
    check_commutative_extendability,
    check_extendability,
    check_extension_towers,
    check_intertwining_equivalents,
    extend_delta,
    extend_delta_star,
    verify_power_identities,
)
from .errors import IsoalgError, NotCommutative, HypothesisViolated
from .expr import parse
from .linalg import is_partial_isometry, matrix_from_json, matrix_to_json
from .models import (
    LoadedModel,
    load_model,
    polar_decompose,
    polar_structure_suite,
    qdeform_relations_suite,
)
from .normalform import check_adjoint_intertwining, reduce
from .norms import (
    gauge_invariance_sample,
    norm_limit_sample,
    sample_coefficient_bound,
    sum_norm_estimates_sample,
)
from .report import ConditionReport


def dump_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dump_json(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dump_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if obj != obj:  # NaN
            return "null"
        if obj == float("inf"):
            return "1e999"
        if obj == float("-inf"):
            return "-1e999"
        return format(obj, ".17g")
    if obj is None:
        return "null"
    return json.dumps(str(obj))


class ConfigError(Exception):
    """Invalid configuration; reported with exit code 2."""


def _guarded(fn, name: str) -> list[ConditionReport]:
    """Run a checker, converting hypothesis failures into failed reports so
    one broken condition does not abort the whole batch."""
    try:
        return [fn()]
    except NotCommutative as exc:
        rep = ConditionReport(name)
        rep.add("hypothesis: algebra commutative",
                getattr(exc, "defect", 1.0), 0.0)
        rep.note(str(exc))
        return [rep]
    except HypothesisViolated as exc:
        rep = ConditionReport(name)
        worst = exc.report.worst() if exc.report is not None else None
        rep.add("hypothesis", worst.value if worst else 1.0, 0.0)
        rep.note(str(exc))
        if exc.report is not None:
            rep.merge(exc.report, prefix="failed hypothesis")
        return [rep]


def _towers_report(loaded: LoadedModel) -> dict:
    seed = (loaded.polar.seed_algebra if loaded.polar else
            loaded.qdeform.seed_algebra if loaded.qdeform else
            loaded.system.algebra)
    u = loaded.system.u
    sys0 = IsometrySystem(seed, u)
    out = {"ambient_dim": seed.ambient_dim, "seed_dim": seed.dim}
    ext = extend_delta(sys0)
    out["delta_tower_dim"] = ext.dim
    full = extend_delta_star(IsometrySystem(ext, u))
    out["full_tower_dim"] = full.dim
    return out


def _run_checks(loaded: LoadedModel, names: list[str], cfg) -> tuple[list, list]:
    sys_ = loaded.system
    reports: list[ConditionReport] = []
    traces = []
    star = None

    def need_star():
        nonlocal star
        if star is None:
            star = sample_coefficient_bound(sys_, cfg.samples, cfg.seed, cfg.tol)
        return star

    for name in names:
        if name == "partial_isometry":
            reports.append(is_partial_isometry(sys_.u, cfg.tol))
        elif name == "intertwining":
            reports.append(check_intertwining_equivalents(sys_, cfg.tol))
        elif name == "coefficient_algebra":
            reports.append(check_coefficient_algebra(sys_, cfg.tol))
        elif name == "adjoint_intertwining":
            reports.append(check_adjoint_intertwining(sys_, cfg.tol))
        elif name == "extendability":
            reports.append(check_extendability(sys_, cfg.n_max, cfg.tol))
        elif name == "commutative_extendability":
            reports.extend(_guarded(
                lambda: check_commutative_extendability(sys_, cfg.n_max, cfg.tol),
                name))
        elif name == "power_structure":
            reports.append(verify_power_identities(sys_, cfg.k_max, cfg.tol))
        elif name == "extension_towers":
            reports.extend(_guarded(
                lambda: check_extension_towers(sys_, cfg.tol), name))
        elif name == "coefficient_bound":
            reports.append(need_star())
        elif name == "gauge_invariance":
            reports.append(gauge_invariance_sample(
                sys_, cfg.samples, cfg.seed, star_report=need_star(),
                tol=cfg.tol))
        elif name == "norm_limit":
            rep, trs = norm_limit_sample(
                sys_, min(cfg.samples, 50), cfg.seed, cfg.k_max,
                star_report=need_star())
            reports.append(rep)
            traces.extend(trs)
        elif name == "sum_norm_estimates":
            reports.append(sum_norm_estimates_sample(
                cfg.samples, cfg.seed, cfg.tol))
        elif name == "polar_structure":
            if loaded.polar is None:
                raise ConfigError("polar_structure requires a polar model")
            reports.append(polar_structure_suite(loaded.polar, cfg.k_max))
        elif name == "qdeform_relations":
            if loaded.qdeform is None:
                raise ConfigError("qdeform_relations requires a qdeform model")
            reports.append(qdeform_relations_suite(loaded.qdeform))
        else:
            raise ConfigError(
                f"unknown check {name!r}; registered: {', '.join(ALL_CHECKS)}")
    return reports, traces


# order matters: it is the execution order for --checks all
ALL_CHECKS = [
    "partial_isometry",
    "intertwining",
    "coefficient_algebra",
    "adjoint_intertwining",
    "extendability",
    "commutative_extendability",
    "power_structure",
    "extension_towers",
    "coefficient_bound",
    "gauge_invariance",
    "norm_limit",
    "sum_norm_estimates",
    "polar_structure",
    "qdeform_relations",
]

# checks that presuppose a coefficient algebra; skipped by --checks all on
# raw systems that fail the basic conditions (they would only repeat the
# failure), but still available by explicit request
_COEFFICIENT_CHECKS = {"coefficient_bound", "gauge_invariance", "norm_limit"}


def _applicable_checks(loaded: LoadedModel) -> list[str]:
    names = []
    coeff_ok = loaded.system.coefficient_report.passed
    for name in ALL_CHECKS:
        if name == "polar_structure" and loaded.polar is None:
            continue
        if name == "qdeform_relations" and loaded.qdeform is None:
            continue
        if name in _COEFFICIENT_CHECKS and not coeff_ok:
            continue
        names.append(name)
    return names


def _load_model_file(path: str, tol: float) -> LoadedModel:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load model spec {path!r}: {exc}") from exc
    try:
        return load_model(spec, tol)
    except (IsoalgError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"model does not build: {exc}") from exc


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _default_tol() -> float:
    env = os.environ.get("ISOALG_TOL")
    if env is None:
        return 1e-9
    try:
        return float(env)
    except ValueError:
        raise ConfigError(f"ISOALG_TOL={env!r} is not a number")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, help="model spec JSON file")
    p.add_argument("--tol", type=float, default=None,
                   help="tolerance (default 1e-9, or ISOALG_TOL)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-max", type=int, default=8, dest="k_max")
    p.add_argument("--n-max", type=int, default=6, dest="n_max")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="isoalg",
        description="verification suites for algebras generated by a "
                    "*-algebra and a partial isometry")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run checker suites against a model")
    _add_common(p)
    p.add_argument("--checks", default="all",
                   help="comma-separated check names, or 'all'")

    p = sub.add_parser("nf", help="parse an expression and print its "
                                  "canonical normal form")
    _add_common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--expr", help="expression text")
    g.add_argument("--expr-file", help="file containing the expression")

    p = sub.add_parser("norm-limit", help="norm-limit trace for an expression")
    _add_common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--expr", help="expression text")
    g.add_argument("--expr-file", help="file containing the expression")

    p = sub.add_parser("closure", help="print extension-tower dimensions")
    _add_common(p)

    p = sub.add_parser("polar", help="polar-decompose a matrix file")
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    return ap


def _read_expr(args) -> str:
    if args.expr is not None:
        return args.expr
    try:
        with open(args.expr_file) as fh:
            return fh.read().strip()
    except OSError as exc:
        raise ConfigError(f"cannot read expression file: {exc}") from exc


def _cmd_run(args) -> int:
    loaded = _load_model_file(args.model, args.tol)
    if args.checks.strip() == "all":
        names = _applicable_checks(loaded)
    else:
        names = [n.strip() for n in args.checks.split(",") if n.strip()]
    reports, traces = _run_checks(loaded, names, args)
    ok = all(r.passed for r in reports)
    doc = {
        "config": {"model": args.model, "checks": names, "tol": args.tol,
                   "seed": args.seed, "k_max": args.k_max, "n_max": args.n_max,
                   "samples": args.samples},
        "pass": ok,
        "results": [r.to_json() for r in reports],
    }
    if traces:
        doc["traces"] = [t.to_json(include_form=False) for t in traces]
    _emit(dump_json(doc), args.out)
    return 0 if ok else 1


def _cmd_nf(args) -> int:
    loaded = _load_model_file(args.model, args.tol)
    text = _read_expr(args)
    e = parse(text, loaded.system, loaded.generators)
    nf = reduce(e, loaded.system)
    _emit(dump_json(nf.to_json()), args.out)
    return 0


def _cmd_norm_limit(args) -> int:
    loaded = _load_model_file(args.model, args.tol)
    text = _read_expr(args)
    e = parse(text, loaded.system, loaded.generators)
    nf = reduce(e, loaded.system)
    star = sample_coefficient_bound(loaded.system, args.samples, args.seed,
                                    args.tol)
    from .norms import norm_limit
    trace = norm_limit(nf, args.k_max, star)
    doc = {"coefficient_bound": star.to_json(), "trace": trace.to_json()}
    _emit(dump_json(doc), args.out)
    return 0


def _cmd_closure(args) -> int:
    loaded = _load_model_file(args.model, args.tol)
    try:
        doc = _towers_report(loaded)
    except (HypothesisViolated, NotCommutative) as exc:
        doc = {"error": str(exc)}
        if isinstance(exc, HypothesisViolated) and exc.report is not None:
            doc["report"] = exc.report.to_json()
        _emit(dump_json(doc), args.out)
        return 1
    _emit(dump_json(doc), args.out)
    return 0


def _cmd_polar(args) -> int:
    try:
        with open(args.matrix) as fh:
            mat = matrix_from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, IsoalgError) as exc:
        raise ConfigError(f"cannot load matrix: {exc}") from exc
    u, abs_a = polar_decompose(mat)
    doc = {
        "U": matrix_to_json(u),
        "abs": matrix_to_json(abs_a),
        "partial_isometry": is_partial_isometry(u, args.tol).to_json(),
    }
    _emit(dump_json(doc), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.tol is None:
            args.tol = _default_tol()
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "nf":
            return _cmd_nf(args)
        if args.command == "norm-limit":
            return _cmd_norm_limit(args)
        if args.command == "closure":
            return _cmd_closure(args)
        if args.command == "polar":
            return _cmd_polar(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"isoalg: {exc}", file=sys.stderr)
        return 2
    except IsoalgError as exc:
        print(f"isoalg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
