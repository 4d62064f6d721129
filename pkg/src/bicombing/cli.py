"""Command-line interface.

Subcommands: space-check, wasserstein, barycenter, fixpoint, density,
counterexample. Inputs are JSON documents (see docs/schemas.md); output
is a JSON report that embeds the seed and a digest of every input file,
so identical invocations produce byte-identical results.

Exit codes: 0 success/pass, 1 property or numeric failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys

from .barycenter import BaryConfig, BarycenterError, beta, locality_certificate
from .checks import (
    check_busemann,
    check_conical,
    check_geodesic_speed,
    check_midpoint_property,
)
from .counterexample import verify_counterexample
from .dynamics import banach_density_estimate, fixed_point_solve, orbit
from .serialize import (
    iso_from_doc,
    measure_from_doc,
    point_from_doc,
    point_to_doc,
    space_from_doc,
    target_from_doc,
)
from .wasserstein import w1_atomic

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_CHECKS = {
    "conical": check_conical,
    "midpoint": check_midpoint_property,
    "busemann": check_busemann,
    "speed": check_geodesic_speed,
}


class UsageError(Exception):
    pass


def _load_json(path: str, digests: dict) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    digests[path] = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _report_doc(rep) -> dict:
    return {
        "name": rep.name,
        "passed": rep.passed,
        "margin": rep.margin,
        "tolerance": rep.tolerance,
        "samples": rep.samples,
        "seed": rep.seed,
    }


def _cmd_space_check(args, digests):
    space = space_from_doc(_load_json(args.space, digests))
    names = [p.strip() for p in args.props.split(",") if p.strip()]
    unknown = [p for p in names if p not in _CHECKS]
    if unknown:
        raise UsageError(f"unknown properties {unknown}; choose from {sorted(_CHECKS)}")
    tol = args.tol if args.tol is not None else 1e-9
    reports = [_CHECKS[p](space, args.n, tol=tol, seed=args.seed) for p in names]
    ok = all(r["passed"] for r in map(_report_doc, reports))
    return {"checks": [_report_doc(r) for r in reports]}, EXIT_OK if ok else EXIT_FAILURE


def _cmd_wasserstein(args, digests):
    space = space_from_doc(_load_json(args.space, digests))
    mu = measure_from_doc(_load_json(args.mu, digests), space)
    nu = measure_from_doc(_load_json(args.nu, digests), space)
    return {"w1": w1_atomic(space, mu, nu)}, EXIT_OK


def _cmd_barycenter(args, digests):
    space = space_from_doc(_load_json(args.space, digests))
    mu = measure_from_doc(_load_json(args.measure, digests), space)
    cfg = BaryConfig(
        tuple_tol=args.tuple_tol if args.tuple_tol is not None else 1e-12,
        limit_tol=args.limit_tol if args.limit_tol is not None else 1e-8,
    )
    try:
        res = beta(space, mu, cfg)
    except BarycenterError as exc:
        return {"error": str(exc)}, EXIT_FAILURE
    doc = {
        "point": point_to_doc(space, res.point),
        "k_used": res.k_used,
        "residual": res.residual,
        "method": res.method,
    }
    if args.certify:
        doc["locality"] = _report_doc(locality_certificate(space, mu, res.point))
    return doc, EXIT_OK


def _cmd_fixpoint(args, digests):
    space = space_from_doc(_load_json(args.space, digests))
    iso = iso_from_doc(_load_json(args.iso, digests))
    x0 = point_from_doc(space, _load_json(args.x0, digests))
    target = target_from_doc(space, _load_json(args.target, digests))
    try:
        schedule = [int(s) for s in args.schedule.split(",") if s]
    except ValueError as exc:
        raise UsageError(f"bad schedule {args.schedule!r}: {exc}") from exc
    tol = args.tol if args.tol is not None else 1e-6
    try:
        rep = fixed_point_solve(space, iso, x0, target, schedule, tol=tol)
    except BarycenterError as exc:
        return {"error": str(exc)}, EXIT_FAILURE
    return {
        "status": rep.status,
        "point": point_to_doc(space, rep.point),
        "horizons": rep.horizons,
        "residual_series": rep.residuals,
        "cauchy_gaps": rep.cauchy_gaps,
        "density": str(rep.density),
        "notes": rep.notes,
    }, EXIT_OK


def _cmd_density(args, digests):
    space = space_from_doc(_load_json(args.space, digests))
    iso = iso_from_doc(_load_json(args.iso, digests))
    x0 = point_from_doc(space, _load_json(args.x0, digests))
    target = target_from_doc(space, _load_json(args.target, digests))
    horizon = args.base + args.L + args.K
    trace = orbit(space, iso, x0, horizon)
    visits = trace.visit_set(target)
    density = banach_density_estimate(visits, horizon, args.K, args.L, args.base)
    return {
        "density": str(density),
        "density_float": float(density),
        "visits": len(visits),
        "K": args.K,
        "L": args.L,
        "base": args.base,
    }, EXIT_OK


def _cmd_counterexample(args, digests):
    if args.action != "verify":
        raise UsageError(f"unknown counterexample action {args.action!r}")
    reports = verify_counterexample(args.samples, args.max_support, args.seed)
    ok = all(r.passed for r in reports)
    return {"checks": [_report_doc(r) for r in reports]}, EXIT_OK if ok else EXIT_FAILURE


def _to_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "residual_series" in doc:
        writer.writerow(["horizon", "residual"])
        for n, r in zip(doc["horizons"], doc["residual_series"]):
            writer.writerow([n, repr(r)])
    elif "checks" in doc:
        writer.writerow(["name", "passed", "margin", "tolerance"])
        for c in doc["checks"]:
            writer.writerow([c["name"], c["passed"], repr(c["margin"]), repr(c["tolerance"])])
    else:
        writer.writerow(sorted(doc))
        writer.writerow([doc[k] for k in sorted(doc)])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bicombing",
        description="Geodesic bicombings, barycenters, transport, and fixed points.",
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("--tol", type=float, default=None, help="tolerance override")
    parser.add_argument("--out", default=None, help="write the JSON report here")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space-check", help="sampled verification of the geodesic axioms")
    p.add_argument("--space", required=True)
    p.add_argument("--props", default="conical,midpoint,busemann")
    p.add_argument("--n", type=int, default=10_000)

    p = sub.add_parser("wasserstein", help="exact W1 between two atomic measures")
    p.add_argument("--space", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)

    p = sub.add_parser("barycenter", help="barycenter of an atomic measure")
    p.add_argument("--space", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--tuple-tol", type=float, default=None, dest="tuple_tol")
    p.add_argument("--limit-tol", type=float, default=None, dest="limit_tol")
    p.add_argument("--certify", action="store_true", help="also certify hull membership")

    p = sub.add_parser("fixpoint", help="orbit-averaging fixed-point solver")
    p.add_argument("--space", required=True)
    p.add_argument("--iso", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--schedule", default="10,100,1000")

    p = sub.add_parser("density", help="upper-Banach-density estimate of target visits")
    p.add_argument("--space", required=True)
    p.add_argument("--iso", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--K", type=int, default=300)
    p.add_argument("--L", type=int, default=300)
    p.add_argument("--base", type=int, default=0)

    p = sub.add_parser("counterexample", help="certify the fixed-point-free space")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--max-support", type=int, default=20, dest="max_support")

    return parser


_DISPATCH = {
    "space-check": _cmd_space_check,
    "wasserstein": _cmd_wasserstein,
    "barycenter": _cmd_barycenter,
    "fixpoint": _cmd_fixpoint,
    "density": _cmd_density,
    "counterexample": _cmd_counterexample,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    digests: dict = {}
    try:
        result, code = _DISPATCH[args.command](args, digests)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = {
        "command": args.command,
        "seed": args.seed,
        "inputs": digests,
        "result": result,
    }
    text = (
        json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if args.format == "json"
        else _to_csv(result)
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
