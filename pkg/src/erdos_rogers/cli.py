"""Command line entry point: ``erdos-rogers <subcommand> ...``.

Exit status: 0 on success, 1 when a lemma check fails or a pipeline contract
is violated (the witness is in the output), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import analyze, construct, verify
from .errors import ErdosRogersError, HashMismatch, IncompleteKtList, InvalidParams, OutOfRange, TooLarge
from .exponents import (
    ConstructionParams,
    LogConstants,
    check_intro_system,
    classify_pair,
    exponent_table,
    exponents,
    validate_log_constants,
)
from .schemes import ENUMERATION_CAP, enumerate_schemes, schemes_census_csv, scheme_value

DEFAULT_TABLE_PAIRS = [(3, 5), (4, 6), (4, 7), (5, 7), (5, 8), (5, 9)]


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.replace(";", " ").split():
        try:
            s, t = item.split(",")
            out.append((int(s), int(t)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"pairs look like '3,5 4,6', got {item!r}") from exc
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=str) + "\n"


# -- subcommands ----------------------------------------------------------------


def cmd_params(args) -> int:
    pair = classify_pair(args.s, args.t)
    e = exponents(pair)
    out = e.to_dict()
    if args.c1 is not None or args.c2 is not None or args.c3 is not None:
        if None in (args.c1, args.c2, args.c3):
            raise UsageError("--c1, --c2 and --c3 must be given together")
        constants = LogConstants(args.c1, args.c2, args.c3)
        out["log_constants"] = [c.to_dict() for c in validate_log_constants(pair, constants)]
        if args.n is not None:
            out["construction"] = ConstructionParams.from_asymptotics(args.n, args.s, args.t, constants).to_dict()
    if pair.s == 3 and pair.t == 5:
        out["intro_system"] = [c.to_dict() for c in check_intro_system(e.delta, e.alpha, e.alpha)]
    out["config"] = vars_of(args)
    _emit(_dump(out), args.out)
    return 0


def cmd_table(args) -> int:
    rows = exponent_table(args.pairs or DEFAULT_TABLE_PAIRS, places=args.places)
    if args.format == "json":
        _emit(_dump({"rows": [{"s": s, "t": t, "alpha": str(a)} for s, t, a in rows], "config": vars_of(args)}), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "t", "alpha"])
        for s, t, a in rows:
            w.writerow([s, t, str(a)])
        _emit(buf.getvalue(), args.out)
    return 0


def cmd_schemes(args) -> int:
    e = exponents((args.s, args.t))
    classes = enumerate_schemes(args.s, args.t, cap=args.cap)
    if args.format == "csv":
        _emit(schemes_census_csv(classes, e), args.out)
    else:
        rows = [{**q.to_dict(), "value": str(scheme_value(q, e))} for q in classes]
        _emit(_dump({"class_count": len(classes), "schemes": rows, "config": vars_of(args)}), args.out)
    return 0


def cmd_verify(args) -> int:
    lemma = args.lemma
    if lemma == "all":
        reports = verify.run_all(args.s_max, args.k_max)
    elif lemma == "negscheme":
        if args.s is None or args.t is None:
            raise UsageError("--lemma negscheme needs --s and --t")
        reports = [verify.verify_negscheme(args.s, args.t, cap=args.cap)]
    elif lemma == "extremal":
        reports = [verify.verify_extremal(args.s_max)]
    elif lemma == "app1":
        reports = [verify.verify_app1(args.s_max, args.k_max)]
    elif lemma == "app2":
        reports = [verify.verify_app2(args.s_max)]
    elif lemma == "localneg":
        reports = [verify.localneg_casecheck(args.mode)]
    elif lemma == "claim2":
        if not 14 <= args.t_min <= args.t_max:
            raise UsageError("--t-min/--t-max need 14 <= t_min <= t_max")
        reports = [verify.verify_claim2_large_t(args.t_min, args.t_max)]
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown lemma {lemma}")
    payload = [r.to_dict() for r in reports]
    if not args.verbose:
        for d in payload:
            d.pop("decisions", None)
            d.pop("classes", None)
    out = payload[0] if len(payload) == 1 else {"reports": payload}
    if isinstance(out, dict):
        out = {**out, "config": vars_of(args)}
    _emit(_dump(out), args.out)
    return 0 if all(r.ok for r in reports) else 1


def _params_from_args(args) -> ConstructionParams:
    if args.from_asymptotics:
        if args.n is None or None in (args.c1, args.c2, args.c3):
            raise UsageError("--from-asymptotics needs --n, --c1, --c2 and --c3")
        return ConstructionParams.from_asymptotics(args.n, args.s, args.t, LogConstants(args.c1, args.c2, args.c3))
    missing = [flag for flag, v in (("--n", args.n), ("--m", args.m), ("--gamma", args.gamma)) if v is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)} (or use --from-asymptotics)")
    a = args.a if args.a is not None else max(1, min(args.n, args.t))
    return ConstructionParams.direct(args.n, args.m, args.gamma, a, args.s, args.t)


def cmd_build(args) -> int:
    params = _params_from_args(args)
    try:
        result = construct.run_pipeline(params, args.seed)
    except IncompleteKtList as exc:
        _emit(_dump({"error": "IncompleteKtList", "message": str(exc)}), None)
        return 1
    paths = construct.write_build(result, args.out)
    ok = construct.verify_ktfree(result.g, params.t)
    summary = {
        "config": {"params": params.to_dict(), "seed": args.seed, "out": str(args.out)},
        "files": {k: str(v) for k, v in paths.items()},
        "edges": {"G0": len(result.g0.edges), "G1": len(result.g1.edges), "G": len(result.g.edges)},
        "kt_count": len(result.kts),
        "type1_removed": len(result.trace.type1_removed),
        "type2_removed": len(result.trace.type2_removed),
        "kt_free": ok,
    }
    sys.stdout.write(_dump(summary))
    return 0 if ok else 1


def _analyze_build(build_dir: Path, probe_trials: int, seed: int) -> dict:
    config = json.loads((build_dir / "config.json").read_text())
    params = ConstructionParams.from_dict(config["params"])
    g0 = construct.load_graph(build_dir / "g0.json")
    g1 = construct.load_graph(build_dir / "g1.json")
    g = construct.replay(build_dir / "trace.jsonl", build_dir / "g0.json")
    stored = (build_dir / "g.json").read_bytes()
    replay_ok = construct.graph_bytes(g) == stored
    kts = construct.find_kt(g1, params.t)
    e = exponents((params.s, params.t))
    successes, trials = analyze.subset_ks_probe(g, params.a, probe_trials, params.s, seed)
    census = analyze.scheme_census(kts, e, params)
    return {
        "config": {"build": str(build_dir), "params": params.to_dict(), "build_seed": config.get("seed"), "seed": seed},
        "edges": {"G0": len(g0.edges), "G1": len(g1.edges), "G": len(g.edges)},
        "kt_count": len(kts),
        "census": [r.to_dict() for r in census],
        "probe": {"trials": trials, "successes": successes},
        "cores_per_edge_max": max(construct.cores_per_edge(g1, kts).values(), default=0),
        "contract": {
            "kt_free": construct.verify_ktfree(g, params.t),
            "replay_byte_identical": replay_ok,
            "g_subset_g1": g.edges <= g1.edges,
            "g1_subset_g0": g1.edges <= g0.edges,
        },
    }


def cmd_experiment(args) -> int:
    if args.from_build:
        report = _analyze_build(Path(args.from_build), args.probe_trials, args.seed)
        _emit(_dump(report), args.out)
        return 0 if all(report["contract"].values()) else 1
    params = _params_from_args(args)
    seeds = [args.seed + i for i in range(args.runs)]
    try:
        report = analyze.full_experiment(params, seeds, args.probe_trials, threads=args.threads)
    except IncompleteKtList as exc:
        _emit(_dump({"error": "IncompleteKtList", "message": str(exc)}), None)
        return 1
    payload = report.to_dict()
    payload["config"] = vars_of(args)
    _emit(json.dumps(payload, indent=2, default=float) + "\n", args.out)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    return 0 if payload["aggregate"]["contract_ok"] else 1


def cmd_replay(args) -> int:
    try:
        g = construct.replay(args.trace, args.g0)
    except HashMismatch as exc:
        sys.stdout.write(_dump({"error": "HashMismatch", "message": str(exc)}))
        return 1
    data = construct.graph_bytes(g)
    if args.out:
        Path(args.out).write_bytes(data)
    result = {"config": vars_of(args), "edges": len(g.edges)}
    status = 0
    if args.expect:
        identical = Path(args.expect).read_bytes() == data
        result["byte_identical"] = identical
        status = 0 if identical else 1
    sys.stdout.write(_dump(result))
    return status


# -- parser ---------------------------------------------------------------------


def vars_of(args) -> dict:
    return {k: (str(v) if isinstance(v, (Fraction, Path)) else v) for k, v in vars(args).items() if k != "func"}


def _construction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--a", type=int)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="all randomness derives from this")
    p.add_argument("--from-asymptotics", action="store_true")
    p.add_argument("--c1", type=_fraction)
    p.add_argument("--c2", type=_fraction)
    p.add_argument("--c3", type=_fraction)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erdos-rogers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="exact exponents for a pair (s, t)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--c1", type=_fraction)
    p.add_argument("--c2", type=_fraction)
    p.add_argument("--c3", type=_fraction)
    p.add_argument("--out")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("table", help="alpha rounded to 3 decimals")
    p.add_argument("--pairs", type=_pairs, help="e.g. '3,5 4,6'; defaults to the six comparison rows")
    p.add_argument("--places", type=int, default=3)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("schemes", help="enumerate colour scheme classes")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_schemes)

    p = sub.add_parser("verify", help="run a lemma check")
    p.add_argument("--lemma", required=True, choices=["extremal", "negscheme", "app1", "app2", "localneg", "claim2", "all"])
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--s-max", type=int, default=40)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--t-min", type=int, default=14)
    p.add_argument("--t-max", type=int, default=20)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    p.add_argument("--verbose", action="store_true", help="include per-case decisions and class lists")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build", help="run G0 -> G1 -> G and write graph and trace files")
    _construction_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("experiment", help="Monte Carlo diagnostics over several seeds, or on a build")
    p.add_argument("--from-build", help="analyze an existing build directory instead of sampling")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--a", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--seed", type=int, required=True, help="first run seed; run i uses seed + i")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--probe-trials", type=int, default=20)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--from-asymptotics", action="store_true")
    p.add_argument("--c1", type=_fraction)
    p.add_argument("--c2", type=_fraction)
    p.add_argument("--c3", type=_fraction)
    p.add_argument("--out")
    p.add_argument("--csv", help="also write one CSV row per seed here")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("replay", help="rebuild G from G0 and a deletion trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--g0", required=True)
    p.add_argument("--out")
    p.add_argument("--expect", help="stored G file to compare byte for byte")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "experiment" and not args.from_build and (args.s is None or args.t is None):
        parser.error("experiment needs --s and --t unless --from-build is given")
    if getattr(args, "runs", 1) < 1 or getattr(args, "threads", 1) < 1:
        parser.error("--runs and --threads must be >= 1")
    try:
        return args.func(args)
    except (UsageError, OutOfRange, InvalidParams, TooLarge) as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        if isinstance(exc, OutOfRange):
            sys.stderr.write("valid pairs: s >= 3 and s+2 <= t <= 2s-1\n")
        return 2
    except ErdosRogersError as exc:
        sys.stdout.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
