"""Command-line entry point (``qipsearch``)."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bench import instance_files, run_bench
from .core import INF, QipError, format_value
from .formats import DepTooLarge, QdimacsError, QipSyntaxError, export_dep, import_qdimacs, read_qip, serialize
from .generators import RandomParams, RunwayParams, gen_random, gen_runway
from .oracle import INFEASIBLE, minimax, principal_variation
from .solver import Scp, SearchOptions, Status, solve

EXIT_OK, EXIT_INFEASIBLE, EXIT_LIMIT, EXIT_USAGE = 0, 20, 30, 2
ORACLE_MAX_VARS = 24

_SCP_ALIASES = {"off": "off", "feas": "feas", "opt": "opt", "both": "both",
                "feasibility-only": "feas", "optimization-only": "opt"}


class CliError(Exception):
    pass


def _summary(inst) -> str:
    return f"{inst.name or 'unnamed'}: n={inst.n} m={inst.m} blocks={inst.blocks.beta}"


def _load(path):
    try:
        return read_qip(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (QipSyntaxError, QipError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: {exc}") from exc


def _bits(x) -> str:
    return " ".join(map(str, x))


def cmd_solve(args) -> int:
    inst = _load(args.path)
    opts = SearchOptions(mono=args.mono == "on", scp=Scp(_SCP_ALIASES[args.scp]), move_ordering=args.ordering,
                         node_limit=args.node_limit, time_limit=args.timeout)
    res = solve(inst, opts)
    st = res.stats.as_dict()
    if args.json:
        obj = {
            "instance": inst.name,
            "status": res.status.value,
            "value": format_value(res.value),
            "first_stage": list(res.first_stage) if res.first_stage is not None else None,
            "pv": list(res.pv) if res.pv is not None else None,
            "lower": format_value(res.lower) if res.lower != -INF else "-inf",
            "upper": format_value(res.upper),
            "stats": st,
        }
        print(json.dumps(obj, sort_keys=True))
    else:
        print(f"instance: {_summary(inst)}")
        print(f"status: {res.status.value}")
        print(f"value: {format_value(res.value)}")
        if res.first_stage is not None:
            first = inst.blocks.blocks[0]
            print("first-stage: " + " ".join(f"x{j + 1}={v}" for j, v in zip(first.indices, res.first_stage)))
            print(f"pv: {_bits(res.pv)}")
        for k, v in st.items():
            print(f"{k}: {v:.6f}" if isinstance(v, float) else f"{k}: {v}")
    return {Status.FEASIBLE: EXIT_OK, Status.INFEASIBLE: EXIT_INFEASIBLE, Status.LIMIT: EXIT_LIMIT}[res.status]


def cmd_oracle(args) -> int:
    inst = _load(args.path)
    if inst.n > ORACLE_MAX_VARS and not args.force:
        raise CliError(f"oracle refuses n={inst.n} > {ORACLE_MAX_VARS} without --force")
    value = minimax(inst)
    pv = principal_variation(inst)
    if args.json:
        print(json.dumps({"value": format_value(value), "pv": None if pv is INFEASIBLE else list(pv)}))
    else:
        print(f"value: {format_value(value)}")
        print(f"pv: {'none' if pv is INFEASIBLE else _bits(pv)}")
    return EXIT_OK if value != INF else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    files = instance_files(args.dir)
    if not files:
        raise CliError(f"no .qip files in {args.dir}")
    report = run_bench(files, timeout=args.timeout, node_limit=args.node_limit, jobs=args.jobs)
    print(report.table())
    text = report.to_csv()
    if args.csv:
        with open(args.csv, "w", newline="\n") as fh:
            fh.write(text)
    else:
        print()
        print(text, end="")
    return EXIT_OK


def _emit(inst, out) -> None:
    text = serialize(inst)
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(_summary(inst), file=sys.stderr)


def cmd_gen(args) -> int:
    if args.kind == "runway":
        inst = gen_runway(RunwayParams(args.planes, args.slots, args.cap, args.window, args.disturbed,
                                       Fraction(args.cost), args.seed, args.disturbance,
                                       Fraction(args.deviation_cost)))
    else:
        inst = gen_random(RandomParams(args.n, args.m, Fraction(args.universal_fraction), Fraction(args.density),
                                       args.coeff_range, args.seed, args.denominator))
    _emit(inst, args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    try:
        with open(args.input) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror or exc}") from exc
    try:
        inst = import_qdimacs(text)
    except QdimacsError as exc:
        raise CliError(f"{args.input}: {exc}") from exc
    _emit(inst, args.output)
    return EXIT_OK


def cmd_export_dep(args) -> int:
    inst = _load(args.input)
    try:
        text = export_dep(inst, max_scenarios=args.max_scenarios)
    except DepTooLarge as exc:
        raise CliError(str(exc)) from exc
    with open(args.output, "w", newline="\n") as fh:
        fh.write(text)
    print(_summary(inst), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qipsearch", description="Exact search for binary quantified integer programs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance by game-tree search")
    s.add_argument("path")
    s.add_argument("--scp", choices=sorted(_SCP_ALIASES), default="opt")
    s.add_argument("--mono", choices=["on", "off"], default="on")
    s.add_argument("--ordering", choices=["default", "naive"], default="default")
    s.add_argument("--timeout", type=float, default=None, help="seconds")
    s.add_argument("--node-limit", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive minimax value and principal variation")
    o.add_argument("path")
    o.add_argument("--force", action="store_true")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="MONO x SCP ablation grid over a directory of .qip files")
    b.add_argument("dir")
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--node-limit", type=int, default=None)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="generate an instance")
    gsub = g.add_subparsers(dest="kind", required=True)
    r = gsub.add_parser("runway")
    r.add_argument("--planes", type=int, required=True)
    r.add_argument("--slots", type=int, required=True)
    r.add_argument("--cap", type=int, default=1)
    r.add_argument("--window", type=int, default=2)
    r.add_argument("--disturbed", type=int, default=None, help="default: min(2, planes)")
    r.add_argument("--cost", default="1")
    r.add_argument("--deviation-cost", default="0", help="cost per slot of initial-plan deviation from target")
    r.add_argument("--disturbance", choices=["shift", "delay"], default="shift")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-o", "--out", default=None)
    q = gsub.add_parser("random")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--universal-fraction", default="1/4")
    q.add_argument("--density", default="1/2")
    q.add_argument("--coeff-range", type=int, default=5)
    q.add_argument("--denominator", type=int, default=1)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("convert", help="QDIMACS to .qip")
    c.add_argument("input")
    c.add_argument("output", nargs="?")
    c.set_defaults(func=cmd_convert)

    e = sub.add_parser("export-dep", help="deterministic equivalent program as LP text")
    e.add_argument("input")
    e.add_argument("output")
    e.add_argument("--max-scenarios", type=int, default=1 << 20)
    e.set_defaults(func=cmd_export_dep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", None) == "runway" and args.disturbed is None:
        args.disturbed = min(2, args.planes)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
