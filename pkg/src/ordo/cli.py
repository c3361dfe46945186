"""Command-line entry point: ``ordo <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 timeout without any solution.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import bench
from .io import InputError, dumps, load_problem, save_instance
from .netcfg import DomainEvaluator, GeneratorConfig, generate, motivating_instance, compile
from .oracle import CapacityError, oracle_solve
from .solver import SolveConfig, solve
from .tree import enumerate_tree

EXIT_OK, EXIT_INPUT, EXIT_TIMEOUT = 0, 2, 3


def _fmt_cost(d: dict | None) -> str:
    if d is None:
        return "-"
    k, c = d["k"], d["c"]
    if k == 0:
        return f"{c:g}"
    return f"{'' if k == 1 else k}inf" + (f"+{c:g}" if c else "")


def _fmt_move(m) -> str:
    return "-" if m is None else f"({m[0]}->{m[1]})"


def format_trace(records: list[dict]) -> str:
    head = f"{'it':>3}  {'order':<8} {'lv':>2}  {'D':<22} {'gamma':>8} {'gamma*':>7} {'std':>8} {'red':>8}  g"
    lines = [head]
    for r in records:
        order = "".join(map(str, r["order"])) if len(r["order"]) <= 9 else "-".join(map(str, r["order"]))
        lines.append(
            f"{r['iteration']:>3}  {order:<8} {r['level']:>2}  {','.join(r['D']) or '{}':<22} "
            f"{_fmt_cost(r['gamma']):>8} {_fmt_cost(r['gamma_star']):>7} {_fmt_move(r['standard']):>8} "
            f"{_fmt_move(r['reducing']):>8}  {_fmt_cost(r['g']) if r['g_called'] else ''}"
        )
    return "\n".join(lines)


def cmd_solve(args) -> int:
    problem, _ = load_problem(args.problem)
    ev = DomainEvaluator(problem)
    cfg = SolveConfig(mode=args.mode, time_limit=args.timeout, g_call_limit=args.g_call_limit,
                      trace=bool(args.trace), clique_mode=args.clique)
    res = solve(problem, ev.g, ev.f, cfg)
    out = res.as_dict()
    if args.dump_bounds:
        out["bounds"] = [t.as_dict() for t in res.registry]
    text = dumps(out)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in res.trace:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    if res.best_order is None and not res.proved_optimal:
        print("timeout before any finite-cost order was found", file=sys.stderr)
        return EXIT_TIMEOUT
    return EXIT_OK


def cmd_oracle(args) -> int:
    problem, _ = load_problem(args.problem)
    ev = DomainEvaluator(problem)
    order, cost = oracle_solve(problem, ev.g)
    print(dumps({"best_order": list(order.seq), "best_cost": cost.as_dict()}))
    return EXIT_OK


def cmd_generate(args) -> int:
    inst = generate(GeneratorConfig(n_flows=args.flows, seed=bench.base_seed(args.seed)))
    if args.out:
        save_instance(inst, args.out)
    else:
        print(dumps(inst.as_dict()))
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = bench.base_seed(args.seed)
    scenarios = [GeneratorConfig(n_flows=k, seed=seed) for k in args.flows]
    rows = bench.run_bench(scenarios, args.modes, args.timeout, args.trials, workers=args.workers)
    csv_text = bench.to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    print(csv_text, end="")
    print(bench.format_table(rows), file=sys.stderr)
    return EXIT_OK


def cmd_tree(args) -> int:
    if not 1 <= args.n <= 10:
        raise InputError("n", f"expected 1..10, got {args.n}")
    for rank, order in enumerate(enumerate_tree(args.n)):
        print(f"{rank},{''.join(map(str, order.seq)) if args.n <= 9 else '-'.join(map(str, order.seq))},{order.level}")
    return EXIT_OK


def cmd_trace_fixture(args) -> int:
    problem = compile(motivating_instance())
    ev = DomainEvaluator(problem)
    res = solve(problem, ev.g, ev.f, SolveConfig(mode=args.mode, trace=True))
    print(format_trace(res.trace))
    names = {t.id: str(t) for t in res.registry}
    print()
    for tid, text in names.items():
        print(f"{tid}: {text}")
    print(f"\nbest {res.best_order} cost {res.best_cost} proved_optimal={res.proved_optimal} "
          f"g_calls={res.stats.g_calls} explored={res.stats.explored_orders}")
    return EXIT_OK


def _positive(x: str) -> float:
    v = float(x)
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ordo", description="Optimal total ordering by branch and bound.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance or compiled problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--mode", choices=("gcdo", "cdito"), default="gcdo")
    p.add_argument("--timeout", type=_positive, default=30.0)
    p.add_argument("--g-call-limit", type=int, default=None)
    p.add_argument("--clique", choices=("exact", "greedy"), default="exact")
    p.add_argument("--trace", help="write one JSON record per iteration here")
    p.add_argument("--out", help="result JSON path (default stdout)")
    p.add_argument("--dump-bounds", action="store_true", help="include learned bounding constraints")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive minimum over all orders (n <= 8)")
    p.add_argument("--problem", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--flows", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run seeded trials and print CSV")
    p.add_argument("--flows", type=int, nargs="+", default=[3, 4, 5])
    p.add_argument("--modes", nargs="+", choices=bench.MODES, default=list(bench.MODES))
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--timeout", type=_positive, default=30.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", help="also write the CSV here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("tree", help="list the order tree in search order")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("trace-fixture", help="replay the four-flow example iteration by iteration")
    p.add_argument("--mode", choices=("gcdo", "cdito"), default="gcdo")
    p.set_defaults(func=cmd_trace_fixture)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InputError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: no such file", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
