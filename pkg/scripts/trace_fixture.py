"""Print the iteration-by-iteration search on the four-flow example for both modes."""
from __future__ import annotations

import argparse

from ordo.cli import format_trace
from ordo.netcfg import DomainEvaluator, compile, motivating_instance
from ordo.solver import SolveConfig, solve


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", nargs="+", default=["gcdo", "cdito"])
    args = ap.parse_args(argv)
    problem = compile(motivating_instance())
    for mode in args.modes:
        ev = DomainEvaluator(problem)
        res = solve(problem, ev.g, ev.f, SolveConfig(mode=mode, trace=True))
        print(f"== {mode}: best {res.best_order} cost {res.best_cost}, "
              f"{res.stats.g_calls} g calls over {res.stats.explored_orders} orders")
        print(format_trace(res.trace))
        print()


if __name__ == "__main__":
    main()
