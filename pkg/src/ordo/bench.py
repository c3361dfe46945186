"""Benchmark harness: seeded trials per scenario and mode, aggregated into rows.

Only trials with a finite-cost order are aggregated. Seeds are drawn in
sequence from the scenario's base seed; a seed is skipped when a hard
mission is unroutable on its own, or when the exhaustive gcdo run proves
every order infeasible. ``t1``, ``gamma1`` and ``gamma`` average the trials
that found a solution in that mode.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import fmean
from typing import Sequence

from .model import ExtendedCost
from .netcfg import DomainEvaluator, GeneratorConfig, compile, generate, unroutable_hard_flows
from .solver import SolveConfig, solve

CSV_COLUMNS = ["scenario", "mode", "t1", "gamma1_k", "gamma1_c", "gamma_k", "gamma_c", "eta", "zeta"]
MODES = ("gcdo", "cdito")


@dataclass
class TrialResult:
    n_flows: int
    seed: int
    mode: str
    found: bool
    t1: float | None
    gamma1: ExtendedCost | None
    gamma: ExtendedCost
    proved_optimal: bool
    zeta: float
    g_calls: int
    explored: int


@dataclass
class BenchRow:
    n_flows: int
    mode: str
    trials: int
    t1: float | None
    gamma1: ExtendedCost | None
    gamma: ExtendedCost | None
    eta: int
    zeta: float
    skipped: int = 0

    def csv_fields(self) -> list:
        def num(x):
            return "" if x is None else f"{x:.6g}"
        g1 = self.gamma1 or ExtendedCost(0, float("nan"))
        g = self.gamma or ExtendedCost(0, float("nan"))
        return [self.n_flows, self.mode, num(self.t1), g1.k, num(g1.c), g.k, num(g.c), self.eta,
                f"{self.zeta:.6g}"]


def base_seed(default: int = 0) -> int:
    raw = os.environ.get("ORDO_SEED")
    return int(raw) if raw not in (None, "") else default


def run_trial(config: GeneratorConfig, mode: str, timeout: float) -> TrialResult:
    problem = compile(generate(config))
    ev = DomainEvaluator(problem)
    res = solve(problem, ev.g, ev.f, SolveConfig(mode=mode, time_limit=timeout))
    return TrialResult(config.n_flows, config.seed, mode, res.best_order is not None, res.t1, res.gamma1,
                       res.best_cost, res.proved_optimal, res.stats.zeta, res.stats.g_calls,
                       res.stats.explored_orders)


def _run_seed(args) -> list[TrialResult] | None:
    config, modes, timeout = args
    if unroutable_hard_flows(generate(config)):
        return None
    results = [run_trial(config, m, timeout) for m in modes]
    if not any(r.found for r in results) and all(r.proved_optimal for r in results):
        return None
    return results


def collect_trials(scenario: GeneratorConfig, modes: Sequence[str] = MODES, timeout: float = 30.0,
                   trials: int = 20, max_draws: int | None = None, workers: int = 1
                   ) -> tuple[list[list[TrialResult]], int]:
    """Run seeds ``scenario.seed, scenario.seed + 1, ...`` until ``trials`` are kept.

    Returns the kept per-seed results and how many seeds were skipped.
    """
    max_draws = max_draws if max_draws is not None else 100 * trials
    kept: list[list[TrialResult]] = []
    skipped = 0
    next_seed = scenario.seed
    last = scenario.seed + max_draws
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while len(kept) < trials and next_seed < last:
            batch = range(next_seed, min(last, next_seed + max(workers, 1)))
            next_seed = batch.stop
            jobs = [(dataclasses.replace(scenario, seed=s), tuple(modes), timeout) for s in batch]
            outs = pool.map(_run_seed, jobs) if pool else map(_run_seed, jobs)
            for out in outs:
                if out is None:
                    skipped += 1
                elif len(kept) < trials:
                    kept.append(out)
    finally:
        if pool:
            pool.shutdown()
    return kept, skipped


def _mean_cost(costs: list[ExtendedCost]) -> ExtendedCost | None:
    return ExtendedCost(0, fmean(c.c for c in costs)) if costs else None


def aggregate(n_flows: int, mode: str, results: list[TrialResult], skipped: int = 0) -> BenchRow:
    found = [r for r in results if r.found]
    return BenchRow(
        n_flows, mode, len(results),
        fmean(r.t1 for r in found) if found else None,
        _mean_cost([r.gamma1 for r in found]),
        _mean_cost([r.gamma for r in found]),
        sum(r.proved_optimal for r in results),
        fmean(r.zeta for r in results) if results else 0.0,
        skipped,
    )


def run_bench(scenarios: Sequence[GeneratorConfig], modes: Sequence[str] = MODES, timeout: float = 30.0,
              trials: int = 20, workers: int = 1, max_draws: int | None = None) -> list[BenchRow]:
    rows = []
    for sc in scenarios:
        kept, skipped = collect_trials(sc, modes, timeout, trials, max_draws, workers)
        for i, mode in enumerate(modes):
            rows.append(aggregate(sc.n_flows, mode, [seed_res[i] for seed_res in kept], skipped))
    return rows


def to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def format_table(rows: Sequence[BenchRow]) -> str:
    head = f"{'flows':>5} {'mode':>6} {'trials':>6} {'skipped':>7} {'t1(s)':>8} {'gamma1':>8} {'gamma':>8} {'eta':>4} {'zeta':>6}"
    lines = [head, "-" * len(head)]
    for r in rows:
        t1 = f"{r.t1:.3f}" if r.t1 is not None else "-"
        g1 = f"{r.gamma1.c:.3f}" if r.gamma1 is not None else "-"
        g = f"{r.gamma.c:.3f}" if r.gamma is not None else "-"
        lines.append(f"{r.n_flows:>5} {r.mode:>6} {r.trials:>6} {r.skipped:>7} {t1:>8} {g1:>8} {g:>8} "
                     f"{r.eta:>4} {r.zeta:>6.3f}")
    return "\n".join(lines)
