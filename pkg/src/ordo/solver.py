"""Anytime branch-and-bound over the total-order tree.

Each iteration estimates the current order from the manifested bounding
constraints, calls the exact cost function only when the estimate beats the
incumbent, then moves to the later of the standard next move and the first
reducing move.

``mode="cdito"`` is the feasibility-only baseline: only infinite-cost bounding
constraints are used, so soft costs never prune and every order free of hard
conflicts is evaluated.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .bounds import BoundingConstraint, BoundingRegistry, init_bc
from .estimate import estimate_indices
from .model import ExtendedCost, HARD, OrderingProblem, TotalOrder, ZERO
from .pruning import _below, first_reducing
from .tree import OrderMove, SearchCursor, next_move, step

log = logging.getLogger(__name__)

CostFn = Callable[[TotalOrder], ExtendedCost]
ExtractFn = Callable[[TotalOrder], Iterable[BoundingConstraint]]


@dataclass
class SolveConfig:
    mode: str = "gcdo"
    time_limit: float = 30.0
    g_call_limit: int | None = None
    trace: bool = False
    clique_mode: str = "exact"

    def __post_init__(self):
        if self.mode not in ("gcdo", "cdito"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.clique_mode not in ("exact", "greedy"):
            raise ValueError(f"unknown clique mode {self.clique_mode!r}")
        if not self.time_limit > 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SolveStats:
    explored_orders: int = 0
    g_calls: int = 0
    extracted_bounds: int = 0
    iterations: int = 0

    @property
    def zeta(self) -> float:
        return self.g_calls / self.explored_orders if self.explored_orders else 0.0

    def as_dict(self) -> dict:
        return {"explored_orders": self.explored_orders, "g_calls": self.g_calls,
                "extracted_bounds": self.extracted_bounds, "iterations": self.iterations,
                "zeta": self.zeta}


@dataclass
class Incumbent:
    iteration: int
    elapsed: float
    cost: ExtendedCost
    order: TotalOrder


@dataclass
class SolveResult:
    best_order: TotalOrder | None
    best_cost: ExtendedCost
    proved_optimal: bool
    stats: SolveStats
    incumbent_history: list[Incumbent] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)
    registry: BoundingRegistry | None = field(default=None, repr=False)
    elapsed: float = 0.0

    @property
    def t1(self) -> float | None:
        return self.incumbent_history[0].elapsed if self.incumbent_history else None

    @property
    def gamma1(self) -> ExtendedCost | None:
        return self.incumbent_history[0].cost if self.incumbent_history else None

    def as_dict(self, timing: bool = True) -> dict:
        out = {
            "best_order": list(self.best_order.seq) if self.best_order else [],
            "best_cost": self.best_cost.as_dict(),
            "feasible": self.best_order is not None,
            "proved_optimal": self.proved_optimal,
            "stats": self.stats.as_dict(),
            "incumbent_history": [
                {"iteration": h.iteration, "cost": h.cost.as_dict(), "order": list(h.order.seq),
                 **({"elapsed": h.elapsed} if timing else {})}
                for h in self.incumbent_history
            ],
        }
        if timing:
            out["elapsed"] = self.elapsed
        return out


def _hard_only(theta: BoundingConstraint) -> ExtendedCost:
    return ExtendedCost(theta.cost.k, 0.0)


def solve(problem: OrderingProblem, g: CostFn, f: ExtractFn, config: SolveConfig | None = None,
          on_iteration: Callable[[dict], None] | None = None) -> SolveResult:
    config = config or SolveConfig()
    n = problem.n
    registry = BoundingRegistry(problem.weights(), init_bc(problem.ordering_constraints))
    initial = len(registry)
    stats = SolveStats()
    history: list[Incumbent] = []
    trace: list[dict] = []
    want_records = config.trace or on_iteration is not None
    cdito = config.mode == "cdito"
    clique = config.clique_mode

    def hard_clique(idxs):
        hard = [i for i in idxs if registry.items[i].cost.k > 0]
        return estimate_indices(registry, hard, clique, weight=_hard_only)

    def full_clique(idxs):
        return estimate_indices(registry, idxs, clique)

    started = time.perf_counter()
    cursor: SearchCursor | None = SearchCursor(TotalOrder.root(n), 0)
    fresh = True
    best: TotalOrder | None = None
    incumbent: ExtendedCost | None = None
    proved = False

    while True:
        if cursor is None:
            proved = True
            break
        if incumbent == ZERO:
            proved = True  # nothing can cost less
            break
        if time.perf_counter() - started > config.time_limit:
            break
        if config.g_call_limit is not None and stats.g_calls >= config.g_call_limit:
            break
        order = cursor.current
        stats.iterations += 1
        if fresh:
            stats.explored_orders += 1

        idxs = registry.manifested_indices(order)
        estimate, witness = hard_clique(idxs) if cdito else full_clique(idxs)
        gamma = estimate
        gval = None
        if fresh and _below(estimate, incumbent):
            assert _below(estimate, incumbent)
            gval = g(order)
            stats.g_calls += 1
            added = registry.ingest(f(order))
            if gval.finite and _below(gval, incumbent):
                incumbent, best = gval, order
                history.append(Incumbent(stats.iterations, time.perf_counter() - started, gval, order))
                log.debug("incumbent %s at %s", gval, order)
            if added:
                idxs = registry.manifested_indices(order)
                if not cdito:
                    estimate, witness = full_clique(idxs)

        # Before any incumbent both modes jump on hard conflicts only, which
        # keeps their first solutions identical.
        if cdito or incumbent is None:
            _, reduce_set = hard_clique(idxs)
        else:
            reduce_set = witness
        D = [registry.items[i] for i in reduce_set]
        std = next_move(cursor)
        red = first_reducing(order, D, incumbent)
        move: OrderMove = std
        if red is not None and std.rank(n) < red.rank(n):
            move = red

        if want_records:
            rec = {
                "iteration": stats.iterations, "order": list(order.seq), "level": order.level,
                "fresh": fresh, "D": [registry.items[i].id for i in witness], "gamma": gamma.as_dict(),
                "gamma_star": incumbent.as_dict() if incumbent is not None else None,
                "g_called": gval is not None, "g": gval.as_dict() if gval is not None else None,
                "standard": list(std), "reducing": list(red) if red is not None else None,
                "chosen": list(move),
            }
            if config.trace:
                trace.append(rec)
            if on_iteration is not None:
                on_iteration(rec)

        fresh = not move.is_backtrack(n)
        cursor = step(cursor, move)

    stats.extracted_bounds = len(registry) - initial
    return SolveResult(best, incumbent if incumbent is not None else HARD, proved, stats,
                       history, trace, registry, time.perf_counter() - started)


def solve_cdito_baseline(problem: OrderingProblem, g: CostFn, f: ExtractFn,
                         config: SolveConfig | None = None, **kw) -> SolveResult:
    config = config or SolveConfig(mode="cdito")
    if config.mode != "cdito":
        raise ValueError("baseline needs mode='cdito'")
    return solve(problem, g, f, config, **kw)
