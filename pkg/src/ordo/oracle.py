"""Exhaustive ground truth: evaluate every permutation."""
from __future__ import annotations

import itertools

from .model import ExtendedCost, OrderingProblem, TotalOrder
from .solver import CostFn

MAX_ORACLE_EVENTS = 8


class CapacityError(ValueError):
    """Raised when exhaustive enumeration would be too large."""


def oracle_solve(problem: OrderingProblem, g: CostFn) -> tuple[TotalOrder, ExtendedCost]:
    """Lexicographically first minimiser of ``g`` over all ``n!`` orders."""
    n = problem.n
    if n > MAX_ORACLE_EVENTS:
        raise CapacityError(f"oracle refuses n={n} events (limit {MAX_ORACLE_EVENTS})")
    best = best_cost = None
    for seq in itertools.permutations(range(1, n + 1)):
        order = TotalOrder(seq)
        cost = g(order)
        if best_cost is None or cost < best_cost:
            best, best_cost = order, cost
    return best, best_cost


def all_costs(problem: OrderingProblem, g: CostFn) -> dict[TotalOrder, ExtendedCost]:
    if problem.n > MAX_ORACLE_EVENTS:
        raise CapacityError(f"oracle refuses n={problem.n} events (limit {MAX_ORACLE_EVENTS})")
    return {TotalOrder(s): g(TotalOrder(s)) for s in itertools.permutations(range(1, problem.n + 1))}
