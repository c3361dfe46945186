"""Reduction-directed jumps over orders that provably cannot beat the incumbent."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bounds import BoundingConstraint
from .model import ExtendedCost, TotalOrder, cost_sum
from .tree import OrderMove, backtrack_move


@dataclass(frozen=True)
class ResolvingMove:
    move: OrderMove
    source: str
    rank: int


def first_resolving(order: TotalOrder, theta: BoundingConstraint) -> OrderMove:
    """Earliest-ranked move that negates one of ``theta``'s partial orders.

    Only events no larger than the level can still be shifted right in the
    subtree and among same-level siblings; if none of them heads a partial
    order of ``theta``, the constraint stays manifested until we backtrack.
    """
    n = order.n
    lvl = order.level
    pos = order.pos
    best = backtrack_move(n)
    best_rank = best.rank(n)
    for a, b in theta.partial_orders:
        if a <= lvl:
            m = OrderMove(pos[a], pos[b])
            r = m.rank(n)
            if r < best_rank:
                best, best_rank = m, r
    return best


def resolving_moves(order: TotalOrder, D: Sequence[BoundingConstraint]) -> list[ResolvingMove]:
    n = order.n
    out = []
    for theta in D:
        m = first_resolving(order, theta)
        out.append(ResolvingMove(m, theta.id, m.rank(n)))
    out.sort(key=lambda r: (r.rank, r.source))
    return out


def _below(cost: ExtendedCost, incumbent: ExtendedCost | None) -> bool:
    # No incumbent yet behaves like an infinite one: only finite costs beat it.
    if incumbent is None:
        return cost.finite
    return cost < incumbent


def first_reducing(order: TotalOrder, D: Sequence[BoundingConstraint],
                   incumbent: ExtendedCost | None) -> OrderMove | None:
    """Earliest move after which the still-unresolved part of ``D`` can fall below the incumbent.

    Returns ``None`` when no jump is forced: ``D`` is empty, or its whole cost
    is already below the incumbent. Returns the backtrack move when even
    resolving everything reachable cannot get below the incumbent.
    """
    if not D:
        return None
    if _below(cost_sum(t.cost for t in D), incumbent):
        return None
    n = order.n
    moves = sorted(((first_resolving(order, t), t.cost) for t in D), key=lambda mc: mc[0].rank(n))
    r = 0
    while r < len(moves):
        rank = moves[r][0].rank(n)
        # Constraints whose resolving moves share a rank are resolved together.
        while r < len(moves) and moves[r][0].rank(n) == rank:
            r += 1
        remaining = cost_sum(c for _, c in moves[r:])
        if _below(remaining, incumbent):
            return moves[r - 1][0]
    return backtrack_move(n)
