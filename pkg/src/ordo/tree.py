"""The total-order tree: levels, order moves, parents and depth-first next moves.

All positions are 1-based. A move ``(i, j)`` removes the event at position
``i`` and reinserts it right after the event originally at position ``j``.
The move ``(n, n+1)`` never applies; it tells the caller to backtrack.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .model import TotalOrder


class OrderMove(NamedTuple):
    i: int
    j: int

    def rank(self, n: int) -> int:
        return n * self.i + self.j

    def is_backtrack(self, n: int) -> bool:
        return self.i >= n

    def __str__(self):
        return f"({self.i}->{self.j})"


def backtrack_move(n: int) -> OrderMove:
    return OrderMove(n, n + 1)


@dataclass
class SearchCursor:
    current: TotalOrder
    l_c: int = 0


def level(order: TotalOrder) -> int:
    return order.level


def plv(order: TotalOrder) -> int:
    """Position of the level event inside the order."""
    return order.pos[order.level]


def apply_move(order: TotalOrder, m: OrderMove) -> TotalOrder:
    n = order.n
    i, j = m
    if m.is_backtrack(n):
        raise ValueError(f"{m} is the backtrack move and cannot be applied")
    if not 1 <= i < j <= n:
        raise ValueError(f"invalid move {m} for n={n}")
    s = order.seq
    return TotalOrder(s[: i - 1] + s[i:j] + (s[i - 1],) + s[j:])


def parent(order: TotalOrder) -> TotalOrder | None:
    """Tree parent, or ``None`` for the root."""
    n = order.n
    lvl = order.level
    if lvl == n:
        return None
    s = list(order.seq)
    s.pop(order.pos[lvl] - 1)
    s.insert(lvl - 1, lvl)
    return TotalOrder(s)


def children(order: TotalOrder) -> list[TotalOrder]:
    n = order.n
    return [apply_move(order, OrderMove(i, j))
            for i in range(1, order.level) for j in range(i + 1, n + 1)]


def next_move(cursor: SearchCursor) -> OrderMove:
    order, l_c = cursor.current, cursor.l_c
    lvl = order.level
    if l_c < lvl - 1:
        return OrderMove(l_c + 1, l_c + 2)
    p = plv(order)
    return OrderMove(p, p + 1)


def step(cursor: SearchCursor, move: OrderMove) -> SearchCursor | None:
    """Advance along ``move`` or backtrack; ``None`` once the root is exhausted."""
    order = cursor.current
    if not move.is_backtrack(order.n):
        return SearchCursor(apply_move(order, move), 0)
    up = parent(order)
    if up is None:
        return None
    # Returning to the parent, the latest visited child is this order, whose
    # level is the one the parent should continue after.
    return SearchCursor(up, order.level)


def enumerate_tree(n: int) -> Iterator[TotalOrder]:
    """Depth-first traversal driven by ``next_move``; yields each order once."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cursor: SearchCursor | None = SearchCursor(TotalOrder.root(n), 0)
    fresh = True
    while cursor is not None:
        if fresh:
            yield cursor.current
        move = next_move(cursor)
        fresh = not move.is_backtrack(n)
        cursor = step(cursor, move)
