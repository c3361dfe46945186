from __future__ import annotations

import itertools
import math

import pytest

from ordo.model import TotalOrder
from ordo.tree import (
    OrderMove, SearchCursor, apply_move, children, enumerate_tree, next_move, parent, plv, step,
)


@pytest.mark.parametrize("start,move,result", [
    ("12345", (1, 3), "23145"),
    ("23145", (3, 4), "23415"),
    ("1234", (3, 4), "1243"),
])
def test_apply_move(start, move, result):
    assert apply_move(TotalOrder.parse(start), OrderMove(*move)) == TotalOrder.parse(result)


def test_backtrack_move_cannot_be_applied():
    with pytest.raises(ValueError):
        apply_move(TotalOrder.parse("12345"), OrderMove(5, 6))


@pytest.mark.parametrize("text,expected", [("23145", "12345"), ("12435", "12345"), ("21345", "12345")])
def test_parent(text, expected):
    assert parent(TotalOrder.parse(text)) == TotalOrder.parse(expected)


def test_root_has_no_parent():
    assert parent(TotalOrder.root(4)) is None


@pytest.mark.parametrize("text,expected", [("12435", 4), ("12345", 5), ("21345", 2)])
def test_plv(text, expected):
    assert plv(TotalOrder.parse(text)) == expected


@pytest.mark.parametrize("text,lc,move", [("12345", 0, (1, 2)), ("12453", 2, (5, 6)), ("1234", 3, (4, 5))])
def test_next_move(text, lc, move):
    assert next_move(SearchCursor(TotalOrder.parse(text), lc)) == OrderMove(*move)


@pytest.mark.parametrize("n", range(1, 8))
def test_enumerate_tree_is_complete(n):
    seen = [o.seq for o in enumerate_tree(n)]
    assert len(seen) == math.factorial(n) == len(set(seen))
    assert seen[0] == tuple(range(1, n + 1))


@pytest.mark.parametrize("n", range(2, 7))
def test_parent_inverts_every_child_move(n):
    for seq in itertools.permutations(range(1, n + 1)):
        order = TotalOrder(seq)
        for child in children(order):
            assert parent(child) == order
            assert child.level < order.level


def _descendants(order):
    stack = list(children(order))
    while stack:
        o = stack.pop()
        yield o
        stack.extend(children(o))


def _relative(order, events):
    return [e for e in order.seq if e in events]


@pytest.mark.parametrize("n", range(1, 7))
def test_high_events_keep_relative_order_in_descendants(n):
    # Events at or above the level never change relative order below a node.
    for seq in itertools.permutations(range(1, n + 1)):
        order = TotalOrder(seq)
        fixed = set(range(order.level, n + 1))
        ref = _relative(order, fixed)
        for d in _descendants(order):
            assert _relative(d, fixed) == ref


@pytest.mark.parametrize("n", range(2, 6))
def test_moves_from_one_cursor_have_increasing_rank(n):
    # Replay the traversal and check ranks issued at each node increase.
    last_rank: dict[TotalOrder, int] = {}
    cursor = SearchCursor(TotalOrder.root(n), 0)
    while cursor is not None:
        m = next_move(cursor)
        r = m.rank(n)
        assert r > last_rank.get(cursor.current, -1)
        last_rank[cursor.current] = r
        cursor = step(cursor, m)
