from __future__ import annotations

import itertools

from hypothesis import given, settings, strategies as st

from ordo.bounds import bounding
from ordo.model import ExtendedCost, HARD, TotalOrder
from ordo.pruning import first_reducing, first_resolving, resolving_moves
from ordo.tree import OrderMove, apply_move, children

from .test_bounds import THETA4, THETA6

L = TotalOrder.parse("12453")


def test_first_resolving_move_of_concurrency_bound():
    assert first_resolving(L, THETA6) == OrderMove(1, 3)


def test_unreachable_partial_order_resolves_only_by_backtracking():
    assert first_resolving(L, THETA4) == OrderMove(5, 6)


def test_first_reducing_must_resolve_both():
    assert first_reducing(L, [THETA4, THETA6], ExtendedCost(0, 1)) == OrderMove(5, 6)


def test_resolving_one_of_two_can_be_enough():
    # Against inf+5, resolving the soft bound leaves inf, which is already below.
    assert first_reducing(L, [THETA4, THETA6], ExtendedCost(2, 0)) is None
    assert first_reducing(L, [THETA4, THETA6], ExtendedCost(1, 5)) == OrderMove(1, 3)
    assert first_reducing(L, [THETA4, THETA6], ExtendedCost(1, 0)) == OrderMove(5, 6)
    assert first_reducing(L, [THETA6], ExtendedCost(0, 1)) == OrderMove(1, 3)


def test_no_jump_when_nothing_to_reduce():
    assert first_reducing(L, [], ExtendedCost(0, 1)) is None
    assert first_reducing(L, [THETA6], ExtendedCost(0, 9)) is None
    assert first_reducing(L, [THETA6], None) is None
    assert first_reducing(L, [THETA4], None) == OrderMove(5, 6)


def test_resolving_moves_sorted_by_rank():
    ranks = [r.rank for r in resolving_moves(L, [THETA4, THETA6])]
    assert ranks == sorted(ranks)


def _subtree(order):
    stack = [order]
    while stack:
        o = stack.pop()
        yield o
        stack.extend(children(o))


pairs = st.tuples(st.integers(1, 5), st.integers(1, 5)).filter(lambda p: p[0] != p[1])


@settings(max_examples=40, deadline=None)
@given(st.sets(pairs, min_size=1, max_size=3))
def test_moves_before_first_resolving_keep_the_bound(po):
    # Every child or sibling reached by an earlier-ranked move, and its whole
    # subtree, still manifests the bound.
    if any((b, a) in po for a, b in po):
        return
    theta = bounding(po, ["x"], HARD)
    n = 5
    for seq in itertools.permutations(range(1, n + 1)):
        order = TotalOrder(seq)
        if not theta.manifested_by(order):
            continue
        limit = first_resolving(order, theta).rank(n)
        lvl = order.level
        for i in list(range(1, lvl)) + [order.pos[lvl]]:
            for j in range(i + 1, n + 1):
                m = OrderMove(i, j)
                if m.rank(n) >= limit:
                    continue
                for o in _subtree(apply_move(order, m)):
                    assert theta.manifested_by(o)
