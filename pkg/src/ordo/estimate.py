"""Optimistic cost estimation from manifested bounding constraints.

The estimate of an order is the largest total cost over sets of manifested
bounding constraints that are pairwise disjoint (their shared constraints are
all hard). That is a maximum-weight clique in the disjointness graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .bounds import BoundingConstraint, BoundingRegistry, disjoint
from .model import ExtendedCost, TotalOrder, ZERO

# Slack on the soft component when comparing a bound against the incumbent
# clique, so float rounding in the bound never prunes an equal-weight clique.
_EPS = 1e-9


@dataclass
class DisjointnessGraph:
    vertices: list[BoundingConstraint]
    weights: list[ExtendedCost]
    adjacency: list[int]  # bitset per vertex

    @classmethod
    def build(cls, thetas: Sequence[BoundingConstraint], weights: Mapping[str, ExtendedCost]):
        adj = [0] * len(thetas)
        for i, a in enumerate(thetas):
            for j in range(i + 1, len(thetas)):
                if disjoint(a, thetas[j], weights):
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        return cls(list(thetas), [t.cost for t in thetas], adj)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _clique_exact(w: list[tuple[int, float]], adj: list[int]) -> tuple[tuple[int, ...], tuple[int, float]]:
    """Maximum-weight clique; ties go to the lexicographically smallest index tuple.

    Vertices are branched on in index order, so leaves are reached in
    lexicographic order and a later leaf of equal weight never replaces the
    current best. Pruning uses a greedy-colouring bound.
    """
    m = len(w)
    if m == 0:
        return (), (0, 0.0)
    best_w: list = [None]
    best_set: list = [()]

    def colour_bound(cand: int) -> tuple[int, float]:
        k, c = 0, 0.0
        uncol = cand
        while uncol:
            avail = uncol
            mk, mc = -1, -1.0
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~adj[v] & ~low
                uncol &= ~low
                wv = w[v]
                if wv[0] > mk or (wv[0] == mk and wv[1] > mc):
                    mk, mc = wv
            k += mk
            c += mc
        return k, c

    def expand(cur: list[int], ck: int, cc: float, cand: int):
        if not cand:
            if best_w[0] is None or (ck, cc) > best_w[0]:
                best_w[0] = (ck, cc)
                best_set[0] = tuple(cur)
            return
        while cand:
            if best_w[0] is not None:
                bk, bc = colour_bound(cand)
                if (ck + bk, cc + bc + _EPS) <= best_w[0]:
                    return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            cur.append(v)
            expand(cur, ck + w[v][0], cc + w[v][1], cand & adj[v] & ~((low << 1) - 1))
            cur.pop()

    expand([], 0, 0.0, (1 << m) - 1)
    return best_set[0], best_w[0]


def _clique_greedy(w: list[tuple[int, float]], adj: list[int]):
    chosen: list[int] = []
    allowed = (1 << len(w)) - 1
    for v in sorted(range(len(w)), key=lambda v: (-w[v][0], -w[v][1], v)):
        if allowed >> v & 1:
            chosen.append(v)
            allowed &= adj[v]
    k = sum(w[v][0] for v in chosen)
    c = sum(w[v][1] for v in chosen)
    return tuple(sorted(chosen)), (k, c)


def max_weight_clique(graph: DisjointnessGraph, mode: str = "exact") -> tuple[tuple[int, ...], ExtendedCost]:
    w = [(x.k, x.c) for x in graph.weights]
    fn = _clique_exact if mode == "exact" else _clique_greedy
    verts, (k, c) = fn(w, graph.adjacency)
    return verts, ExtendedCost(k, c)


@dataclass
class Estimate:
    cost: ExtendedCost
    witness: list[BoundingConstraint]
    manifested: int


def estimate_indices(registry: BoundingRegistry, idxs: Sequence[int], mode: str = "exact",
                     weight=None) -> tuple[ExtendedCost, list[int]]:
    """Max-weight disjoint subset of the registry entries ``idxs``.

    ``weight`` optionally remaps a constraint's cost (used to ignore soft
    components); it must return a positive cost.
    """
    if not idxs:
        return ZERO, []
    local = {g: i for i, g in enumerate(idxs)}
    adj = []
    for g in idxs:
        row = registry.adjacency[g]
        m = 0
        for h in idxs:
            if row >> h & 1:
                m |= 1 << local[h]
        adj.append(m)
    items = registry.items
    costs = [items[g].cost if weight is None else weight(items[g]) for g in idxs]
    w = [(x.k, x.c) for x in costs]
    fn = _clique_exact if mode == "exact" else _clique_greedy
    verts, (k, c) = fn(w, adj)
    return ExtendedCost(k, c), [idxs[v] for v in verts]


def estimate_cost(registry: BoundingRegistry, order: TotalOrder, mode: str = "exact") -> Estimate:
    idxs = registry.manifested_indices(order)
    cost, chosen = estimate_indices(registry, idxs, mode)
    return Estimate(cost, [registry.items[i] for i in chosen], len(idxs))
