"""Independent brute-force references used by the tests.

Nothing here reuses the search code under test: consistency is checked with
Floyd-Warshall, routing by enumerating every path assignment, and cliques by
enumerating every vertex subset.
"""
from __future__ import annotations

import itertools
import math

from ordo.model import ExtendedCost, ZERO


def fw_consistent(n: int, constraints, order=None) -> bool:
    """STN consistency by Floyd-Warshall with the origin at 0."""
    V = n + 1
    d = [[0.0 if i == j else math.inf for j in range(V)] for i in range(V)]

    def edge(u, v, w):
        if w < d[u][v]:
            d[u][v] = w

    for e in range(1, V):
        edge(e, 0, 0.0)
    for tc in constraints:
        if tc.upper != math.inf:
            edge(tc.from_event, tc.to_event, tc.upper)
        if tc.lower != -math.inf:
            edge(tc.to_event, tc.from_event, -tc.lower)
    if order is not None:
        s = order.seq
        for a, b in zip(s, s[1:]):
            edge(b, a, 0.0)
    for k in range(V):
        for i in range(V):
            for j in range(V):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return all(d[i][i] >= -1e-9 for i in range(V))


def cheapest_subset(items, weight, ok):
    """Minimum-cost subset ``S`` of ``items`` with ``ok(S)``, by full enumeration."""
    best = None
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            if ok(set(combo)):
                cost = sum((weight(x) for x in combo), ZERO)
                if best is None or cost < best:
                    best = cost
    return best


def temporal_relaxation_cost(n, constraints, order) -> ExtendedCost:
    ids = [tc.id for tc in constraints]
    by_id = {tc.id: tc for tc in constraints}
    return cheapest_subset(ids, lambda c: by_id[c].weight,
                           lambda drop: fw_consistent(n, [tc for tc in constraints if tc.id not in drop], order))


def simple_paths(topology, src, dst):
    """Every simple path as a tuple of link indices, by permuting intermediate nodes."""
    link_of = {}
    for idx, ln in enumerate(topology.links):
        link_of.setdefault(frozenset((ln.a, ln.b)), []).append(idx)
    others = [v for v in topology.nodes if v not in (src, dst)]
    out = []
    for r in range(len(others) + 1):
        for mid in itertools.permutations(others, r):
            hops = [src, *mid, dst]
            choices = [link_of.get(frozenset(p), []) for p in zip(hops, hops[1:])]
            out.extend(itertools.product(*choices))
    return out


def routable(topology, flows) -> bool:
    options = []
    for f in flows:
        ps = [p for p in simple_paths(topology, f.source, f.sink)
              if sum(topology.links[i].delay for i in p) <= f.max_delay + 1e-9
              and sum(topology.links[i].loss for i in p) <= f.max_loss + 1e-9]
        options.append(ps)
    for combo in itertools.product(*options):
        load = [0.0] * len(topology.links)
        for f, p in zip(flows, combo):
            for i in p:
                load[i] += f.min_throughput
        if all(load[i] <= topology.links[i].bandwidth + 1e-9 for i in range(len(load))):
            return True
    return False


def drop_cost(topology, flows, sets) -> ExtendedCost:
    by_id = {f.id: f for f in flows}
    ids = sorted(set().union(*sets)) if sets else []
    memo = {}

    def feasible(s):
        key = frozenset(s)
        if key not in memo:
            memo[key] = routable(topology, [by_id[i] for i in sorted(key)])
        return memo[key]

    return cheapest_subset(ids, lambda i: by_id[i].drop_cost,
                           lambda drop: all(feasible(set(s) - drop) for s in sets))


def max_clique_weight(weights, edges) -> ExtendedCost:
    """Heaviest clique by scanning all ``2^m`` vertex subsets.

    A subset is a clique iff removing its lowest vertex leaves a clique that
    lies inside that vertex's neighbourhood; weights accumulate the same way.
    """
    m = len(weights)
    nbr = [0] * m
    for a, b in edges:
        nbr[a] |= 1 << b
        nbr[b] |= 1 << a
    is_clique = [True] + [False] * ((1 << m) - 1)
    weight = [ZERO] * (1 << m)
    best = ZERO
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        if is_clique[rest] and rest & ~nbr[low] == 0:
            is_clique[mask] = True
            weight[mask] = weight[rest] + weights[low]
            if weight[mask] > best:
                best = weight[mask]
    return best
