"""Simple temporal networks under a total order.

Event ``0`` is the reference origin; every event happens at or after it.
A total order adds zero-weight precedence edges between consecutive events
(events may coincide in time). Relaxation drops whole constraints.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .bounds import BoundingConstraint, bounding
from .model import ExtendedCost, PartialOrder, Relaxation, TotalOrder, ZERO

ORIGIN = 0


@dataclass(frozen=True)
class TemporalConstraint:
    """``lower <= t(to_event) - t(from_event) <= upper``."""

    id: str
    from_event: int
    to_event: int
    lower: float = -math.inf
    upper: float = math.inf
    weight: ExtendedCost = field(default=ExtendedCost(1, 0.0))
    induced_by_order: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"{self.id}: lower {self.lower} > upper {self.upper}")
        if self.induced_by_order and (self.lower != 0 or self.upper != math.inf):
            raise ValueError("order-induced edges are [0, inf)")

    def as_dict(self) -> dict:
        return {"id": self.id, "from": self.from_event, "to": self.to_event,
                "lower": _num_out(self.lower), "upper": _num_out(self.upper),
                "weight": self.weight.to_weight()}

    @classmethod
    def from_dict(cls, d: dict) -> TemporalConstraint:
        return cls(str(d["id"]), int(d["from"]), int(d["to"]),
                   _num_in(d.get("lower", "-inf")), _num_in(d.get("upper", "inf")),
                   ExtendedCost.from_weight(d.get("weight", "inf")))


def _num_in(x) -> float:
    return float(x)


def _num_out(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


CONSTRAINT, INDUCED, STRUCTURAL = "c", "i", "s"


class Edge(NamedTuple):
    """Distance-graph edge ``u -> v`` meaning ``t(v) - t(u) <= w``."""

    u: int
    v: int
    w: float
    cid: str | None
    kind: str
    po: PartialOrder | None = None


@dataclass
class NegativeCycle:
    edges: list[Edge]
    total_weight: float

    @property
    def constraint_ids(self) -> frozenset[str]:
        return frozenset(e.cid for e in self.edges if e.kind == CONSTRAINT)


class Stn:
    def __init__(self, n: int, constraints: Iterable[TemporalConstraint] = (),
                 order: TotalOrder | None = None, partial_orders: Iterable[PartialOrder] = ()):
        self.n = n
        edges: list[Edge] = []
        for e in range(1, n + 1):
            edges.append(Edge(e, ORIGIN, 0.0, None, STRUCTURAL))
        for tc in constraints:
            if tc.upper != math.inf:
                edges.append(Edge(tc.from_event, tc.to_event, tc.upper, tc.id, CONSTRAINT))
            if tc.lower != -math.inf:
                edges.append(Edge(tc.to_event, tc.from_event, -tc.lower, tc.id, CONSTRAINT))
        pos_list = list(partial_orders)
        if order is not None:
            s = order.seq
            pos_list += [PartialOrder(s[k], s[k + 1]) for k in range(len(s) - 1)]
        for q in pos_list:
            edges.append(Edge(q.after, q.before, 0.0, None, INDUCED, PartialOrder(*q)))
        self.edges = edges

    @property
    def vertex_count(self) -> int:
        return self.n + 1


def check_consistency(stn: Stn) -> NegativeCycle | None:
    """Bellman-Ford from a virtual source; returns one negative cycle or ``None``."""
    V = stn.vertex_count
    edges = stn.edges
    dist = [0.0] * V
    pred: list[int] = [-1] * V
    last = -1
    for _ in range(V):
        last = -1
        for idx, (u, v, w, _, _, _) in enumerate(edges):
            nd = dist[u] + w
            if nd < dist[v] - 1e-9:
                dist[v] = nd
                pred[v] = idx
                last = v
        if last == -1:
            return None
    x = last
    for _ in range(V):
        x = edges[pred[x]].u
    cyc: list[Edge] = []
    y = x
    while True:
        e = edges[pred[y]]
        cyc.append(e)
        y = e.u
        if y == x:
            break
    cyc.reverse()
    return NegativeCycle(cyc, sum(e.w for e in cyc))


def extract_po_t(cycle: NegativeCycle, order: TotalOrder | None = None) -> frozenset[PartialOrder]:
    """Partial orders from the order-induced edges on a negative cycle.

    A run of consecutive induced edges only needs its two endpoints ordered,
    so each run collapses to a single precedence.
    """
    edges = cycle.edges
    k = next((i for i, e in enumerate(edges) if e.kind != INDUCED), None)
    if k is None:
        return frozenset()
    edges = edges[k:] + edges[:k]
    out = set()
    run_start = None
    for e in edges + [edges[0]]:
        if e.kind == INDUCED:
            if run_start is None:
                run_start = e.u
            run_end = e.v
        elif run_start is not None:
            # Walk b -> a means a precedes b; the run's tail precedes its head.
            if run_end != run_start:
                out.add(PartialOrder(run_end, run_start))
            run_start = None
    if order is not None:
        assert all(order.implies(q) for q in out)
    return frozenset(out)


def earliest_schedule(stn: Stn) -> list[float] | None:
    """Earliest time of every event (index 0 is the origin), or ``None`` if inconsistent.

    The earliest time of ``e`` is minus the shortest distance from ``e`` to
    the origin, computed by Bellman-Ford over the reversed graph.
    """
    V = stn.vertex_count
    dist = [math.inf] * V
    dist[ORIGIN] = 0.0
    for _ in range(V):
        changed = False
        for u, v, w, *_ in stn.edges:
            if dist[v] + w < dist[u] - 1e-9:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            return [0.0 if d == 0 else -d for d in dist]
    return None


class TemporalTheory:
    """Optimal binary relaxation of temporal constraints under a total order."""

    def __init__(self, n: int, constraints: Sequence[TemporalConstraint]):
        self.n = n
        self.constraints = list(constraints)
        self.by_id = {tc.id: tc for tc in self.constraints}
        if len(self.by_id) != len(self.constraints):
            raise ValueError("duplicate temporal constraint id")
        for tc in self.constraints:
            for e in (tc.from_event, tc.to_event):
                if not 0 <= e <= n:
                    raise ValueError(f"{tc.id}: event {e} outside 0..{n}")

    def _relax(self, constraints: Sequence[TemporalConstraint], order=None, partial_orders=()):
        weights = {tc.id: tc.weight for tc in constraints}
        start = frozenset()
        heap = [(0, 0.0, 0, (), start)]
        seen = {start}
        cycles: list[NegativeCycle] = []
        while heap:
            k, c, _, _, relaxed = heapq.heappop(heap)
            active = [tc for tc in constraints if tc.id not in relaxed]
            cyc = check_consistency(Stn(self.n, active, order, partial_orders))
            if cyc is None:
                return Relaxation(relaxed, ExtendedCost(k, c)), cycles
            cycles.append(cyc)
            for cid in sorted(cyc.constraint_ids):
                nxt = relaxed | {cid}
                if nxt in seen:
                    continue
                seen.add(nxt)
                w = weights[cid]
                heapq.heappush(heap, (k + w.k, c + w.c, len(nxt), tuple(sorted(nxt)), nxt))
        raise AssertionError("relaxing every constraint is always consistent")

    def optimal_relaxation(self, order: TotalOrder) -> Relaxation:
        return self._relax(self.constraints, order)[0]

    def evaluate(self, order: TotalOrder) -> tuple[ExtendedCost, Relaxation]:
        relax = self.optimal_relaxation(order)
        return relax.cost, relax

    def restricted_cost(self, cids: Iterable[str], partial_orders: Iterable[PartialOrder]) -> ExtendedCost:
        sub = [self.by_id[c] for c in sorted(cids)]
        return self._relax(sub, None, list(partial_orders))[0].cost

    def solve(self, order: TotalOrder) -> tuple[Relaxation, list[BoundingConstraint]]:
        relax, cycles = self._relax(self.constraints, order)
        out: dict[tuple, BoundingConstraint] = {}
        for cyc in cycles:
            po = extract_po_t(cyc, order)
            if not po:
                continue  # order-independent conflict
            cs = cyc.constraint_ids
            if (po, cs) in out:
                continue
            cost = self.restricted_cost(cs, po)
            if cost == ZERO:
                continue
            out[(po, cs)] = bounding(po, cs, cost, source="temporal")
        return relax, list(out.values())

    def extract(self, order: TotalOrder) -> set[BoundingConstraint]:
        return set(self.solve(order)[1])


def optimal_temporal_relaxation(constraints: Sequence[TemporalConstraint], order: TotalOrder) -> Relaxation:
    return TemporalTheory(order.n, constraints).optimal_relaxation(order)


def extract_temporal_bounds(constraints: Sequence[TemporalConstraint], order: TotalOrder) -> set[BoundingConstraint]:
    return TemporalTheory(order.n, constraints).extract(order)

