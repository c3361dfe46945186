"""State constraints for network flows: routing, bandwidth, loss and delay.

Each flow takes one simple path whose summed delay and summed loss stay under
the flow's limits, and reserves exactly its minimum throughput on every link
of that path. A set of flows active at the same time is feasible when some
path assignment respects every link's bandwidth.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .bounds import BoundingConstraint, bounding
from .model import ExtendedCost, HARD, PartialOrder, Relaxation, TotalOrder, ZERO

TOL = 1e-9


@dataclass(frozen=True)
class Link:
    a: Hashable
    b: Hashable
    loss: float
    delay: float
    bandwidth: float


@dataclass
class Topology:
    nodes: list
    links: list[Link]

    def __post_init__(self):
        known = set(self.nodes)
        for ln in self.links:
            if ln.a not in known or ln.b not in known:
                raise ValueError(f"link {ln.a}-{ln.b} references an unknown node")
            if min(ln.loss, ln.delay, ln.bandwidth) <= 0:
                raise ValueError(f"link {ln.a}-{ln.b}: statistics must be positive")
        self.adj: dict = {v: [] for v in self.nodes}
        for idx, ln in enumerate(self.links):
            self.adj[ln.a].append((ln.b, idx))
            self.adj[ln.b].append((ln.a, idx))

    def as_dict(self) -> dict:
        return {"nodes": list(self.nodes),
                "links": [{"a": l.a, "b": l.b, "loss": l.loss, "delay": l.delay,
                           "bandwidth": l.bandwidth} for l in self.links]}

    @classmethod
    def from_dict(cls, d: dict) -> Topology:
        return cls(list(d["nodes"]),
                   [Link(l["a"], l["b"], float(l["loss"]), float(l["delay"]), float(l["bandwidth"]))
                    for l in d["links"]])


@dataclass(frozen=True)
class FlowMission:
    id: str
    source: Hashable
    sink: Hashable
    max_loss: float
    max_delay: float
    min_throughput: float
    drop_cost: ExtendedCost = HARD
    start_event: int = 0
    end_event: int = 0
    min_duration: float = 0.0
    max_duration: float = math.inf

    def __post_init__(self):
        if self.start_event == self.end_event:
            raise ValueError(f"flow {self.id}: start and end must be distinct events")

    def as_dict(self) -> dict:
        return {"id": self.id, "source": self.source, "sink": self.sink,
                "max_loss": self.max_loss, "max_delay": self.max_delay,
                "min_throughput": self.min_throughput, "drop_cost": self.drop_cost.to_weight(),
                "start_event": self.start_event, "end_event": self.end_event,
                "min_duration": self.min_duration,
                "max_duration": "inf" if math.isinf(self.max_duration) else self.max_duration}

    @classmethod
    def from_dict(cls, d: dict) -> FlowMission:
        return cls(str(d["id"]), d["source"], d["sink"], float(d["max_loss"]), float(d["max_delay"]),
                   float(d["min_throughput"]), ExtendedCost.from_weight(d.get("drop_cost", "inf")),
                   int(d["start_event"]), int(d["end_event"]),
                   float(d.get("min_duration", 0.0)), float(d.get("max_duration", "inf")))


@dataclass(frozen=True)
class Path:
    nodes: tuple
    links: tuple[int, ...]

    @property
    def hops(self) -> int:
        return len(self.links)


def candidate_paths(topology: Topology, flow: FlowMission) -> list[Path]:
    """Simple paths source -> sink meeting the flow's delay and loss limits."""
    found: list[Path] = []
    if flow.source == flow.sink:
        return found

    def dfs(node, nodes, links, delay, loss):
        if node == flow.sink:
            found.append(Path(tuple(nodes), tuple(links)))
            return
        for nxt, idx in topology.adj[node]:
            if nxt in nodes:
                continue
            ln = topology.links[idx]
            d, l = delay + ln.delay, loss + ln.loss
            if d > flow.max_delay + TOL or l > flow.max_loss + TOL:
                continue
            nodes.append(nxt)
            links.append(idx)
            dfs(nxt, nodes, links, d, l)
            nodes.pop()
            links.pop()

    dfs(flow.source, [flow.source], [], 0.0, 0.0)
    found.sort(key=lambda p: (p.hops, p.nodes))
    return found


class NetworkTheory:
    """Exact feasibility and minimum-cost flow dropping, with memo tables."""

    def __init__(self, topology: Topology, flows: Sequence[FlowMission]):
        self.topology = topology
        self.flows = {f.id: f for f in flows}
        if len(self.flows) != len(flows):
            raise ValueError("duplicate flow id")
        self.paths = {f.id: candidate_paths(topology, f) for f in flows}
        self._feasible: dict[frozenset, bool] = {}
        self._drop: dict[tuple, Relaxation] = {}

    def feasible(self, ids: Iterable[str]) -> bool:
        ids = frozenset(ids)
        hit = self._feasible.get(ids)
        if hit is None:
            hit = self._search(ids)
            self._feasible[ids] = hit
        return hit

    def _search(self, ids: frozenset) -> bool:
        if not ids:
            return True
        if len(ids) > 1:
            # Infeasible subsets make every superset infeasible.
            for fid in ids:
                known = self._feasible.get(ids - {fid})
                if known is False:
                    return False
        order = sorted(ids, key=lambda f: (len(self.paths[f]), f))
        if not self.paths[order[0]]:
            return False
        residual = [ln.bandwidth for ln in self.topology.links]

        def assign(k: int) -> bool:
            if k == len(order):
                return True
            flow = self.flows[order[k]]
            need = flow.min_throughput
            for path in self.paths[flow.id]:
                if all(residual[i] + TOL >= need for i in path.links):
                    for i in path.links:
                        residual[i] -= need
                    ok = assign(k + 1)
                    for i in path.links:
                        residual[i] += need
                    if ok:
                        return True
            return False

        return assign(0)

    def optimal_drop(self, sets: Sequence[Iterable[str]]) -> Relaxation:
        """Cheapest set of flows to drop so that every given set becomes feasible.

        Best-first over drop sets keyed by (cost, size, sorted ids); each
        expansion branches on the flows of the first still-infeasible set,
        so the first feasible pop is optimal under that key.
        """
        sets = [frozenset(s) for s in sets]
        key = tuple(sorted(sets, key=lambda s: sorted(s)))
        hit = self._drop.get(key)
        if hit is not None:
            return hit
        start = frozenset()
        heap = [(0, 0.0, 0, (), start)]
        seen = {start}
        while heap:
            k, c, _, _, dropped = heapq.heappop(heap)
            bad = next((s - dropped for s in sets if not self.feasible(s - dropped)), None)
            if bad is None:
                res = Relaxation(dropped, ExtendedCost(k, c))
                self._drop[key] = res
                return res
            for fid in sorted(bad):
                nxt = dropped | {fid}
                if nxt in seen:
                    continue
                seen.add(nxt)
                w = self.flows[fid].drop_cost
                heapq.heappush(heap, (k + w.k, c + w.c, len(nxt), tuple(sorted(nxt)), nxt))
        raise AssertionError("dropping every flow is always feasible")

    def concurrent_sets(self, order: TotalOrder) -> list[frozenset[str]]:
        return maximal_concurrent_sets(self.flows.values(), order)

    def solve(self, order: TotalOrder) -> tuple[Relaxation, list[BoundingConstraint]]:
        sets = self.concurrent_sets(order)
        relax = self.optimal_drop(sets)
        bounds = []
        for s in sets:
            if self.feasible(s):
                continue
            po = extract_po_s([self.flows[f] for f in s])
            if not po:
                continue  # a lone unroutable flow is order-independent
            cost = self.optimal_drop([s]).cost
            bounds.append(bounding(po, s, cost, source="state"))
        return relax, bounds

    def evaluate(self, order: TotalOrder) -> tuple[ExtendedCost, Relaxation]:
        relax = self.solve(order)[0]
        return relax.cost, relax

    def extract(self, order: TotalOrder) -> set[BoundingConstraint]:
        return set(self.solve(order)[1])


def maximal_concurrent_sets(flows: Iterable[FlowMission], order: TotalOrder) -> list[frozenset[str]]:
    """Left-to-right sweep; flows whose end precedes their start are never active."""
    pos = order.pos
    starts: dict[int, list[str]] = {}
    ends: dict[int, list[str]] = {}
    for f in flows:
        if pos[f.start_event] < pos[f.end_event]:
            starts.setdefault(f.start_event, []).append(f.id)
            ends.setdefault(f.end_event, []).append(f.id)
    active: set[str] = set()
    snapshots: list[frozenset[str]] = []
    for e in order.seq:
        for fid in ends.get(e, ()):
            active.discard(fid)
        if e in starts:
            active.update(starts[e])
            snapshots.append(frozenset(active))
    uniq = list(dict.fromkeys(snapshots))
    return [s for s in uniq if not any(s < t for t in uniq)]


def concurrent(a: FlowMission, b: FlowMission, order: TotalOrder) -> bool:
    return order.implies(PartialOrder(a.start_event, b.end_event)) and \
        order.implies(PartialOrder(b.start_event, a.end_event))


def extract_po_s(flows: Sequence[FlowMission], order: TotalOrder | None = None) -> frozenset[PartialOrder]:
    """Pairwise ``start_i < end_j`` orders that pin the flows together in time.

    Orders that coincide with some flow's own ``start < end`` are dropped: that
    precedence is already a hard ordering constraint.
    """
    own = {(f.start_event, f.end_event) for f in flows}
    out = set()
    for a in flows:
        for b in flows:
            if a is b:
                continue
            q = (a.start_event, b.end_event)
            if q[0] != q[1] and q not in own:
                out.add(PartialOrder(*q))
    if order is not None:
        assert all(order.implies(q) for q in out)
    return frozenset(out)


def feasible(topology: Topology, flows: Sequence[FlowMission]) -> bool:
    return NetworkTheory(topology, flows).feasible(f.id for f in flows)


def optimal_drop(topology: Topology, flows: Sequence[FlowMission]) -> Relaxation:
    return NetworkTheory(topology, flows).optimal_drop([[f.id for f in flows]])


def extract_state_bounds(topology: Topology, flows: Sequence[FlowMission], order: TotalOrder) -> set[BoundingConstraint]:
    return NetworkTheory(topology, flows).extract(order)
