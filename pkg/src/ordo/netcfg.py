"""Temporal network configuration problems.

An instance is a topology, a list of flow missions (each with start and end
events and a duration window), precedence requirements and extra temporal
requirements. ``compile`` turns it into an ``OrderingProblem``; the
``DomainEvaluator`` built from that problem is the cost function ``g`` and
the bounding-constraint extractor ``f`` the solver consumes.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
import random
from dataclasses import dataclass, field

from .bounds import BoundingConstraint
from .model import (
    Constraint, ExtendedCost, HARD, ORDERING, OrderingProblem, PartialOrder, Relaxation, STATE,
    TEMPORAL, TotalOrder, ZERO, ordering_constraint,
)
from .network import FlowMission, Link, NetworkTheory, Topology
from .stn import ORIGIN, TemporalConstraint, TemporalTheory


@dataclass
class Precedence:
    before: int
    after: int
    weight: ExtendedCost = HARD
    id: str = ""


@dataclass
class NetcfgInstance:
    topology: Topology
    missions: list[FlowMission]
    temporal_requirements: list[TemporalConstraint] = field(default_factory=list)
    precedences: list[Precedence] = field(default_factory=list)
    horizon: float | None = None

    @property
    def n(self) -> int:
        return max(e for f in self.missions for e in (f.start_event, f.end_event))

    @property
    def event_merges(self) -> dict[int, list[str]]:
        """Which mission endpoints share each event, e.g. ``{1: ['A+', 'D+']}``."""
        out: dict[int, list[str]] = {}
        for f in self.missions:
            out.setdefault(f.start_event, []).append(f"{f.id}+")
            out.setdefault(f.end_event, []).append(f"{f.id}-")
        return dict(sorted(out.items()))

    def validate(self):
        if not self.missions:
            raise ValueError("instance has no missions")
        used = set()
        for f in self.missions:
            if f.start_event == f.end_event:
                raise ValueError(f"mission {f.id}: start and end merged into one event")
            used.update((f.start_event, f.end_event))
        n = self.n
        if used != set(range(1, n + 1)):
            raise ValueError(f"mission events must cover 1..{n} exactly, got {sorted(used)}")
        for f in self.missions:
            if f.source not in self.topology.adj or f.sink not in self.topology.adj:
                raise ValueError(f"mission {f.id}: unknown source or sink")
        for p in self.precedences:
            if not (1 <= p.before <= n and 1 <= p.after <= n) or p.before == p.after:
                raise ValueError(f"bad precedence {p.before}<{p.after}")
        for tc in self.temporal_requirements:
            if not (0 <= tc.from_event <= n and 0 <= tc.to_event <= n):
                raise ValueError(f"temporal requirement {tc.id} references an unknown event")

    def as_dict(self) -> dict:
        return {
            "topology": self.topology.as_dict(),
            "missions": [f.as_dict() for f in self.missions],
            "precedences": [{"id": p.id, "before": p.before, "after": p.after,
                             "weight": p.weight.to_weight()} for p in self.precedences],
            "temporal_requirements": [tc.as_dict() for tc in self.temporal_requirements],
            "horizon": self.horizon,
        }

    @classmethod
    def from_dict(cls, d: dict) -> NetcfgInstance:
        inst = cls(
            Topology.from_dict(d["topology"]),
            [FlowMission.from_dict(m) for m in d["missions"]],
            [TemporalConstraint.from_dict(t) for t in d.get("temporal_requirements", [])],
            [Precedence(int(p["before"]), int(p["after"]), ExtendedCost.from_weight(p.get("weight", "inf")),
                        str(p.get("id", ""))) for p in d.get("precedences", [])],
            d.get("horizon"),
        )
        inst.validate()
        return inst


def compile(instance: NetcfgInstance) -> OrderingProblem:
    """Encode the instance as ordering and theory constraints.

    Ordering: each flow's start before its end, then the precedence
    requirements. Theory: one duration window per distinct flow interval,
    the temporal requirements, optional horizon limits, and one state
    constraint per flow weighted by its drop cost.
    """
    instance.validate()
    n = instance.n
    ordering: list[Constraint] = []
    seen_pairs: set = set()
    for f in instance.missions:
        q = (f.start_event, f.end_event)
        if q not in seen_pairs:
            seen_pairs.add(q)
            ordering.append(ordering_constraint(f"o{len(ordering) + 1}", [q], HARD))
    for p in instance.precedences:
        ordering.append(ordering_constraint(p.id or f"o{len(ordering) + 1}", [(p.before, p.after)], p.weight))

    temporal: list[TemporalConstraint] = []
    seen_windows: set = set()
    for f in instance.missions:
        key = (f.start_event, f.end_event, f.min_duration, f.max_duration)
        if key in seen_windows:
            continue
        seen_windows.add(key)
        temporal.append(TemporalConstraint(f"t{len(temporal) + 1}", f.start_event, f.end_event,
                                           f.min_duration, f.max_duration, HARD))
    for tc in instance.temporal_requirements:
        temporal.append(dataclasses.replace(tc, id=tc.id or f"t{len(temporal) + 1}"))
    if instance.horizon is not None:
        for e in sorted({f.end_event for f in instance.missions}):
            temporal.append(TemporalConstraint(f"h{e}", ORIGIN, e, -math.inf, float(instance.horizon), HARD))

    theory: list[Constraint] = []
    for tc in temporal:
        payload = {"from": tc.from_event, "to": tc.to_event, "lower": tc.lower, "upper": tc.upper}
        theory.append(Constraint(tc.id, TEMPORAL, tc.weight, payload))
    for idx, f in enumerate(instance.missions, 1):
        payload = f.as_dict()
        payload["flow"] = payload.pop("id")
        theory.append(Constraint(f"s{idx}", STATE, f.drop_cost, payload))
    return OrderingProblem(n, ordering, theory, instance.topology.as_dict())


@dataclass
class Evaluation:
    cost: ExtendedCost
    relaxation: Relaxation
    bounds: list[BoundingConstraint]


class DomainEvaluator:
    """Exact cost ``g`` and extraction ``f`` for a compiled problem.

    The cost is the sum of three independent optimal relaxations: violated
    ordering constraints, dropped flows, and relaxed temporal constraints.
    """

    def __init__(self, problem: OrderingProblem):
        self.problem = problem
        self.weights = problem.weights()
        temporal, flows = [], []
        for con in problem.theory_constraints:
            p = con.payload
            if con.kind == TEMPORAL:
                temporal.append(TemporalConstraint(con.id, int(p["from"]), int(p["to"]),
                                                   float(p.get("lower", -math.inf)),
                                                   float(p.get("upper", math.inf)), con.weight))
            elif con.kind == STATE:
                flows.append(FlowMission(con.id, p["source"], p["sink"], float(p["max_loss"]),
                                         float(p["max_delay"]), float(p["min_throughput"]), con.weight,
                                         int(p["start_event"]), int(p["end_event"])))
        if flows and problem.topology is None:
            raise ValueError("state constraints need a topology")
        self.temporal = TemporalTheory(problem.n, temporal)
        self.network = NetworkTheory(Topology.from_dict(problem.topology), flows) if flows else None
        self._last: tuple[TotalOrder, Evaluation] | None = None

    def evaluate(self, order: TotalOrder) -> Evaluation:
        if self._last is not None and self._last[0] == order:
            return self._last[1]
        violated = [c.id for c in self.problem.ordering_constraints if not c.satisfied_by(order)]
        relax = Relaxation(frozenset(violated), sum((self.weights[c] for c in violated), ZERO))
        bounds: list[BoundingConstraint] = []
        if self.network is not None:
            r, b = self.network.solve(order)
            relax = relax | r
            bounds += b
        r, b = self.temporal.solve(order)
        relax = relax | r
        bounds += b
        ev = Evaluation(relax.cost, relax, bounds)
        self._last = (order, ev)
        return ev

    def g(self, order: TotalOrder) -> ExtendedCost:
        return self.evaluate(order).cost

    def f(self, order: TotalOrder) -> list[BoundingConstraint]:
        return self.evaluate(order).bounds


def evaluate_g(instance: NetcfgInstance, order: TotalOrder) -> tuple[ExtendedCost, Relaxation]:
    ev = DomainEvaluator(compile(instance)).evaluate(order)
    return ev.cost, ev.relaxation


def extract_f(instance: NetcfgInstance, order: TotalOrder) -> list[BoundingConstraint]:
    return DomainEvaluator(compile(instance)).f(order)


@dataclass
class GeneratorConfig:
    n_flows: int = 5
    seed: int = 0
    horizon: float = 300.0
    n_nodes: int = 6
    link_loss: tuple[float, float] = (0.1, 0.3)
    link_delay: tuple[float, float] = (0.1, 0.3)
    link_bandwidth: tuple[float, float] = (500.0, 1000.0)
    flow_loss: tuple[float, float] = (0.1, 0.3)
    flow_delay: tuple[float, float] = (0.1, 0.3)
    flow_throughput: tuple[float, float] = (600.0, 1000.0)
    flow_min_duration: tuple[float, float] = (20.0, 80.0)
    extra_temporal_max: float = 100.0
    must_transfer_fraction: float = 0.2
    optional_drop_cost: float = 1.0

    @property
    def extra_temporal_count(self) -> int:
        return self.n_flows // 5

    @property
    def hard_count(self) -> int:
        return int(self.n_flows * self.must_transfer_fraction)


def generate(config: GeneratorConfig) -> NetcfgInstance:
    """Seeded random instance on a complete graph (the densest mesh)."""
    rng = random.Random(config.seed)
    u = rng.uniform
    nodes = list(range(1, config.n_nodes + 1))
    links = [Link(a, b, u(*config.link_loss), u(*config.link_delay), u(*config.link_bandwidth))
             for a, b in itertools.combinations(nodes, 2)]
    topology = Topology(nodes, links)
    hard = set(rng.sample(range(config.n_flows), config.hard_count))
    missions = []
    for k in range(config.n_flows):
        src, dst = rng.sample(nodes, 2)
        missions.append(FlowMission(
            f"F{k + 1}", src, dst, u(*config.flow_loss), u(*config.flow_delay), u(*config.flow_throughput),
            HARD if k in hard else ExtendedCost(0, config.optional_drop_cost),
            2 * k + 1, 2 * k + 2, u(*config.flow_min_duration), math.inf))
    extra = []
    for k in range(config.extra_temporal_count):
        fa, fb = rng.sample(range(config.n_flows), 2)
        a = 2 * fa + 1 + rng.randrange(2)
        b = 2 * fb + 1 + rng.randrange(2)
        # (0, max]: reflect a draw from [0, max).
        d = config.extra_temporal_max - u(0.0, config.extra_temporal_max)
        extra.append(TemporalConstraint(f"x{k + 1}", a, b, 0.0, d, HARD))
    inst = NetcfgInstance(topology, missions, extra, [], config.horizon)
    inst.validate()
    return inst


def motivating_instance() -> NetcfgInstance:
    """Four flows A-D over a three-node network.

    Events: 1 starts A and D, 2 starts B and C, 3 ends B, 4 ends C, 5 ends A
    and D. Link statistics make 1-2 the only route for A (loss) and C
    (delay), and every link carries at most one flow at a time.
    """
    topology = Topology([1, 2, 3], [
        Link(1, 2, 0.2, 0.2, 500.0),
        Link(1, 3, 0.5, 0.3, 500.0),
        Link(3, 2, 0.5, 0.3, 500.0),
    ])
    window = dict(min_duration=30.0, max_duration=60.0)
    missions = [
        FlowMission("A", 1, 2, 0.5, 1.0, 200.0, HARD, 1, 5, **window),
        FlowMission("B", 1, 2, 3.0, 1.0, 360.0, ExtendedCost(0, 5.0), 2, 3, **window),
        FlowMission("C", 1, 2, 3.0, 0.3, 360.0, ExtendedCost(0, 3.0), 2, 4, **window),
        FlowMission("D", 1, 2, 3.0, 1.0, 360.0, HARD, 1, 5, **window),
    ]
    requirements = [
        # B and C end at least 20 s apart (B first, as in the optimal plan).
        TemporalConstraint("t4", 3, 4, 20.0, math.inf, HARD),
        # Prefer the whole mission to finish within 70 s.
        TemporalConstraint("t5", ORIGIN, 5, -math.inf, 70.0, ExtendedCost(0, 1.0)),
    ]
    # B and C finish before A and D end.
    precedences = [Precedence(3, 5, HARD, "o4"), Precedence(4, 5, HARD, "o5")]
    return NetcfgInstance(topology, missions, requirements, precedences, None)


def unroutable_hard_flows(instance: NetcfgInstance) -> list[str]:
    """Hard missions that cannot be routed even with the network to themselves.

    Any such mission makes every order infeasible, so benchmark trials can
    skip the instance without searching.
    """
    theory = NetworkTheory(instance.topology, instance.missions)
    return [f.id for f in instance.missions if f.drop_cost.hard and not theory.feasible([f.id])]
