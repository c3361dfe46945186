"""Bounding constraints: partial orders + constraint set + a cost lower bound.

A total order *manifests* a bounding constraint when it implies all of its
partial orders; every such order must then pay at least ``cost`` for
relaxing the constraints in ``constraint_set``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol

from .model import Constraint, ExtendedCost, ORDERING, PartialOrder, Relaxation, TotalOrder


@dataclass(frozen=True)
class BoundingConstraint:
    partial_orders: frozenset[PartialOrder]
    constraint_set: frozenset[str]
    cost: ExtendedCost
    id: str = field(default="", compare=False)
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.partial_orders:
            raise ValueError("a bounding constraint needs at least one partial order")
        for q in self.partial_orders:
            if q.reverse() in self.partial_orders:
                raise ValueError(f"contradictory partial orders {q} and {q.reverse()}")
        if self.cost.k == 0 and self.cost.c <= 0:
            raise ValueError("a bounding constraint must carry a positive cost")

    @property
    def key(self) -> tuple[frozenset, frozenset]:
        return (self.partial_orders, self.constraint_set)

    def manifested_by(self, order: TotalOrder) -> bool:
        pos = order.pos
        return all(pos[a] < pos[b] for a, b in self.partial_orders)

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "partial_orders": sorted([list(q) for q in self.partial_orders]),
            "constraints": sorted(self.constraint_set),
            "cost": self.cost.as_dict(),
        }

    def __str__(self):
        pos = " & ".join(str(q) for q in sorted(self.partial_orders))
        return f"{self.id or 'theta'}[{pos} | {','.join(sorted(self.constraint_set))} | {self.cost}]"


def bounding(pos: Iterable, cs: Iterable[str], cost: ExtendedCost, id="", source="") -> BoundingConstraint:
    return BoundingConstraint(frozenset(PartialOrder(*q) for q in pos), frozenset(cs), cost, id, source)


def manifests(order: TotalOrder, theta: BoundingConstraint) -> bool:
    return theta.manifested_by(order)


def init_bc(ordering_constraints: Iterable[Constraint]) -> list[BoundingConstraint]:
    """One bounding constraint per ordering constraint.

    An ordering constraint ``q1 | q2 | ...`` is violated exactly when every
    disjunct is reversed, so the bounding constraint's partial orders are the
    reversed disjuncts.
    """
    out = []
    for con in ordering_constraints:
        if con.kind != ORDERING:
            raise ValueError(f"{con.id} is not an ordering constraint")
        ds = set(con.disjuncts)
        for q in ds:
            if q.reverse() in ds:
                raise ValueError(f"{con.id} contains {q} and {q.reverse()}; it can never be violated")
        out.append(bounding((q.reverse() for q in ds), [con.id], con.weight, id=con.id, source="ordering"))
    return out


class TheorySubSolver(Protocol):
    """What the solver needs from a theory: exact cost and conflict extraction."""

    def evaluate(self, order: TotalOrder) -> tuple[ExtendedCost, Relaxation]: ...

    def extract(self, order: TotalOrder) -> set[BoundingConstraint]: ...


def disjoint(a: BoundingConstraint, b: BoundingConstraint, weights: Mapping[str, ExtendedCost]) -> bool:
    """True iff the shared constraints of ``a`` and ``b`` are all hard."""
    return all(weights[cid].k > 0 for cid in a.constraint_set & b.constraint_set)


class BoundingRegistry:
    """Deduplicated, append-only set of bounding constraints.

    Keeps a bitset adjacency of the disjointness relation over registry
    indices so the estimator can build the induced graph of manifested
    constraints with a few integer ANDs.
    """

    def __init__(self, weights: Mapping[str, ExtendedCost], items: Iterable[BoundingConstraint] = ()):
        self.weights = weights
        self.items: list[BoundingConstraint] = []
        self.index: dict[tuple, int] = {}
        self.adjacency: list[int] = []
        self._pairs: list[tuple[tuple[int, int], ...]] = []
        self.ingest(items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, theta: BoundingConstraint):
        idx = self.index.get(theta.key)
        return idx is not None and self.items[idx].cost == theta.cost

    def _disjoint(self, a: BoundingConstraint, b: BoundingConstraint) -> bool:
        return disjoint(a, b, self.weights)

    def add(self, theta: BoundingConstraint) -> bool:
        """Insert ``theta``; returns True when the registry changed."""
        idx = self.index.get(theta.key)
        if idx is not None:
            old = self.items[idx]
            if theta.cost > old.cost:
                # Same partial orders and constraints: the larger bound is still valid.
                self.items[idx] = BoundingConstraint(old.partial_orders, old.constraint_set,
                                                     theta.cost, old.id, old.source)
                return True
            return False
        idx = len(self.items)
        if not theta.id:
            theta = BoundingConstraint(theta.partial_orders, theta.constraint_set, theta.cost,
                                       f"th{idx}", theta.source)
        mask = 0
        for other_idx, other in enumerate(self.items):
            if self._disjoint(theta, other):
                mask |= 1 << other_idx
                self.adjacency[other_idx] |= 1 << idx
        self.items.append(theta)
        self.adjacency.append(mask)
        self.index[theta.key] = idx
        self._pairs.append(tuple(theta.partial_orders))
        return True

    def ingest(self, extracted: Iterable[BoundingConstraint]) -> int:
        """Union with deduplication; returns how many entries were added or tightened."""
        changed = 0
        for theta in sorted(extracted, key=_canonical):
            changed += self.add(theta)
        return changed

    def manifested_indices(self, order: TotalOrder) -> list[int]:
        pos = order.pos
        out = []
        for idx, pairs in enumerate(self._pairs):
            for a, b in pairs:
                if pos[a] > pos[b]:
                    break
            else:
                out.append(idx)
        return out

    def manifested_subset(self, order: TotalOrder) -> list[BoundingConstraint]:
        return [self.items[i] for i in self.manifested_indices(order)]


def _canonical(theta: BoundingConstraint):
    return (sorted(theta.partial_orders), sorted(theta.constraint_set), theta.cost)


def ingest(registry: BoundingRegistry, extracted: Iterable[BoundingConstraint]) -> BoundingRegistry:
    registry.ingest(extracted)
    return registry


def manifested_subset(registry: BoundingRegistry, order: TotalOrder) -> list[BoundingConstraint]:
    return registry.manifested_subset(order)
