"""Core value types: events, partial/total orders, constraints and k*inf + c costs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence


@dataclass(frozen=True, order=True)
class ExtendedCost:
    """A cost of the form ``k*inf + c``.

    ``k`` counts relaxed hard constraints and ``c`` sums relaxed soft weights.
    Comparison is lexicographic on ``(k, c)``, which the dataclass ordering
    gives us for free.
    """

    k: int = 0
    c: float = 0.0

    def __post_init__(self):
        if self.k < 0 or self.c < 0:
            raise ValueError(f"negative cost component: {self!r}")

    def __add__(self, other: ExtendedCost) -> ExtendedCost:
        return ExtendedCost(self.k + other.k, self.c + other.c)

    @property
    def finite(self) -> bool:
        return self.k == 0

    @property
    def hard(self) -> bool:
        return self.k > 0

    def as_dict(self) -> dict:
        return {"k": self.k, "c": self.c}

    @classmethod
    def from_weight(cls, w) -> ExtendedCost:
        """Parse a JSON weight: ``"inf"`` means hard, a positive number means soft."""
        if isinstance(w, str):
            if w.strip().lower() in ("inf", "infinity", "∞"):
                return HARD
            raise ValueError(f"bad weight {w!r}")
        if isinstance(w, dict):
            return cls(int(w["k"]), float(w["c"]))
        w = float(w)
        if math.isinf(w):
            return HARD
        if w <= 0:
            raise ValueError(f"weights must be positive, got {w}")
        return cls(0, w)

    def to_weight(self):
        if self.k == 1 and self.c == 0:
            return "inf"
        if self.k == 0:
            return self.c
        return self.as_dict()

    def __str__(self):
        if self.k == 0:
            return f"{self.c:g}"
        if self.c == 0:
            return "inf" if self.k == 1 else f"{self.k}inf"
        return f"{'' if self.k == 1 else self.k}inf+{self.c:g}"


ZERO = ExtendedCost(0, 0.0)
HARD = ExtendedCost(1, 0.0)


def cost_add(a: ExtendedCost, b: ExtendedCost) -> ExtendedCost:
    return a + b


def cost_less(a: ExtendedCost, b: ExtendedCost) -> bool:
    return a < b


def cost_sum(costs: Iterable[ExtendedCost]) -> ExtendedCost:
    k, c = 0, 0.0
    for x in costs:
        k += x.k
        c += x.c
    return ExtendedCost(k, c)


class PartialOrder(NamedTuple):
    """``before`` must precede ``after``."""

    before: int
    after: int

    def reverse(self) -> PartialOrder:
        return PartialOrder(self.after, self.before)

    def __str__(self):
        return f"({self.before}<{self.after})"


class TotalOrder:
    """An immutable permutation of events ``1..n``.

    Positions are 1-based everywhere outside this class; ``pos`` maps an event
    to its 1-based position so ``implies`` is a constant-time lookup.
    """

    __slots__ = ("seq", "pos", "level", "_hash")

    def __init__(self, seq: Sequence[int]):
        seq = tuple(seq)
        n = len(seq)
        pos = [0] * (n + 1)
        for idx, e in enumerate(seq, 1):
            if not 1 <= e <= n or pos[e]:
                raise ValueError(f"not a permutation of 1..{n}: {seq}")
            pos[e] = idx
        self.seq = seq
        self.pos = pos
        lvl = n
        for idx, e in enumerate(seq, 1):
            if e != idx:
                lvl = idx
                break
        self.level = lvl
        self._hash = hash(seq)

    @classmethod
    def root(cls, n: int) -> TotalOrder:
        return cls(range(1, n + 1))

    @classmethod
    def parse(cls, s: str) -> TotalOrder:
        """Parse ``"12435"`` (single digits) or ``"1 2 4 3 5"`` / ``"1,2,4"``."""
        s = s.strip()
        if any(ch in s for ch in " ,-"):
            parts = s.replace(",", " ").replace("-", " ").split()
            return cls(int(p) for p in parts)
        return cls(int(ch) for ch in s)

    @property
    def n(self) -> int:
        return len(self.seq)

    def implies(self, po: PartialOrder) -> bool:
        return self.pos[po.before] < self.pos[po.after]

    def __eq__(self, other):
        return isinstance(other, TotalOrder) and self.seq == other.seq

    def __hash__(self):
        return self._hash

    def __iter__(self):
        return iter(self.seq)

    def __len__(self):
        return len(self.seq)

    def __repr__(self):
        return f"TotalOrder({self})"

    def __str__(self):
        if self.n <= 9:
            return "".join(map(str, self.seq))
        return "-".join(map(str, self.seq))


def implies(order: TotalOrder, po: PartialOrder) -> bool:
    return order.implies(po)


ORDERING, STATE, TEMPORAL = "ordering", "state", "temporal"
KINDS = (ORDERING, STATE, TEMPORAL)


@dataclass(frozen=True)
class Constraint:
    """A relaxable constraint.

    For ``ordering`` constraints the payload is a tuple of ``PartialOrder``
    disjuncts. For theory constraints it is a plain dict owned by the
    sub-solver that interprets it.
    """

    id: str
    kind: str
    weight: ExtendedCost
    payload: Any = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        w = self.weight
        if not ((w.k == 1 and w.c == 0) or (w.k == 0 and w.c > 0)):
            raise ValueError(f"constraint {self.id}: weight must be inf or positive, got {w}")

    @property
    def hard(self) -> bool:
        return self.weight.k > 0

    @property
    def disjuncts(self) -> tuple[PartialOrder, ...]:
        if self.kind != ORDERING:
            raise TypeError(f"{self.id} is not an ordering constraint")
        return self.payload

    def satisfied_by(self, order: TotalOrder) -> bool:
        return any(order.implies(q) for q in self.disjuncts)


def ordering_constraint(cid: str, disjuncts, weight=HARD) -> Constraint:
    if not isinstance(weight, ExtendedCost):
        weight = ExtendedCost.from_weight(weight)
    ds = tuple(PartialOrder(*q) for q in disjuncts)
    return Constraint(cid, ORDERING, weight, ds)


@dataclass(frozen=True)
class Relaxation:
    relaxed: frozenset = frozenset()
    cost: ExtendedCost = ZERO

    def __or__(self, other: Relaxation) -> Relaxation:
        # Callers only merge relaxations over disjoint constraint sets.
        return Relaxation(self.relaxed | other.relaxed, self.cost + other.cost)


@dataclass
class OrderingProblem:
    n: int
    ordering_constraints: list[Constraint] = field(default_factory=list)
    theory_constraints: list[Constraint] = field(default_factory=list)
    # Shared substrate for state constraints (network topology as a dict).
    topology: dict | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a problem needs at least one event")
        seen = set()
        for con in self.constraints:
            if con.id in seen:
                raise ValueError(f"duplicate constraint id {con.id!r}")
            seen.add(con.id)
        for con in self.ordering_constraints:
            if con.kind != ORDERING:
                raise ValueError(f"{con.id} listed as ordering but has kind {con.kind}")
            for q in con.disjuncts:
                if not (1 <= q.before <= self.n and 1 <= q.after <= self.n):
                    raise ValueError(f"{con.id}: event out of range in {q}")
                if q.before == q.after:
                    raise ValueError(f"{con.id}: reflexive partial order {q}")
        for con in self.theory_constraints:
            if con.kind == ORDERING:
                raise ValueError(f"{con.id}: ordering constraint listed as theory")

    @property
    def constraints(self) -> list[Constraint]:
        return self.ordering_constraints + self.theory_constraints

    def weights(self) -> dict[str, ExtendedCost]:
        return {c.id: c.weight for c in self.constraints}

    def constraint(self, cid: str) -> Constraint:
        for c in self.constraints:
            if c.id == cid:
                return c
        raise KeyError(cid)


def relaxation_of(ids: Iterable[str], weights: dict[str, ExtendedCost]) -> Relaxation:
    ids = frozenset(ids)
    return Relaxation(ids, cost_sum(weights[i] for i in ids))
