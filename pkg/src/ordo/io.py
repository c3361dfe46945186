"""JSON loading and saving for instances, compiled problems and results.

Infinite numbers are written as the strings ``"inf"`` / ``"-inf"`` so the
files stay strict JSON. Malformed input raises ``InputError`` whose message
starts with the path of the offending field.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .model import Constraint, ExtendedCost, OrderingProblem, ordering_constraint
from .netcfg import NetcfgInstance, compile


class InputError(ValueError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field


def _clean(x: Any) -> Any:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def dumps(obj: Any) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True)


def problem_to_dict(problem: OrderingProblem) -> dict:
    return {
        "n": problem.n,
        "ordering_constraints": [
            {"id": c.id, "disjuncts": [list(q) for q in c.disjuncts], "weight": c.weight.to_weight()}
            for c in problem.ordering_constraints
        ],
        "theory_constraints": [
            {"id": c.id, "kind": c.kind, "weight": c.weight.to_weight(), "payload": c.payload}
            for c in problem.theory_constraints
        ],
        "topology": problem.topology,
    }


def _field(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise InputError(path, "expected an object")
    if key not in d:
        raise InputError(f"{path}.{key}" if path else key, "missing")
    return d[key]


def problem_from_dict(d: dict) -> OrderingProblem:
    n = _field(d, "n", "")
    if not isinstance(n, int) or n < 1:
        raise InputError("n", f"expected a positive integer, got {n!r}")
    ordering, theory = [], []
    for i, c in enumerate(d.get("ordering_constraints", [])):
        path = f"ordering_constraints[{i}]"
        try:
            ordering.append(ordering_constraint(str(_field(c, "id", path)), _field(c, "disjuncts", path),
                                                c.get("weight", "inf")))
        except InputError:
            raise
        except (TypeError, ValueError) as exc:
            raise InputError(path, str(exc)) from exc
    for i, c in enumerate(d.get("theory_constraints", [])):
        path = f"theory_constraints[{i}]"
        try:
            theory.append(Constraint(str(_field(c, "id", path)), _field(c, "kind", path),
                                     ExtendedCost.from_weight(c.get("weight", "inf")), c.get("payload") or {}))
        except InputError:
            raise
        except (TypeError, ValueError) as exc:
            raise InputError(path, str(exc)) from exc
    try:
        return OrderingProblem(n, ordering, theory, d.get("topology"))
    except ValueError as exc:
        raise InputError("problem", str(exc)) from exc


def instance_from_dict(d: dict) -> NetcfgInstance:
    _field(d, "topology", "")
    for key in ("nodes", "links"):
        _field(d["topology"], key, "topology")
    for i, ln in enumerate(d["topology"]["links"]):
        for key in ("a", "b", "loss", "delay", "bandwidth"):
            _field(ln, key, f"topology.links[{i}]")
    for i, m in enumerate(_field(d, "missions", "")):
        for key in ("id", "source", "sink", "max_loss", "max_delay", "min_throughput",
                    "start_event", "end_event"):
            _field(m, key, f"missions[{i}]")
    for i, t in enumerate(d.get("temporal_requirements", [])):
        for key in ("id", "from", "to"):
            _field(t, key, f"temporal_requirements[{i}]")
    for i, p in enumerate(d.get("precedences", [])):
        for key in ("before", "after"):
            _field(p, key, f"precedences[{i}]")
    try:
        return NetcfgInstance.from_dict(d)
    except (TypeError, ValueError) as exc:
        raise InputError("instance", str(exc)) from exc


def load_json(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(str(path), "top level must be an object")
    return data


def load_problem(path: str | Path) -> tuple[OrderingProblem, NetcfgInstance | None]:
    """Load either a netcfg instance (has ``missions``) or a compiled problem."""
    data = load_json(path)
    if "missions" in data:
        inst = instance_from_dict(data)
        try:
            return compile(inst), inst
        except ValueError as exc:
            raise InputError("instance", str(exc)) from exc
    return problem_from_dict(data), None


def save_instance(inst: NetcfgInstance, path: str | Path):
    Path(path).write_text(dumps(inst.as_dict()) + "\n")
