"""Optimal total ordering with relaxable constraints by conflict-directed branch and bound."""
from __future__ import annotations

from .bounds import BoundingConstraint, BoundingRegistry, init_bc
from .model import ExtendedCost, HARD, ZERO, Constraint, OrderingProblem, PartialOrder, TotalOrder
from .netcfg import DomainEvaluator, GeneratorConfig, NetcfgInstance, compile, generate, motivating_instance
from .oracle import oracle_solve
from .solver import SolveConfig, SolveResult, SolveStats, solve, solve_cdito_baseline

__all__ = [
    "BoundingConstraint", "BoundingRegistry", "Constraint", "DomainEvaluator", "ExtendedCost",
    "GeneratorConfig", "HARD", "NetcfgInstance", "OrderingProblem", "PartialOrder", "SolveConfig",
    "SolveResult", "SolveStats", "TotalOrder", "ZERO", "compile", "generate", "init_bc",
    "motivating_instance", "oracle_solve", "solve", "solve_cdito_baseline",
]
__version__ = "0.1.0"
