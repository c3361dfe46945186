from __future__ import annotations

import pytest

from ordo import bench
from ordo.model import ExtendedCost, OrderingProblem, TotalOrder, ZERO
from ordo.netcfg import DomainEvaluator, GeneratorConfig
from ordo.oracle import CapacityError, all_costs, oracle_solve


def test_oracle_on_fixture(motivating_problem, evaluator):
    order, cost = oracle_solve(motivating_problem, evaluator.g)
    assert cost == ExtendedCost(0, 1)
    costs = all_costs(motivating_problem, evaluator.g)
    assert len(costs) == 120 and costs[TotalOrder.parse("23415")] == cost
    assert order == min(o for o, c in costs.items() if c == cost)


def test_oracle_trivial():
    problem = OrderingProblem(2)
    order, cost = oracle_solve(problem, DomainEvaluator(problem).g)
    assert order == TotalOrder.parse("12") and cost == ZERO


def test_oracle_refuses_large_problems():
    with pytest.raises(CapacityError):
        oracle_solve(OrderingProblem(9), lambda o: ZERO)


def test_bench_rows_and_csv():
    rows = bench.run_bench([GeneratorConfig(n_flows=3, seed=0)], timeout=5, trials=2)
    assert [(r.n_flows, r.mode) for r in rows] == [(3, "gcdo"), (3, "cdito")]
    assert all(r.trials == 2 and r.eta <= r.trials and 0 <= r.zeta <= 1 for r in rows)
    text = bench.to_csv(rows)
    assert text.splitlines()[0] == "scenario,mode,t1,gamma1_k,gamma1_c,gamma_k,gamma_c,eta,zeta"
    assert len(text.splitlines()) == 3
    assert "gcdo" in bench.format_table(rows)


def test_first_solutions_agree_per_trial():
    kept, _ = bench.collect_trials(GeneratorConfig(n_flows=3, seed=0), timeout=5, trials=3)
    for gcdo, cdito in kept:
        assert gcdo.seed == cdito.seed and gcdo.gamma1 == cdito.gamma1


def test_seed_override(monkeypatch):
    monkeypatch.setenv("ORDO_SEED", "42")
    assert bench.base_seed(0) == 42
    monkeypatch.delenv("ORDO_SEED")
    assert bench.base_seed(7) == 7


def test_parallel_workers_match_serial():
    sc = GeneratorConfig(n_flows=3, seed=5)
    serial, _ = bench.collect_trials(sc, timeout=5, trials=2)
    parallel, _ = bench.collect_trials(sc, timeout=5, trials=2, workers=2)
    key = lambda runs: [(r.seed, r.mode, r.gamma, r.g_calls) for rs in runs for r in rs]
    assert key(serial) == key(parallel)
