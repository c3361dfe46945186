from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ordo.model import ExtendedCost, HARD, PartialOrder, TotalOrder
from ordo.network import (
    FlowMission, Link, NetworkTheory, Topology, candidate_paths, concurrent, extract_po_s,
    maximal_concurrent_sets,
)

from .oracles import drop_cost, routable, simple_paths


def test_fixture_routes(motivating):
    paths = {f.id: [p.nodes for p in candidate_paths(motivating.topology, f)] for f in motivating.missions}
    assert paths["A"] == [(1, 2)]
    assert paths["C"] == [(1, 2)]
    assert paths["B"] == paths["D"] == [(1, 2), (1, 3, 2)]


def test_fixture_drops(motivating):
    theory = NetworkTheory(motivating.topology, motivating.missions)
    assert not theory.feasible({"A", "C", "D"})
    # Two routes and three heavy flows: A, B, D cannot coexist either, which
    # is why all four together cost B plus C.
    assert not theory.feasible({"A", "B", "D"})
    assert theory.feasible({"A", "D"}) and theory.feasible({"B", "C"})
    assert theory.optimal_drop([{"A", "C", "D"}]).relaxed == {"C"}
    everything = theory.optimal_drop([{"A", "B", "C", "D"}])
    assert everything.relaxed == {"B", "C"} and everything.cost == ExtendedCost(0, 8)


def test_fixture_concurrency(motivating):
    sets = maximal_concurrent_sets(motivating.missions, TotalOrder.parse("23145"))
    assert set(sets) == {frozenset("BC"), frozenset("ACD")}
    acd = [f for f in motivating.missions if f.id in "ACD"]
    assert extract_po_s(acd) == {PartialOrder(1, 4), PartialOrder(2, 5)}


def test_inverted_flow_is_never_active(motivating):
    sets = maximal_concurrent_sets(motivating.missions, TotalOrder.parse("54321"))
    assert sets == []


def test_topology_validation():
    with pytest.raises(ValueError):
        Topology([1, 2], [Link(1, 3, 0.1, 0.1, 1)])
    with pytest.raises(ValueError):
        Topology([1, 2], [Link(1, 2, 0.1, 0.0, 1)])


def random_fixture(rng: random.Random, n_flows: int, n_nodes: int = 4):
    nodes = list(range(1, n_nodes + 1))
    links = [Link(a, b, rng.uniform(0.1, 0.3), rng.uniform(0.1, 0.3), rng.uniform(300, 900))
             for a, b in itertools.combinations(nodes, 2) if rng.random() < 0.8]
    topo = Topology(nodes, links)
    flows = []
    for k in range(n_flows):
        a, b = rng.sample(nodes, 2)
        w = HARD if rng.random() < 0.25 else ExtendedCost(0, float(rng.randint(1, 5)))
        flows.append(FlowMission(f"F{k}", a, b, rng.uniform(0.2, 0.7), rng.uniform(0.2, 0.7),
                                 rng.uniform(200, 600), w, 2 * k + 1, 2 * k + 2))
    return topo, flows


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_candidate_paths_match_enumeration(seed):
    topo, flows = random_fixture(random.Random(seed), 3)
    for f in flows:
        ours = {p.links for p in candidate_paths(topo, f)}
        ref = {p for p in simple_paths(topo, f.source, f.sink)
               if sum(topo.links[i].delay for i in p) <= f.max_delay + 1e-9
               and sum(topo.links[i].loss for i in p) <= f.max_loss + 1e-9}
        assert ours == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_feasibility_and_drop_match_brute_force(seed, k):
    topo, flows = random_fixture(random.Random(seed), k)
    theory = NetworkTheory(topo, flows)
    ids = [f.id for f in flows]
    assert theory.feasible(ids) == routable(topo, flows)
    assert theory.optimal_drop([ids]).cost == drop_cost(topo, flows, [set(ids)])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_global_drop_over_overlapping_sets(seed):
    rng = random.Random(seed)
    topo, flows = random_fixture(rng, 5)
    ids = [f.id for f in flows]
    sets = [set(rng.sample(ids, rng.randint(1, 5))) for _ in range(3)]
    got = NetworkTheory(topo, flows).optimal_drop(sets)
    assert got.cost == drop_cost(topo, flows, sets)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.permutations(range(1, 9)))
def test_concurrent_sets_are_maximal_cliques(seed, perm):
    _, flows = random_fixture(random.Random(seed), 4)
    order = TotalOrder(perm)
    sets = maximal_concurrent_sets(flows, order)
    by_id = {f.id: f for f in flows}
    for s in sets:
        assert all(concurrent(by_id[a], by_id[b], order) for a, b in itertools.combinations(s, 2))
    active = [f for f in flows if order.pos[f.start_event] < order.pos[f.end_event]]
    for a, b in itertools.combinations(active, 2):
        if concurrent(a, b, order):
            assert any({a.id, b.id} <= s for s in sets)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.permutations(range(1, 7)))
def test_state_bounds_force_concurrency(seed, perm):
    # Any order with every flow forward that manifests PO keeps the set concurrent.
    topo, flows = random_fixture(random.Random(seed), 3)
    theory = NetworkTheory(topo, flows)
    order = TotalOrder(perm)
    for theta in theory.extract(order):
        members = [theory.flows[i] for i in theta.constraint_set]
        for seq in itertools.permutations(range(1, 7)):
            other = TotalOrder(seq)
            forward = all(other.pos[f.start_event] < other.pos[f.end_event] for f in flows)
            if forward and theta.manifested_by(other):
                assert all(concurrent(a, b, other) for a, b in itertools.combinations(members, 2))
                assert theta.cost <= drop_cost(topo, flows, [set(theta.constraint_set)])
