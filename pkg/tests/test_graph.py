import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmzi_fabric.graph import (
    MixedGraph,
    build_mixed_graph,
    candidate_routes,
    mixed_graph_gmzi_sizes,
    perfect_matchings,
    route_pair,
    schedule_matching,
    shallowest_schedule,
    validate,
)
from gmzi_fabric.planner import count_perfect_matchings
from oracles import brute_force_matchings

even_n = st.sampled_from(range(4, 21, 2))


@pytest.mark.parametrize("n,directed", [(4, 4), (6, 12), (8, 24)])
def test_edge_counts(n, directed):
    g = build_mixed_graph(n)
    assert len(g.undirected) == n // 2 and len(g.directed) == directed


def test_seed_graph():
    g = build_mixed_graph(4)
    assert g.undirected == {(0, 1), (2, 3)}
    assert g.directed == {(2, 0), (1, 2), (0, 3), (3, 1)}


@pytest.mark.parametrize("n", [3, 2, 7, 0])
def test_rejects_bad_sizes(n):
    with pytest.raises(ValueError):
        build_mixed_graph(n)


@given(even_n)
def test_construction_validates(n):
    assert validate(build_mixed_graph(n)).ok


@given(even_n, st.data())
def test_dropping_a_fiber_breaks_balance_at_its_ends(n, data):
    g = build_mixed_graph(n)
    edge = data.draw(st.sampled_from(sorted(g.directed)))
    rep = validate(g.without_directed(edge))
    assert set(rep.degree_failures) == set(edge)


def test_dropping_an_entangler_breaks_matching():
    g = build_mixed_graph(6)
    rep = validate(g.without_undirected((2, 3)))
    assert set(rep.matching_failures) == {2, 3} and not rep.ok


def test_adjacency_round_trip():
    g = build_mixed_graph(8)
    doc = g.to_adjacency()
    assert doc["adjacency"]["1"][0] == {"to": 2, "kind": "undirected"}
    assert MixedGraph.from_adjacency(doc) == g


def test_eight_vertex_devices_are_half_size():
    assert mixed_graph_gmzi_sizes(build_mixed_graph(8)) == [(4, 4)] * 8


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_every_pair_routes_within_three(n):
    g = build_mixed_graph(n)
    for a, b in itertools.combinations(range(n), 2):
        plan = route_pair(g, a, b)
        assert plan.traversals <= 3
        if g.partner(a) == b:
            assert plan.traversals == 2 and plan.path_a == (a,) and plan.path_b == (b,)
        assert {plan.path_a[-1], plan.path_b[-1]} == set(plan.entangler)


def test_route_through_an_entangler_vertex():
    g = build_mixed_graph(8)
    # 5 -> 1 is a fiber and 1 is entangled with 2.
    plan = route_pair(g, 4, 1)
    assert plan.traversals == 3 and plan.path_a == (4, 0) and plan.path_b == (1,)


def test_route_rejects_same_vertex():
    with pytest.raises(ValueError):
        candidate_routes(build_mixed_graph(4), 1, 1)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_matching_count(n):
    ms = list(perfect_matchings(range(n)))
    assert len(ms) == count_perfect_matchings(n) == brute_force_matchings(n)


def test_three_traversal_cap_blocks_cross_matchings_on_seed():
    g = build_mixed_graph(4)
    results = {m: schedule_matching(g, m, 3) is not None for m in perfect_matchings(range(4))}
    assert results == {((0, 1), (2, 3)): True, ((0, 2), (1, 3)): False, ((0, 3), (1, 2)): False}


@pytest.mark.parametrize("n", [4, 6, 8])
def test_every_matching_schedules_with_detours(n):
    g = build_mixed_graph(n)
    for m in perfect_matchings(range(n)):
        found = shallowest_schedule(g, m)
        assert found is not None
        cap, routes = found
        ents = [r.entangler for r in routes]
        assert len(set(ents)) == len(ents)
        fibers = [f for r in routes for f in r.fibers()]
        assert len(set(fibers)) == len(fibers)
