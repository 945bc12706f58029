"""Data-model invariants: validation, switching, balance classification."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plap import families, graph
from plap.graph import (GraphError, classify_balance, components,
                        induced_subgraph, negate, spanning_subgraph,
                        structural_constants, switch, validate)

from conftest import random_signed


def test_validate_defaults_k2():
    g = validate(2, [(0, 1)])
    assert g.edges == (graph.Edge(0, 1, 1.0, 1),)
    assert g.mu == (1.0, 1.0) and g.kappa == (0.0, 0.0)


def test_validate_rejects_self_loop():
    with pytest.raises(GraphError, match="self-loop"):
        validate(2, [(0, 0)])


def test_validate_rejects_nonpositive_weight():
    with pytest.raises(GraphError, match="weight"):
        validate(3, [(0, 1, -1.0)])


def test_validate_rejects_duplicates_and_bad_indices():
    with pytest.raises(GraphError, match="duplicate"):
        validate(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError, match="out of range"):
        validate(3, [(0, 5)])
    with pytest.raises(GraphError, match="measure"):
        validate(2, [(0, 1)], mu=[1.0, 0.0])


def test_switch_flips_k2():
    g = validate(2, [(0, 1)])
    assert switch(g, (1, -1)).edges[0].sigma == -1
    assert switch(g, (1, 1)) == g
    with pytest.raises(GraphError):
        switch(g, (1,))


def test_negate_examples():
    tri = families.complete(3)
    assert all(e.sigma == -1 for e in negate(tri).edges)
    assert negate(negate(tri)) == tri
    empty = families.edgeless(3)
    assert negate(empty) == empty


def test_induced_subgraph():
    k3 = families.complete(3)
    k2 = induced_subgraph(k3, [0, 2])
    assert k2.n == 2 and k2.edges == (graph.Edge(0, 1, 1.0, 1),)
    assert induced_subgraph(k3, range(3)).edges == k3.edges
    ends = induced_subgraph(families.path(3), [0, 2])
    assert ends.n == 2 and ends.m == 0
    with pytest.raises(GraphError):
        induced_subgraph(k3, [])


def test_spanning_subgraph():
    c4 = families.cycle(4)
    assert spanning_subgraph(c4, [(e.u, e.v) for e in c4.edges]) == c4
    assert spanning_subgraph(c4, []).m == 0
    matching = spanning_subgraph(c4, [(0, 1), (2, 3)])
    assert matching.n == 4 and matching.m == 2
    with pytest.raises(GraphError):
        spanning_subgraph(c4, [(0, 2)])


def test_components():
    assert components(families.complete(3)) == [[0, 1, 2]]
    assert components(families.edgeless(3)) == [[0], [1], [2]]
    two_k2 = validate(4, [(0, 1), (2, 3)])
    assert components(two_k2) == [[0, 1], [2, 3]]


def test_classify_balance_triangles():
    tri = families.complete(3)
    assert classify_balance(tri).kind == "balanced"
    assert classify_balance(negate(tri)).kind == "antibalanced"


def _exhaustive_balance(g):
    """Oracle: try every switching function."""
    bal = anti = False
    for signs in itertools.product((1, -1), repeat=g.n):
        switched = switch(g, signs)
        if all(e.sigma == 1 for e in switched.edges):
            bal = True
        if all(e.sigma == -1 for e in switched.edges):
            anti = True
    if bal and anti:
        return "both"
    return "balanced" if bal else ("antibalanced" if anti else "neither")


def test_unsigned_c4_is_both():
    assert classify_balance(families.cycle(4)).kind == "both"
    assert _exhaustive_balance(families.cycle(4)) == "both"


@pytest.mark.parametrize("seed", range(12))
def test_balance_matches_exhaustive_search(seed):
    g = random_signed(6, 0.5, seed)
    assert classify_balance(g).kind == _exhaustive_balance(g)


def test_positive_odd_cycles_block_antibalance():
    for g in (families.complete(3), families.cycle(5), families.cycle(7)):
        assert classify_balance(g).kind == "balanced"
        assert _exhaustive_balance(g) == "balanced"


def test_witnesses_certify():
    for seed in range(8):
        g = random_signed(7, 0.5, seed)
        cls = classify_balance(g)
        if cls.balanced_witness is not None:
            assert all(e.sigma == 1 for e in switch(g, cls.balanced_witness).edges)
        if cls.antibalanced_witness is not None:
            assert all(e.sigma == -1
                       for e in switch(g, cls.antibalanced_witness).edges)


def test_structural_constants_examples():
    assert structural_constants(validate(2, [(0, 1)])) == (0.5, 0.0)
    assert structural_constants(families.star(5)) == (2.0, 0.0)
    d, c = structural_constants(validate(2, [(0, 1)], kappa=[1.0, 0.0]))
    assert d == 1.5 and c == 1.0


@given(st.integers(0, 2 ** 12 - 1), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_switch_involution_and_invariants(tau_bits, seed):
    g = random_signed(6, 0.5, seed % 50)
    tau = tuple(1 - 2 * ((tau_bits >> i) & 1) for i in range(6))
    assert switch(switch(g, tau), tau) == g
    switched = switch(g, tau)
    assert sorted(e.w for e in switched.edges) == sorted(e.w for e in g.edges)
    assert structural_constants(switched) == structural_constants(g)
    assert classify_balance(switched).kind == classify_balance(g).kind


def test_json_round_trip_with_defaults():
    doc = '{"n": 3, "edges": [{"u": 1, "v": 0}, {"u": 1, "v": 2, "w": 2.5, "sigma": -1}]}'
    g = graph.loads(doc)
    assert g.edges == (graph.Edge(0, 1, 1.0, 1), graph.Edge(1, 2, 2.5, -1))
    assert g.mu == (1.0,) * 3 and g.kappa == (0.0,) * 3
    assert graph.loads(graph.dumps(g)) == g
