"""Independent sets, matchings, edge covers, inertia bounds."""

import networkx as nx
import numpy as np
import pytest

from plap import families
from plap.combinatorics import (cvetkovic_bound, default_signature_pool,
                                full_signature_pool, inertia_report,
                                is_strict_support, max_independent_set,
                                max_matching, min_edge_cover)
from plap.graph import GraphError, validate
from plap.linalg import adjacency

from conftest import random_signed


def _to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((e.u, e.v) for e in g.edges)
    return h


def _brute_alpha(g):
    best = 0
    edges = [(e.u, e.v) for e in g.edges]
    for mask in range(1 << g.n):
        verts = [i for i in range(g.n) if (mask >> i) & 1]
        vs = set(verts)
        if all(not (u in vs and v in vs) for u, v in edges):
            best = max(best, len(verts))
    return best


def test_mis_examples():
    assert max_independent_set(families.complete(6)).size == 1
    assert max_independent_set(families.edgeless(7)).size == 7
    c5 = families.cycle(5)
    assert max_independent_set(c5).size == _brute_alpha(c5) == 2


@pytest.mark.parametrize("seed", range(10))
def test_mis_matches_brute_force(seed):
    g = random_signed(8, 0.45, seed)
    res = max_independent_set(g)
    assert res.exact
    assert res.size == _brute_alpha(g)
    vs = set(res.vertices)
    assert all(not (e.u in vs and e.v in vs) for e in g.edges)


def test_mis_greedy_fallback_flagged():
    g = families.cycle(12)
    res = max_independent_set(g, cap=10)
    assert not res.exact
    assert res.size <= 6
    vs = set(res.vertices)
    assert all(not (e.u in vs and e.v in vs) for e in g.edges)


def test_matching_examples():
    assert max_matching(families.complete(4)).size == 2
    assert max_matching(families.star(5)).size == 1
    assert max_matching(families.path(4)).size == 2


@pytest.mark.parametrize("seed", range(10))
def test_matching_matches_networkx(seed):
    g = random_signed(8, 0.4, seed)
    ours = max_matching(g)
    ref = nx.max_weight_matching(_to_nx(g), maxcardinality=True)
    assert ours.size == len(ref)
    seen = set()
    for u, v in ours.edges:
        assert u not in seen and v not in seen
        assert (u, v) in {(e.u, e.v) for e in g.edges}
        seen.update((u, v))


def test_matching_cap():
    with pytest.raises(GraphError):
        max_matching(families.cycle(40))


def test_edge_cover_examples():
    for m in (3, 5, 8):
        assert min_edge_cover(families.star(m)).size == m - 1
    assert min_edge_cover(families.complete(4)).size == 2
    assert min_edge_cover(families.path(4)).size == 2
    with pytest.raises(GraphError, match="isolated"):
        min_edge_cover(validate(3, [(0, 1)]))


@pytest.mark.parametrize("seed", range(10))
def test_edge_cover_gallai_and_networkx(seed):
    g = random_signed(7, 0.6, seed)
    if g.isolated_vertices():
        pytest.skip("isolated vertex; no cover")
    cover = min_edge_cover(g)
    assert cover.size == g.n - max_matching(g).size
    assert cover.size == len(nx.min_edge_cover(_to_nx(g)))
    assert cover.size >= (g.n + 1) // 2
    covered = {x for uv in cover.edges for x in uv}
    assert covered == set(range(g.n))


def test_alpha_le_beta_without_isolated_vertices():
    for seed in range(10):
        g = random_signed(7, 0.6, seed)
        if g.isolated_vertices():
            continue
        assert (max_independent_set(g).size
                <= min_edge_cover(g).size)


def test_cvetkovic_examples():
    k21 = families.star(3)
    assert cvetkovic_bound(k21, adjacency(k21)) == 2 == _brute_alpha(k21)
    empty = families.edgeless(4)
    assert cvetkovic_bound(empty, np.zeros((4, 4))) == 4
    k2 = families.complete(2)
    assert cvetkovic_bound(k2, adjacency(k2)) == 1


def test_cvetkovic_support_violations():
    p3 = families.path(3)
    bad = np.zeros((3, 3))
    bad[0, 2] = bad[2, 0] = 1.0     # not an edge of the path
    with pytest.raises(ValueError, match="support"):
        cvetkovic_bound(p3, bad)
    diag = np.eye(3)
    with pytest.raises(ValueError, match="diagonal"):
        cvetkovic_bound(p3, diag)


def test_strict_support_family():
    p3 = families.path(3)
    assert is_strict_support(p3, adjacency(p3))
    partial = adjacency(p3).copy()
    partial[0, 1] = partial[1, 0] = 0.0
    assert not is_strict_support(p3, partial)


def test_cvetkovic_dominates_alpha_on_random_graphs():
    for seed in range(10):
        g = random_signed(8, 0.5, seed)
        assert max_independent_set(g).size <= cvetkovic_bound(g, adjacency(g))


def test_signature_pools():
    g = families.path(4)
    pool = default_signature_pool(g, seed=0)
    assert len(pool) == 10 and pool[0] == (1, 1, 1) and pool[1] == (-1, -1, -1)
    assert default_signature_pool(g, seed=0) == pool     # deterministic
    assert len(full_signature_pool(g)) == 2 ** 3
    with pytest.raises(GraphError):
        full_signature_pool(families.complete(7))        # 21 edges > 16


def test_inertia_report_star():
    rep = inertia_report(families.star(5))
    assert rep.ok
    assert rep.alpha == 4 and rep.beta == 4
    assert rep.exact_ln_value == pytest.approx(1.0, abs=1e-12)
    # brackets collapse: L_1..L_4 = 0, L_5 = 1
    from plap.cutoff import bracket
    for k in range(1, 5):
        assert bracket(families.star(5), k).upper == 0.0
    assert bracket(families.star(5), 5).lower == pytest.approx(1.0, abs=1e-9)


def test_inertia_report_k5_and_edgeless():
    rep = inertia_report(families.complete(5))
    assert rep.ok and rep.alpha == 1
    assert all(proxy >= 1 for proxy in rep.zero_count_proxies)
    rep = inertia_report(families.edgeless(3))
    assert rep.ok and rep.alpha == 3 and rep.beta is None
    assert rep.exact_ln_value == 0.0


def test_inertia_report_full_pool_small_graph():
    g = families.path(3)
    rep = inertia_report(g, pool=full_signature_pool(g))
    assert rep.ok
    assert len(rep.zero_count_proxies) == 4
    assert all(p >= rep.alpha for p in rep.zero_count_proxies)


def test_failed_checks_carry_witness():
    # a deliberately wrong pool entry cannot be produced through the API, so
    # check the mechanism on a passing report: no witnesses attached
    rep = inertia_report(families.complete(4))
    assert all("witness" not in details for _, _, details in rep.checks)
