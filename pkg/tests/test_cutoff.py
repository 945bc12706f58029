"""Cutoff eigenvalue brackets: exact top values, bounds, interlacing, limits."""

import math

import numpy as np
import pytest

from plap import families, graph
from plap.cutoff import (bracket, exact_ln, interlacing_check, limit_scan,
                         lower_bound_full, lower_bound_subgraphs, r_q_infty,
                         upper_bound_from_p, upper_bound_subsets)
from plap.graph import GraphError, negate, switch, validate
from plap.linalg import adjacency
from plap.solver import solve_largest, solve_smallest

from conftest import random_connected_antibalanced, random_signed


def test_r_q_infty_examples():
    p3 = families.path(3)
    f = np.array([1.0, 0.0, -1.0])     # supported on an independent set
    assert r_q_infty(p3, 2.0, f) == 0.0
    k2 = families.complete(2)
    assert r_q_infty(k2, 2.0, np.array([1.0, -1.0])) == 0.5
    assert r_q_infty(k2, 2.0, np.array([1.0, 1.0])) == 0.0
    with pytest.raises(ValueError):
        r_q_infty(k2, 2.0, np.zeros(2))
    with pytest.raises(ValueError):
        r_q_infty(k2, 0.5, f[:2])


def test_r_2_infty_matches_negated_quadratic_form_when_cutoff_inactive(rng):
    # on an all-negative graph and a nonnegative function, no term is cut off
    for seed in range(5):
        g = negate(families.random_graph(6, 0.6, seed))
        f = np.abs(rng.standard_normal(6)) + 0.1
        quad = 0.5 * f @ (-adjacency(g)) @ f / np.sum(g.mu_array() * f ** 2)
        assert math.isclose(r_q_infty(g, 2.0, f), quad, rel_tol=1e-12)


def test_exact_ln_closed_forms():
    for n in range(2, 9):
        ref = n / 4 if n % 2 == 0 else math.sqrt(n * n - 1) / 4
        assert abs(exact_ln(families.complete(n)).lower - ref) < 1e-9
    assert abs(exact_ln(families.path(3)).lower - math.sqrt(2) / 2) < 1e-9
    assert exact_ln(families.edgeless(5)).lower == 0.0
    for n in (4, 6):
        assert abs(exact_ln(families.cycle(n)).lower - 1.0) < 1e-9


def test_exact_ln_certificate_reproduces_value():
    g = random_signed(7, 0.5, 3)
    ln = exact_ln(g)
    kind, signs = ln.lower_certificate
    assert kind == "sign-vector"
    s = np.asarray(signs, dtype=float)
    u, v, w, sig = g.edge_arrays()
    keep = sig * s[u] * s[v] < 0
    kept_edges = [(int(a), int(b)) for a, b, k in zip(u, v, keep) if k]
    sub = graph.spanning_subgraph(g, kept_edges)
    # the certified subgraph is antibalanced and its negated top eigenvalue
    # reproduces the exact value
    from plap.graph import classify_balance
    from plap.linalg import normalized_spectrum
    assert classify_balance(sub).antibalanced_witness is not None
    top = normalized_spectrum(negate(sub)).values[-1]
    assert abs(0.5 * top - ln.lower) < 1e-12


def test_exact_ln_switching_invariant(rng):
    for seed in range(6):
        g = random_signed(6, 0.5, seed)
        tau = tuple(int(x) for x in np.where(rng.random(6) < 0.5, 1, -1))
        assert math.isclose(exact_ln(g).lower, exact_ln(switch(g, tau)).lower,
                            rel_tol=0, abs_tol=1e-12)


def test_exact_ln_positive_iff_edges():
    assert exact_ln(families.edgeless(3)).lower == 0.0
    for seed in range(6):
        g = random_signed(6, 0.4, seed)
        assert (exact_ln(g).lower > 0) == (g.m > 0)


def test_exact_ln_weight_floor():
    rng = np.random.default_rng(0)
    for seed in range(6):
        base = families.random_graph(6, 0.8, seed)
        if base.isolated_vertices():
            continue
        w = 0.5 + rng.random(base.m)
        mu = 0.5 + rng.random(6)
        g = validate(6, [(e.u, e.v, wi, e.sigma) for e, wi in zip(base.edges, w)],
                     mu=mu)
        assert exact_ln(g).lower >= 0.5 * w.min() / mu.max() - 1e-12


def test_exact_ln_fallback_above_cap():
    g = families.random_graph(10, 0.3, seed=1)
    ln = exact_ln(g, cap=8)
    exact = exact_ln(g)
    assert not ln.exact
    assert ln.lower <= exact.lower + 1e-12 <= ln.upper + 1e-9
    assert ln.lower_certificate[0] == "sign-vector-sampled"


def test_lower_bound_full_examples():
    k3 = families.complete(3)
    assert abs(lower_bound_full(k3, 2) - 0.5) < 1e-12
    assert lower_bound_full(k3, 1) == 0.0      # clamped
    k3n = negate(k3)
    assert abs(lower_bound_full(k3n, 3) - 1.0) < 1e-12
    assert abs(exact_ln(k3n).lower - 1.0) < 1e-12   # antibalanced equality


def test_exact_ln_dominates_full_graph_bound():
    from plap.graph import classify_balance
    for seed in range(8):
        g = random_signed(6, 0.5, seed)
        ln = exact_ln(g).lower
        low = lower_bound_full(g, 6)
        assert ln >= low - 1e-12
        if classify_balance(g).antibalanced_witness is not None:
            assert abs(ln - low) < 1e-12


def test_lower_bound_subgraphs():
    val, cert = lower_bound_subgraphs(families.path(3), 2, budget=64)
    assert val == 0.0
    val, cert = lower_bound_subgraphs(families.complete(3), 2, budget=1024)
    assert abs(val - 0.5) < 1e-12
    for seed in range(4):
        g = random_signed(5, 0.6, seed)
        ln = exact_ln(g)
        val, cert = lower_bound_subgraphs(g, g.n, budget=1024)
        assert abs(val - ln.lower) < 1e-12   # k = n recovers the exact value


def test_upper_bound_subsets_examples():
    k3 = families.complete(3)
    val, cert = upper_bound_subsets(k3, 2)
    assert abs(val - 0.5) < 1e-12
    val, cert = upper_bound_subsets(families.complete(2), 2)
    assert abs(val - 0.5) < 1e-12
    # any k below the independence number gives 0
    p4 = families.path(4)
    for k in (1, 2):
        val, cert = upper_bound_subsets(p4, k)
        assert val == 0.0


def test_upper_bound_from_p():
    c4 = families.cycle(4)
    lam = solve_smallest(c4, 2.0).value
    assert upper_bound_from_p(c4, 1, 2.0, lam) == 0.0
    k3n = negate(families.complete(3))
    lam = solve_smallest(k3n, 8.0).value
    up = upper_bound_from_p(k3n, 1, 8.0, lam)
    assert 0.0 <= up == 2.0 ** -8 * lam
    with pytest.raises(ValueError):
        upper_bound_from_p(c4, 2, 2.0, lam)
    with pytest.raises(ValueError):
        upper_bound_from_p(validate(2, [(0, 1)], kappa=[1.0, 0.0]), 1, 2.0, 0.0)


TABLE_N3 = [
    (families.edgeless(3), (0.0, 0.0, 0.0)),
    (validate(3, [(0, 1)]), (0.0, 0.0, 0.5)),
    (families.path(3), (0.0, 0.0, math.sqrt(2) / 2)),
    (families.complete(3), (0.0, 0.5, math.sqrt(2) / 2)),
]


@pytest.mark.parametrize("g,expected", TABLE_N3)
def test_bracket_small_graph_table(g, expected):
    for k, ref in enumerate(expected, start=1):
        b = bracket(g, k)
        assert b.exact
        assert abs(b.lower - ref) <= 1e-9 and abs(b.upper - ref) <= 1e-9


def test_brackets_ignore_the_potential():
    g = random_signed(5, 0.6, 2)
    gk = validate(5, [tuple(e) for e in g.edges], mu=g.mu,
                  kappa=[3.0, -1.0, 0.5, 0.0, 2.0])
    for k in range(1, 6):
        a, b = bracket(g, k), bracket(gk, k)
        assert (a.lower, a.upper) == (b.lower, b.upper)
    assert exact_ln(g).lower == exact_ln(gk).lower


def test_bracket_vector_is_monotone_and_ordered():
    for seed in range(6):
        g = random_signed(6, 0.5, seed)
        brs = [bracket(g, k) for k in range(1, 7)]
        for b in brs:
            assert b.lower <= b.upper + 1e-9
        for a, b in zip(brs, brs[1:]):
            assert a.lower <= b.lower + 1e-12
            assert a.upper <= b.upper + 1e-9


def test_interlacing_examples():
    res = interlacing_check(families.complete(4), [3])
    assert res.ok
    ln_k3 = exact_ln(families.complete(3)).lower
    ln_k4 = exact_ln(families.complete(4)).lower
    assert ln_k3 <= ln_k4 and abs(ln_k3 - math.sqrt(2) / 2) < 1e-12
    # removing the middle of a path leaves two isolated vertices
    res = interlacing_check(families.path(3), [1])
    assert res.ok
    # removing all but one vertex
    res = interlacing_check(families.complete(4), [1, 2, 3])
    assert res.ok
    with pytest.raises(GraphError):
        interlacing_check(families.complete(3), [0, 1, 2])


def test_interlacing_random_single_removals():
    for seed in range(5):
        g = random_signed(6, 0.5, seed)
        full = exact_ln(g).lower
        for v in range(6):
            sub = graph.induced_subgraph(g, [i for i in range(6) if i != v])
            assert exact_ln(sub).lower <= full + 1e-9
            assert interlacing_check(g, [v]).ok


def test_perron_pairs_dominate_exact_ln():
    # 2^-p lambda_n(p) decreases to the exact top cutoff value
    for seed in range(4):
        g = random_connected_antibalanced(6, 0.5, seed)
        ln = exact_ln(g).lower
        for p in (2.0, 4.0, 8.0):
            pair = solve_largest(g, p)
            assert pair.certificate == "perron-certified"
            assert 2.0 ** -p * pair.value >= ln - 1e-8


def test_limit_scan_k2_negative_is_immediate():
    scan = limit_scan(negate(families.complete(2)), [2.0, 4.0, 8.0])
    assert all(d < 1e-12 for d in scan.distances)


def test_limit_scan_star_converges_to_perron():
    scan = limit_scan(negate(families.star(5)), [4.0, 8.0, 16.0, 32.0])
    assert all(b <= a + 1e-8 for a, b in zip(scan.distances, scan.distances[1:]))
    assert scan.distances[-1] < 0.05
    expected = np.array([2.0, 1.0, 1.0, 1.0, 1.0]) / math.sqrt(8.0)
    assert np.allclose(scan.perron, expected, atol=1e-12)
    assert np.allclose(scan.functions[-1], expected, atol=0.05)


def test_limit_scan_rejects_bad_inputs():
    with pytest.raises(GraphError):
        limit_scan(families.complete(3), [2.0])      # not antibalanced
    two = validate(4, [(0, 1, 1.0, -1), (2, 3, 1.0, -1)])
    with pytest.raises(GraphError):
        limit_scan(two, [2.0])                        # disconnected
