import numpy as np
import pytest

from plap import families, graph


def random_signed(n: int, prob: float, seed: int) -> graph.SignedGraph:
    return families.random_graph(n, prob, seed, signed=True)


def random_connected_antibalanced(n: int, prob: float, seed: int) -> graph.SignedGraph:
    """Connected graph whose signature is antibalanced by construction:
    sigma_uv = -tau_u tau_v for a random vertex labeling tau."""
    s = seed
    g = families.random_graph(n, prob, s)
    while len(graph.components(g)) > 1:
        s += 7919
        g = families.random_graph(n, prob, s)
    rng = np.random.default_rng(seed + 1)
    tau = np.where(rng.random(n) < 0.5, 1, -1)
    edges = [(e.u, e.v, e.w, int(-tau[e.u] * tau[e.v])) for e in g.edges]
    return graph.validate(n, edges)


def random_balanced(n: int, prob: float, seed: int) -> graph.SignedGraph:
    """Random graph with sigma_uv = tau_u tau_v (balanced by construction)."""
    g = families.random_graph(n, prob, seed)
    rng = np.random.default_rng(seed + 1)
    tau = np.where(rng.random(n) < 0.5, 1, -1)
    edges = [(e.u, e.v, e.w, int(tau[e.u] * tau[e.v])) for e in g.edges]
    return graph.validate(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
