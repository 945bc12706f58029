"""Immutable signed-graph data model.

A signed graph carries, besides the usual vertex/edge structure, an edge
signature sigma in {+1,-1}, positive edge weights w, a positive vertex
measure mu and a real vertex potential kappa.  All operations here are pure;
instances are safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np


class GraphError(ValueError):
    """A graph description violates a structural invariant."""


class Edge(NamedTuple):
    u: int
    v: int
    w: float
    sigma: int


@dataclass(frozen=True)
class SignedGraph:
    """Signed graph with measure and potential.

    Edges are stored with u < v, sorted lexicographically, so iteration order
    (and everything derived from it) is deterministic.
    """

    n: int
    edges: tuple[Edge, ...]
    mu: tuple[float, ...]
    kappa: tuple[float, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    def mu_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    def kappa_array(self) -> np.ndarray:
        return np.asarray(self.kappa, dtype=float)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(u, v, w, sigma) as flat arrays; empty arrays for edgeless graphs."""
        if not self.edges:
            z = np.zeros(0, dtype=int)
            return z, z, np.zeros(0), np.zeros(0)
        u, v, w, s = zip(*self.edges)
        return (np.asarray(u, dtype=int), np.asarray(v, dtype=int),
                np.asarray(w, dtype=float), np.asarray(s, dtype=float))

    def neighbors(self, i: int) -> list[int]:
        out = [e.v for e in self.edges if e.u == i]
        out += [e.u for e in self.edges if e.v == i]
        return sorted(out)

    def weighted_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n)
        for e in self.edges:
            deg[e.u] += e.w
            deg[e.v] += e.w
        return deg

    def isolated_vertices(self) -> list[int]:
        seen = set()
        for e in self.edges:
            seen.add(e.u)
            seen.add(e.v)
        return [i for i in range(self.n) if i not in seen]


def validate(n: int,
             edges: Iterable[Sequence],
             mu: Optional[Sequence[float]] = None,
             kappa: Optional[Sequence[float]] = None) -> SignedGraph:
    """Build a SignedGraph from a raw description, checking every invariant.

    Each raw edge is (u, v), (u, v, w) or (u, v, w, sigma); omitted weights
    default to 1, omitted signs to +1.  mu defaults to all ones, kappa to all
    zeros.  Violations raise GraphError naming the offending edge or vertex.
    """
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"vertex count must be a positive integer, got {n!r}")
    canon = []
    seen: set[tuple[int, int]] = set()
    for pos, raw in enumerate(edges):
        item = tuple(raw)
        if len(item) < 2 or len(item) > 4:
            raise GraphError(f"edge #{pos}: expected (u, v[, w[, sigma]]), got {raw!r}")
        u, v = int(item[0]), int(item[1])
        w = float(item[2]) if len(item) >= 3 else 1.0
        sigma = int(item[3]) if len(item) >= 4 else 1
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge #{pos} ({u},{v}): vertex index out of range [0,{n})")
        if u == v:
            raise GraphError(f"edge #{pos}: self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise GraphError(f"edge #{pos}: duplicate edge ({u},{v})")
        if not (w > 0):
            raise GraphError(f"edge #{pos} ({u},{v}): weight must be positive, got {w}")
        if sigma not in (1, -1):
            raise GraphError(f"edge #{pos} ({u},{v}): sigma must be +1 or -1, got {sigma}")
        seen.add((u, v))
        canon.append(Edge(u, v, w, sigma))
    canon.sort(key=lambda e: (e.u, e.v))

    mu_t = tuple(float(x) for x in mu) if mu is not None else (1.0,) * n
    kappa_t = tuple(float(x) for x in kappa) if kappa is not None else (0.0,) * n
    if len(mu_t) != n:
        raise GraphError(f"mu has length {len(mu_t)}, expected {n}")
    if len(kappa_t) != n:
        raise GraphError(f"kappa has length {len(kappa_t)}, expected {n}")
    for i, m in enumerate(mu_t):
        if not (m > 0):
            raise GraphError(f"vertex {i}: measure must be positive, got {m}")
    return SignedGraph(n=n, edges=tuple(canon), mu=mu_t, kappa=kappa_t)


def _check_tau(g: SignedGraph, tau: Sequence[int]) -> np.ndarray:
    t = np.asarray(tau, dtype=int)
    if t.shape != (g.n,):
        raise GraphError(f"switching function has length {t.size}, expected {g.n}")
    if not np.all(np.abs(t) == 1):
        raise GraphError("switching function entries must be +1 or -1")
    return t


def switch(g: SignedGraph, tau: Sequence[int]) -> SignedGraph:
    """Switch the signature: sigma_uv -> tau(u)*sigma_uv*tau(v)."""
    t = _check_tau(g, tau)
    edges = tuple(Edge(e.u, e.v, e.w, int(t[e.u]) * e.sigma * int(t[e.v]))
                  for e in g.edges)
    return SignedGraph(g.n, edges, g.mu, g.kappa)


def negate(g: SignedGraph) -> SignedGraph:
    """Flip every edge sign; the adjacency matrix of the result is -A."""
    edges = tuple(Edge(e.u, e.v, e.w, -e.sigma) for e in g.edges)
    return SignedGraph(g.n, edges, g.mu, g.kappa)


def with_zero_kappa(g: SignedGraph) -> SignedGraph:
    return SignedGraph(g.n, g.edges, g.mu, (0.0,) * g.n)


def induced_subgraph(g: SignedGraph, keep: Iterable[int]) -> SignedGraph:
    """Restrict to a vertex subset, reindexing vertices in ascending order."""
    kept = sorted(set(int(i) for i in keep))
    if not kept:
        raise GraphError("induced subgraph needs a nonempty vertex subset")
    for i in kept:
        if not (0 <= i < g.n):
            raise GraphError(f"vertex index {i} out of range [0,{g.n})")
    index = {old: new for new, old in enumerate(kept)}
    edges = tuple(Edge(index[e.u], index[e.v], e.w, e.sigma)
                  for e in g.edges if e.u in index and e.v in index)
    mu = tuple(g.mu[i] for i in kept)
    kappa = tuple(g.kappa[i] for i in kept)
    return SignedGraph(len(kept), edges, mu, kappa)


def spanning_subgraph(g: SignedGraph, keep_edges: Iterable[tuple[int, int]]) -> SignedGraph:
    """Keep the full vertex set but only the listed edges (as (u,v) pairs)."""
    want = set()
    have = {(e.u, e.v) for e in g.edges}
    for u, v in keep_edges:
        u, v = int(u), int(v)
        if u > v:
            u, v = v, u
        if (u, v) not in have:
            raise GraphError(f"({u},{v}) is not an edge of the graph")
        want.add((u, v))
    edges = tuple(e for e in g.edges if (e.u, e.v) in want)
    return SignedGraph(g.n, edges, g.mu, g.kappa)


def components(g: SignedGraph) -> list[list[int]]:
    """Connected components by edge reachability, smallest vertex first."""
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for e in g.edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen = [False] * g.n
    out = []
    for root in range(g.n):
        if seen[root]:
            continue
        comp = []
        stack = [root]
        seen[root] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in adj[i]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        out.append(sorted(comp))
    return out


def is_connected(g: SignedGraph) -> bool:
    return len(components(g)) == 1


@dataclass(frozen=True)
class BalanceClass:
    """Balance classification with switching witnesses.

    kind is one of "balanced", "antibalanced", "both", "neither".  A witness
    tau satisfies sigma^tau == +1 everywhere (balanced) resp. == -1 everywhere
    (antibalanced); re-switching with it certifies the claim.
    """

    kind: str
    balanced_witness: Optional[tuple[int, ...]]
    antibalanced_witness: Optional[tuple[int, ...]]


def _balancing_tau(g: SignedGraph) -> Optional[tuple[int, ...]]:
    # BFS sign propagation per component: tau(v) = sigma_uv * tau(u) forces
    # sigma^tau = +1 along tree edges; any inconsistent non-tree edge refutes.
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e in g.edges:
        adj[e.u].append((e.v, e.sigma))
        adj[e.v].append((e.u, e.sigma))
    tau = [0] * g.n
    for root in range(g.n):
        if tau[root] != 0:
            continue
        tau[root] = 1
        stack = [root]
        while stack:
            i = stack.pop()
            for j, s in adj[i]:
                if tau[j] == 0:
                    tau[j] = s * tau[i]
                    stack.append(j)
                elif tau[j] != s * tau[i]:
                    return None
    return tuple(tau)


def classify_balance(g: SignedGraph) -> BalanceClass:
    """Decide balance and antibalance, with switching witnesses.

    Balanced means some tau switches every sign to +1; antibalanced means the
    negated graph is balanced.  Decided in O(n+m) by BFS sign propagation.
    """
    bal = _balancing_tau(g)
    anti = _balancing_tau(negate(g))
    if bal is not None and anti is not None:
        kind = "both"
    elif bal is not None:
        kind = "balanced"
    elif anti is not None:
        kind = "antibalanced"
    else:
        kind = "neither"
    return BalanceClass(kind=kind, balanced_witness=bal, antibalanced_witness=anti)


def structural_constants(g: SignedGraph) -> tuple[float, float]:
    """(D, C) with D = max_i (2*kappa_i + sum_{j~i} w_ij) / (2*mu_i) and
    C = max_i |kappa_i / mu_i|."""
    deg = g.weighted_degrees()
    mu = g.mu_array()
    kap = g.kappa_array()
    d = float(np.max((2.0 * kap + deg) / (2.0 * mu)))
    c = float(np.max(np.abs(kap / mu)))
    return d, c


# --- graph JSON (external contract) ---------------------------------------
#
# {"n": int,
#  "edges": [{"u": int, "v": int, "w": number (default 1),
#             "sigma": 1|-1 (default 1)}],
#  "mu": [number]*n (default all 1),
#  "kappa": [number]*n (default all 0)}

def from_json_dict(doc: dict) -> SignedGraph:
    if not isinstance(doc, dict) or "n" not in doc:
        raise GraphError('graph JSON must be an object with an "n" field')
    raw_edges = doc.get("edges", [])
    edges = []
    for pos, e in enumerate(raw_edges):
        if not isinstance(e, dict) or "u" not in e or "v" not in e:
            raise GraphError(f'edge #{pos}: expected an object with "u" and "v"')
        edges.append((e["u"], e["v"], e.get("w", 1), e.get("sigma", 1)))
    return validate(doc["n"], edges, mu=doc.get("mu"), kappa=doc.get("kappa"))


def loads(text: str) -> SignedGraph:
    return from_json_dict(json.loads(text))


def to_json_dict(g: SignedGraph) -> dict:
    return {
        "n": g.n,
        "edges": [{"u": e.u, "v": e.v, "w": e.w, "sigma": e.sigma} for e in g.edges],
        "mu": list(g.mu),
        "kappa": list(g.kappa),
    }


def dumps(g: SignedGraph, indent: Optional[int] = None) -> str:
    return json.dumps(to_json_dict(g), indent=indent, sort_keys=True)
