"""Adjacency matrices of signed graphs and dense symmetric eigensolves.

The generalized problem A v = lambda D v (D = diag(mu)) is always solved
through the symmetric similarity D^{-1/2} A D^{-1/2}, never by forming
D^{-1} A, so exact symmetry is preserved.  Eigenvalues come back ascending
and eigenvector signs are canonicalized (first significant component
positive) so repeated runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import SignedGraph

SIGN_TOL = 1e-9


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectrum of a symmetric (possibly measure-weighted) problem.

    values are ascending; vectors[:, k] belongs to values[k] and the basis is
    orthonormal in the stated inner product ("euclidean" or "mu").
    """

    values: np.ndarray
    vectors: np.ndarray
    inner: str
    mu: Optional[np.ndarray] = None


def adjacency(g: SignedGraph) -> np.ndarray:
    """Signed adjacency matrix: a_ij = sigma_ij * w_ij on edges, else 0."""
    a = np.zeros((g.n, g.n))
    for e in g.edges:
        val = e.sigma * e.w
        a[e.u, e.v] = val
        a[e.v, e.u] = val
    return a


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > SIGN_TOL * max(1.0, np.abs(col).max()))
        if idx.size and col[idx[0]] < 0:
            out[:, k] = -col
    return out


def eigh_sorted(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and sign-canonicalized orthonormal eigenvectors."""
    vals, vecs = np.linalg.eigh(m)
    order = np.argsort(vals, kind="stable")
    return vals[order], _canonical_signs(vecs[:, order])


def normalized_spectrum(g: SignedGraph) -> EigenDecomposition:
    """Spectrum of the normalized adjacency D^{-1} A via D^{-1/2} A D^{-1/2}.

    The returned eigenvectors are orthonormal in the mu-weighted inner
    product and solve A v = lambda D v.
    """
    mu = g.mu_array()
    rt = 1.0 / np.sqrt(mu)
    sym = adjacency(g) * rt[:, None] * rt[None, :]
    vals, vecs = eigh_sorted(sym)
    return EigenDecomposition(values=vals, vectors=_canonical_signs(rt[:, None] * vecs),
                              inner="mu", mu=mu)


def sign_counts(dec, tol: float) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) with |lambda| <= tol counted as zero.

    Accepts an EigenDecomposition or a plain array of eigenvalues.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    values = dec.values if isinstance(dec, EigenDecomposition) else dec
    v = np.asarray(values, dtype=float)
    n_plus = int(np.sum(v > tol))
    n_minus = int(np.sum(v < -tol))
    return n_plus, n_minus, v.size - n_plus - n_minus
