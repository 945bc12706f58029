"""The signed p-Laplacian: operator, Rayleigh quotient, extremal eigenpairs.

solve_largest / solve_smallest run projected gradient ascent/descent of the
Rayleigh quotient on the mu-weighted unit p-sphere with Armijo backtracking
and multiple restarts.  On connected graphs whose signature is switching
equivalent to all-negative, a converged strictly one-signed eigenfunction
pins the value down as the top eigenvalue (tag "perron-certified"); in every
other case the returned value is a certified eigenvalue and only a lower
bound for the top (resp. upper bound for the bottom) one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import (SignedGraph, classify_balance, is_connected,
                    structural_constants, switch, with_zero_kappa)
from .linalg import adjacency, eigh_sorted

P_CAP = 64.0


class SolverError(RuntimeError):
    """An eigenpair solve did not reach the requested residual tolerance."""


def psi(p: float, x: np.ndarray) -> np.ndarray:
    """Psi_p(t) = |t|^(p-2) t, with Psi_p(0) = 0."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.zeros_like(ax)
    nz = ax > 0
    out[nz] = ax[nz] ** (p - 1.0) * np.sign(x[nz])
    return out


def pnorm(f: np.ndarray, p: float, mu: np.ndarray) -> float:
    return float(np.sum(mu * np.abs(f) ** p) ** (1.0 / p))


def normalize_sp(f: np.ndarray, p: float, mu: np.ndarray) -> np.ndarray:
    """Project onto the mu-weighted unit p-sphere."""
    nrm = pnorm(f, p, mu)
    if nrm == 0 or not np.isfinite(nrm):
        raise ValueError("cannot normalize the zero (or non-finite) function")
    return f / nrm


def _check_p(p: float) -> None:
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")


def apply_plap(g: SignedGraph, p: float, f: np.ndarray) -> np.ndarray:
    """(Delta_p f)(i) = sum_{j~i} w_ij Psi_p(f_i - sigma_ij f_j) + kappa_i Psi_p(f_i)."""
    _check_p(p)
    f = np.asarray(f, dtype=float)
    out = g.kappa_array() * psi(p, f)
    if g.m:
        u, v, w, s = g.edge_arrays()
        t = psi(p, f[u] - s * f[v])
        np.add.at(out, u, w * t)
        np.add.at(out, v, -s * w * t)
    return out


def rayleigh(g: SignedGraph, p: float, f: np.ndarray) -> float:
    """(sum_E w |f_i - sigma f_j|^p + sum_i kappa |f_i|^p) / sum_i mu |f_i|^p."""
    _check_p(p)
    f = np.asarray(f, dtype=float)
    den = float(np.sum(g.mu_array() * np.abs(f) ** p))
    if den == 0:
        raise ValueError("Rayleigh quotient of the zero function")
    num = float(np.sum(g.kappa_array() * np.abs(f) ** p))
    if g.m:
        u, v, w, s = g.edge_arrays()
        num += float(np.sum(w * np.abs(f[u] - s * f[v]) ** p))
    return num / den


def residual(g: SignedGraph, p: float, lam: float, f: np.ndarray) -> float:
    """Max-norm defect of the eigen-equation Delta_p f = lambda mu Psi_p(f)."""
    f = np.asarray(f, dtype=float)
    if not np.any(f):
        raise ValueError("residual of the zero function")
    defect = apply_plap(g, p, f) - lam * g.mu_array() * psi(p, f)
    return float(np.max(np.abs(defect)))


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8          # relative: accept residual <= tol * (1 + |lambda|)
    max_iters: int = 2000
    restarts: int = 10
    rng_seed: int = 0
    armijo_slope: float = 1e-4
    backtrack: float = 0.5
    initial_step: float = 1.0

    def __post_init__(self):
        if not (self.tol > 0 and self.restarts >= 1):
            raise ValueError("SolverConfig needs tol > 0 and restarts >= 1")


@dataclass(frozen=True)
class PEigenPair:
    p: float
    value: float
    f: np.ndarray
    residual: float
    certificate: str  # "perron-certified" | "multi-restart" | "closed-form"


def _grad_sphere(g, p, f, lam, plap, mu):
    return p * (plap - lam * mu * psi(p, f))


def _ascent(g: SignedGraph, p: float, f0: np.ndarray, cfg: SolverConfig,
            maximize: bool) -> tuple[np.ndarray, float]:
    """Armijo projected gradient on the unit p-sphere; returns (f, lambda)."""
    mu = g.mu_array()
    sgn = 1.0 if maximize else -1.0
    f = normalize_sp(f0, p, mu)
    lam = rayleigh(g, p, f)
    step = cfg.initial_step
    for _ in range(cfg.max_iters):
        plap = apply_plap(g, p, f)
        res = float(np.max(np.abs(plap - lam * mu * psi(p, f))))
        if res <= 1e-3 * cfg.tol * (1.0 + abs(lam)):
            break
        grad = sgn * _grad_sphere(g, p, f, lam, plap, mu)
        g2 = float(grad @ grad)
        if g2 <= 1e-30:
            break
        t = step
        moved = False
        while t > 1e-18:
            cand = normalize_sp(f + t * grad, p, mu)
            lam_c = rayleigh(g, p, cand)
            if sgn * (lam_c - lam) >= cfg.armijo_slope * t * g2:
                f, lam = cand, lam_c
                moved = True
                break
            t *= cfg.backtrack
        if not moved:
            break
        step = min(max(t * 2.0, 1e-12), 1e3)
    return f, lam


def _power_refine(gneg: SignedGraph, p: float, f0: np.ndarray,
                  max_iters: int = 5000, rtol: float = 5e-16) -> np.ndarray:
    """Order-preserving fixed-point refinement in the positive cone.

    Requires sigma identically -1 and kappa >= 0; then Delta_p maps positive
    functions to positive ones and the normalized iteration converges to the
    one-signed top eigenfunction.
    """
    mu = gneg.mu_array()
    f = np.abs(np.asarray(f0, dtype=float))
    f[f == 0] = 1e-12
    f = normalize_sp(f, p, mu)
    invexp = 1.0 / (p - 1.0)
    for _ in range(max_iters):
        y = apply_plap(gneg, p, f)
        t = (y / mu) ** invexp
        ratio = t / f
        spread = float(ratio.max() - ratio.min())
        f = normalize_sp(t, p, mu)
        if spread <= rtol * float(ratio.max()):
            break
    return f


def _newton_polish(g: SignedGraph, p: float, lam: float, f: np.ndarray,
                   rounds: int = 6) -> tuple[float, np.ndarray]:
    """Newton steps on the eigen-equation plus sphere constraint (p >= 2 only)."""
    if p < 2:
        return lam, f
    n = g.n
    mu = g.mu_array()
    kap = g.kappa_array()
    u, v, w, s = g.edge_arrays()
    x = np.asarray(f, dtype=float).copy()
    lm = float(lam)
    best = (residual(g, p, lm, x), lm, x)
    for _ in range(rounds):
        absx = np.abs(x)
        dx = np.ones_like(x) if p == 2 else absx ** (p - 2.0)
        jac = np.zeros((n + 1, n + 1))
        if g.m:
            d = x[u] - s * x[v]
            dd = np.ones_like(d) if p == 2 else np.abs(d) ** (p - 2.0)
            coef = (p - 1.0) * w * dd
            np.add.at(jac, (u, u), coef)
            np.add.at(jac, (v, v), coef)
            np.add.at(jac, (u, v), -s * coef)
            np.add.at(jac, (v, u), -s * coef)
        idx = np.arange(n)
        jac[idx, idx] += (p - 1.0) * (kap - lm * mu) * dx
        jac[:n, n] = -mu * psi(p, x)
        jac[n, :n] = p * mu * psi(p, x)
        rhs = np.empty(n + 1)
        rhs[:n] = apply_plap(g, p, x) - lm * mu * psi(p, x)
        rhs[n] = float(np.sum(mu * absx ** p) - 1.0)
        try:
            delta = np.linalg.solve(jac, -rhs)
        except np.linalg.LinAlgError:
            break
        x2 = x + delta[:n]
        lm2 = lm + float(delta[n])
        nrm2 = np.sum(mu * np.abs(x2) ** p)
        if not (np.isfinite(nrm2) and nrm2 > 0):
            break
        x2 = x2 / nrm2 ** (1.0 / p)
        r2 = residual(g, p, lm2, x2)
        if r2 < best[0]:
            best = (r2, lm2, x2)
            x, lm = x2, lm2
        else:
            break
    return best[1], best[2]


def _edgeless_pair(g: SignedGraph, p: float, largest: bool) -> PEigenPair:
    ratios = g.kappa_array() / g.mu_array()
    i = int(np.argmax(ratios) if largest else np.argmin(ratios))
    f = np.zeros(g.n)
    f[i] = 1.0
    f = normalize_sp(f, p, g.mu_array())
    lam = float(ratios[i])
    return PEigenPair(p=p, value=lam, f=f, residual=residual(g, p, lam, f),
                      certificate="closed-form")


def _starts(g: SignedGraph, p: float, cfg: SolverConfig, largest: bool) -> list[np.ndarray]:
    """Warm starts: p=2 extremal generalized eigenvector, |A|-Perron vector,
    two-point edge vectors (the sparse maximizers that dominate for p < 2),
    then seeded random points."""
    mu = g.mu_array()
    starts = []
    # kappa enters the p=2 pencil through the diagonal of Deg + K - A
    a = adjacency(g)
    lap = np.diag(g.weighted_degrees() + g.kappa_array()) - a
    rt = 1.0 / np.sqrt(mu)
    _, vecs = eigh_sorted(lap * rt[:, None] * rt[None, :])
    starts.append(rt * vecs[:, -1 if largest else 0])
    _, pvecs = eigh_sorted(np.abs(a) * rt[:, None] * rt[None, :])
    starts.append(np.abs(rt * pvecs[:, -1]) + 1e-9)
    if largest:
        heavy = sorted(g.edges, key=lambda e: (-e.w, e.u, e.v))[:12]
        for e in heavy:
            f = np.zeros(g.n)
            f[e.u] = 1.0
            f[e.v] = -float(e.sigma)
            starts.append(f)
    rng = np.random.default_rng(cfg.rng_seed)
    for _ in range(cfg.restarts):
        starts.append(rng.standard_normal(g.n))
    return starts


def _finish(g, p, f, lam):
    lam, f = _newton_polish(g, p, lam, f)
    return f, lam, residual(g, p, lam, f)


def solve_largest(g: SignedGraph, p: float,
                  cfg: Optional[SolverConfig] = None) -> PEigenPair:
    """Best stationary pair found for the top of the Rayleigh quotient.

    Connected antibalanced graphs go through the positive-cone path and are
    tagged perron-certified when the converged eigenfunction is strictly
    one-signed; then the value is exactly the top eigenvalue.  Otherwise the
    value is a certified eigenvalue and a lower bound for it.
    """
    _check_p(p)
    if p > P_CAP:
        raise ValueError(f"p > {P_CAP:g} is not supported by the iterative solvers")
    cfg = cfg or SolverConfig()
    if g.m == 0:
        return _edgeless_pair(g, p, largest=True)

    bal = classify_balance(g)
    if bal.antibalanced_witness is not None and is_connected(g):
        tau = np.asarray(bal.antibalanced_witness, dtype=float)
        gneg = switch(g, bal.antibalanced_witness)
        if np.min(gneg.kappa_array()) >= 0:
            f = _power_refine(gneg, p, np.ones(g.n))
            lam = rayleigh(gneg, p, f)
        else:
            f, lam = _ascent(gneg, p, np.abs(np.random.default_rng(cfg.rng_seed)
                                             .standard_normal(g.n)) + 0.1,
                             cfg, maximize=True)
        f, lam, res = _finish(gneg, p, f, lam)
        one_signed = bool(np.all(f > 0) or np.all(f < 0))
        ok = res <= cfg.tol * (1.0 + abs(lam))
        if one_signed and ok:
            return PEigenPair(p=p, value=lam, f=tau * np.abs(f), residual=res,
                              certificate="perron-certified")
        # fall through to the generic path if the cone route failed

    best = None
    for f0 in _starts(g, p, cfg, largest=True):
        f, lam = _ascent(g, p, f0, cfg, maximize=True)
        f, lam, res = _finish(g, p, f, lam)
        if res <= cfg.tol * (1.0 + abs(lam)) and (best is None or lam > best[1]):
            best = (f, lam, res)
    if best is None:
        raise SolverError(f"no restart reached residual tolerance {cfg.tol:g} "
                          f"(p={p}, restarts={cfg.restarts})")
    f, lam, res = best
    return PEigenPair(p=p, value=lam, f=f, residual=res, certificate="multi-restart")


def solve_smallest(g: SignedGraph, p: float,
                   cfg: Optional[SolverConfig] = None) -> PEigenPair:
    """Certified eigenpair near the bottom; the value is an upper bound for
    the smallest variational eigenvalue.

    Balanced graphs with kappa proportional to mu (in particular kappa == 0)
    get the exact bottom pair: the switched-constant eigenfunction.
    """
    _check_p(p)
    if p > P_CAP:
        raise ValueError(f"p > {P_CAP:g} is not supported by the iterative solvers")
    cfg = cfg or SolverConfig()
    if g.m == 0:
        return _edgeless_pair(g, p, largest=False)
    mu = g.mu_array()

    bal = classify_balance(g)
    if bal.balanced_witness is not None:
        ratios = g.kappa_array() / mu
        if np.ptp(ratios) == 0:
            f = normalize_sp(np.asarray(bal.balanced_witness, dtype=float), p, mu)
            lam = float(ratios[0])
            return PEigenPair(p=p, value=lam, f=f,
                              residual=residual(g, p, lam, f),
                              certificate="closed-form")

    best = None
    starts = _starts(g, p, cfg, largest=False)
    if bal.balanced_witness is not None:
        starts.insert(0, np.asarray(bal.balanced_witness, dtype=float))
    for f0 in starts:
        f, lam = _ascent(g, p, f0, cfg, maximize=False)
        f, lam, res = _finish(g, p, f, lam)
        if res <= cfg.tol * (1.0 + abs(lam)) and (best is None or lam < best[1]):
            best = (f, lam, res)
    if best is None:
        raise SolverError(f"no restart reached residual tolerance {cfg.tol:g} "
                          f"(p={p}, restarts={cfg.restarts})")
    f, lam, res = best
    return PEigenPair(p=p, value=lam, f=f, residual=res, certificate="multi-restart")


# --- closed forms -----------------------------------------------------------

def closed_form_complete(n: int, p: float) -> np.ndarray:
    """All positive p-Laplacian eigenvalues of the unit-weight complete graph:
    { n - (h+k) + (h^(q-1) + k^(q-1))^(p-1) : h,k >= 1, h+k <= n }, sorted."""
    if n < 3:
        raise ValueError("closed_form_complete needs n >= 3")
    _check_p(p)
    q = p / (p - 1.0)
    vals = sorted({n - (h + k) + (h ** (q - 1.0) + k ** (q - 1.0)) ** (p - 1.0)
                   for h in range(1, n) for k in range(1, n - h + 1)})
    return np.asarray(vals)


def complete_extremes(n: int, p: float) -> tuple[float, float]:
    """(lambda_2, lambda_n) of the complete graph: the positive eigenvalues
    have no gap below the smallest one, so min and max of the closed-form set
    are the second and top variational eigenvalues."""
    vals = closed_form_complete(n, p)
    return float(vals[0]), float(vals[-1])


def closed_form_star(m: int, p: float) -> float:
    """Top p-Laplacian eigenvalue of the unit-weight star on m vertices."""
    if m < 2:
        raise ValueError("closed_form_star needs m >= 2")
    _check_p(p)
    return float((1.0 + (m - 1.0) ** (1.0 / (p - 1.0))) ** (p - 1.0))


# --- monotonicity functionals ----------------------------------------------

@dataclass(frozen=True)
class MonotonicityReport:
    p_grid: tuple[float, ...]
    lambdas: tuple[float, ...]
    m1: tuple[float, ...]          # 2^-p * lambda, must be non-increasing
    m2: tuple[float, ...]          # p * (lambda/D)^(1/p), must be non-decreasing
    violations: tuple[tuple[int, str, float], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def monotonicity_functionals(g: SignedGraph, k_label: int,
                             p_grid: Sequence[float],
                             lambdas: Sequence[float],
                             slack: float = 1e-8) -> MonotonicityReport:
    """Evaluate m1(p) = 2^-p lambda and m2(p) = p (lambda/D)^(1/p) along an
    increasing p-grid of certified values for one extremal index, and report
    every monotonicity violation beyond the slack."""
    if k_label not in (1, g.n):
        raise ValueError("k_label must be 1 or n (the computable indices)")
    if min(g.kappa) < 0:
        raise ValueError("m2 requires kappa >= 0")
    dconst, _ = structural_constants(g)
    if dconst <= 0:
        raise ValueError("D must be positive (graph without edges or potential)")
    ps = [float(x) for x in p_grid]
    if any(b <= a for a, b in zip(ps, ps[1:])):
        raise ValueError("p-grid must be strictly increasing")
    lams = [max(0.0, float(x)) for x in lambdas]
    m1 = [2.0 ** (-p) * lam for p, lam in zip(ps, lams)]
    m2 = [p * (lam / dconst) ** (1.0 / p) for p, lam in zip(ps, lams)]
    violations = []
    for i in range(len(ps) - 1):
        if m1[i + 1] > m1[i] + slack:
            violations.append((i, "m1", m1[i + 1] - m1[i]))
        if m2[i + 1] < m2[i] - slack:
            violations.append((i, "m2", m2[i] - m2[i + 1]))
    return MonotonicityReport(p_grid=tuple(ps), lambdas=tuple(lams),
                              m1=tuple(m1), m2=tuple(m2),
                              violations=tuple(violations))


# --- potential shift --------------------------------------------------------

@dataclass(frozen=True)
class ShiftReport:
    p: float
    k_label: int
    lambda_kappa: float
    lambda_zero: float
    bound: float        # C = max |kappa_i / mu_i|
    passed: bool


def potential_shift_check(g: SignedGraph, p: float, k_label: int,
                          cfg: Optional[SolverConfig] = None,
                          slack: float = 1e-9) -> ShiftReport:
    """Check |lambda_k(kappa) - lambda_k(0)| <= C for an extremal index."""
    if k_label == 1:
        solve = solve_smallest
    elif k_label == g.n:
        solve = solve_largest
    else:
        raise ValueError("k_label must be 1 or n")
    _, c = structural_constants(g)
    lam_k = solve(g, p, cfg).value
    lam_0 = solve(with_zero_kappa(g), p, cfg).value
    return ShiftReport(p=p, k_label=k_label, lambda_kappa=lam_k,
                       lambda_zero=lam_0, bound=c,
                       passed=abs(lam_k - lam_0) <= c + slack)
