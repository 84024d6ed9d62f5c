"""Distances between distributions.

Exact discrete optimal transport with the coupling as a byproduct, the
closed-form squared Wasserstein distance between Gaussians, its independence
upper bound, and the component-level transport distance between Gaussian
mixtures.

The transportation LP is solved by a transportation simplex on the bipartite
polytope (not an entropic approximation): downstream scatter assembly consumes
the couplings directly, and a smoothed plan would change them. All tie-breaks
are fixed, so output is deterministic for a given input ordering.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ._util import map_ordered
from .distributions import DiscreteDistribution, GaussianComponent, GaussianMixture
from .errors import DimensionMismatch, InvalidInput, MarginalMismatch
from .linalg import psd_sqrt

MARGINAL_ATOL = 1e-8
BALANCE_ATOL = 1e-6


@dataclass(frozen=True)
class Coupling:
    """Nonnegative transport plan whose margins match two probability vectors."""

    matrix: np.ndarray
    row_marginal: np.ndarray
    col_marginal: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        p = np.asarray(self.row_marginal, dtype=float)
        q = np.asarray(self.col_marginal, dtype=float)
        if m.ndim != 2 or m.shape != (p.size, q.size):
            raise InvalidInput(
                f"coupling shape {m.shape} does not match marginals ({p.size}, {q.size})"
            )
        if not np.all(np.isfinite(m)):
            raise InvalidInput("coupling has non-finite entries")
        if m.min(initial=0.0) < -1e-12:
            raise InvalidInput(f"coupling has negative entry {m.min():g}")
        m = np.clip(m, 0.0, None)
        if np.abs(m.sum(axis=1) - p).max() > MARGINAL_ATOL:
            raise MarginalMismatch("row sums do not match the row marginal")
        if np.abs(m.sum(axis=0) - q).max() > MARGINAL_ATOL:
            raise MarginalMismatch("column sums do not match the column marginal")
        for name, arr in (("matrix", m), ("row_marginal", p), ("col_marginal", q)):
            arr = np.ascontiguousarray(arr)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class OtResult:
    """Optimal squared-distance transport cost and the coupling achieving it."""

    cost: float
    coupling: Coupling


def _northwest_corner(p: np.ndarray, q: np.ndarray):
    """Staircase initial basis: m1 + m2 - 1 cells, possibly with zero flows."""
    m1, m2 = p.size, q.size
    a = p.copy()
    b = q.copy()
    basis = []
    flow = {}
    i = j = 0
    for _ in range(m1 + m2 - 1):
        f = min(a[i], b[j])
        basis.append((i, j))
        flow[(i, j)] = f
        a[i] -= f
        b[j] -= f
        if i == m1 - 1:
            j += 1
        elif j == m2 - 1:
            i += 1
        elif a[i] <= b[j]:
            i += 1
        else:
            j += 1
    return basis, flow


def _compute_duals(basis, cost, m1, m2):
    rows = [[] for _ in range(m1)]
    cols = [[] for _ in range(m2)]
    for i, j in basis:
        rows[i].append(j)
        cols[j].append(i)
    u = np.empty(m1)
    v = np.empty(m2)
    known_u = np.zeros(m1, dtype=bool)
    known_v = np.zeros(m2, dtype=bool)
    u[0] = 0.0
    known_u[0] = True
    stack = [(0, True)]
    while stack:
        k, is_row = stack.pop()
        if is_row:
            for j in rows[k]:
                if not known_v[j]:
                    v[j] = cost[k, j] - u[k]
                    known_v[j] = True
                    stack.append((j, False))
        else:
            for i in cols[k]:
                if not known_u[i]:
                    u[i] = cost[i, k] - v[k]
                    known_u[i] = True
                    stack.append((i, True))
    return u, v


def _cycle_path(basis, m1, m2, ei, ej):
    """Basis-cell indices along the tree path from row node ei to col node ej."""
    adj = [[] for _ in range(m1 + m2)]
    for t, (i, j) in enumerate(basis):
        adj[i].append((m1 + j, t))
        adj[m1 + j].append((i, t))
    target = m1 + ej
    parent = {ei: (-1, -1)}
    queue = deque([ei])
    while queue:
        node = queue.popleft()
        if node == target:
            break
        for nxt, t in adj[node]:
            if nxt not in parent:
                parent[nxt] = (node, t)
                queue.append(nxt)
    path = []
    node = target
    while parent[node][0] != -1:
        node, t = parent[node]
        path.append(t)
    path.reverse()
    return path


def _transport_simplex(cost: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Optimal flows for a balanced problem with strictly positive marginals."""
    m1, m2 = cost.shape
    if m1 == 1:
        return q.reshape(1, -1).copy()
    if m2 == 1:
        return p.reshape(-1, 1).copy()
    basis, flow = _northwest_corner(p, q)
    tol = 1e-12 * (1.0 + float(np.abs(cost).max()))
    basic_mask = np.zeros((m1, m2), dtype=bool)
    for c in basis:
        basic_mask[c] = True
    max_pivots = 200 + 20 * (m1 + m2) * (m1 + m2)
    pivots = 0
    bland = False
    while True:
        u, v = _compute_duals(basis, cost, m1, m2)
        reduced = cost - u[:, None] - v[None, :]
        reduced[basic_mask] = np.inf
        if bland:
            # Bland's rule: first improving cell in row-major order (anti-cycling).
            flat = np.flatnonzero(reduced.ravel() < -tol)
            if flat.size == 0:
                break
            ei, ej = divmod(int(flat[0]), m2)
        else:
            k = int(np.argmin(reduced))
            ei, ej = divmod(k, m2)
            if reduced[ei, ej] >= -tol:
                break
        path = _cycle_path(basis, m1, m2, ei, ej)
        # Entering cell takes +theta; path cells alternate -,+ starting at the
        # edge sharing the entering row.
        minus = path[0::2]
        theta = math.inf
        leave_pos = minus[0]
        for t in minus:
            f = flow[basis[t]]
            if f < theta:
                theta = f
                leave_pos = t
        for t in minus:
            flow[basis[t]] -= theta
        for t in path[1::2]:
            flow[basis[t]] += theta
        leaving = basis[leave_pos]
        del flow[leaving]
        basic_mask[leaving] = False
        basis[leave_pos] = (ei, ej)
        flow[(ei, ej)] = theta
        basic_mask[ei, ej] = True
        pivots += 1
        if pivots > max_pivots and not bland:
            bland = True
    out = np.zeros((m1, m2))
    for (i, j), f in flow.items():
        out[i, j] = f if f > 0 else 0.0
    return out


def solve_ot(cost, p, q) -> OtResult:
    """Exact optimum of the transportation linear program.

    Marginals must be probability vectors (mass 1 within ``BALANCE_ATOL``);
    a larger imbalance between them raises ``MarginalMismatch``. Zero-mass
    rows and columns are dropped before solving and reinserted as zero
    coupling slices. The returned coupling is a basic (vertex) solution.
    """
    cost = np.asarray(cost, dtype=float)
    p = np.asarray(p, dtype=float).reshape(-1)
    q = np.asarray(q, dtype=float).reshape(-1)
    if cost.ndim != 2 or cost.shape != (p.size, q.size):
        raise InvalidInput(
            f"cost shape {cost.shape} does not match marginals ({p.size}, {q.size})"
        )
    if not np.all(np.isfinite(cost)) or cost.min(initial=0.0) < 0:
        raise InvalidInput("cost must be finite and nonnegative")
    for name, w in (("p", p), ("q", q)):
        if w.size == 0 or not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidInput(f"{name} is not a valid probability vector")
    sp, sq = p.sum(), q.sum()
    if abs(sp - sq) > BALANCE_ATOL:
        raise MarginalMismatch(f"marginal masses differ: {sp!r} vs {sq!r}")
    if abs(sp - 1.0) > BALANCE_ATOL or abs(sq - 1.0) > BALANCE_ATOL:
        raise InvalidInput("marginals must each have total mass 1")
    pn = p / sp
    qn = q / sq
    rows = np.flatnonzero(pn > 0)
    cols = np.flatnonzero(qn > 0)
    flows = _transport_simplex(
        np.ascontiguousarray(cost[np.ix_(rows, cols)]), pn[rows], qn[cols]
    )
    full = np.zeros_like(cost)
    full[np.ix_(rows, cols)] = flows
    total = float((full * cost).sum())
    return OtResult(total, Coupling(full, pn, qn))


def wasserstein2_discrete(q1: DiscreteDistribution, q2: DiscreteDistribution) -> OtResult:
    """Squared Wasserstein distance between discrete distributions in R^d."""
    if q1.dim != q2.dim:
        raise DimensionMismatch(f"dimensions differ: {q1.dim} vs {q2.dim}")
    cost = cdist(q1.support, q2.support, "sqeuclidean")
    return solve_ot(cost, q1.weights, q2.weights)


def gaussian_w2(c1: GaussianComponent, c2: GaussianComponent) -> float:
    """Closed-form squared Wasserstein distance between two Gaussians.

    ``|mu1 - mu2|^2 + tr[S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}]`` with the
    inner product symmetrized before rooting and the result clamped at zero.
    """
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"dimensions differ: {c1.dim} vs {c2.dim}")
    dmu = c1.mean - c2.mean
    dist2 = float(dmu @ dmu)
    s1, s2 = c1.covariance, c2.covariance
    if c1.dim == 1:
        sd1 = math.sqrt(max(s1[0, 0], 0.0))
        sd2 = math.sqrt(max(s2[0, 0], 0.0))
        return dist2 + (sd1 - sd2) ** 2
    if not s1.any() and not s2.any():
        return dist2
    root1 = psd_sqrt(s1).entries
    inner = root1 @ s2 @ root1
    cross = psd_sqrt((inner + inner.T) / 2.0).entries
    val = dist2 + float(np.trace(s1) + np.trace(s2) - 2.0 * np.trace(cross))
    return max(val, 0.0)


def gaussian_what2(c1: GaussianComponent, c2: GaussianComponent) -> float:
    """Independence upper bound: ``|mu1 - mu2|^2 + tr(S1) + tr(S2)``."""
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"dimensions differ: {c1.dim} vs {c2.dim}")
    dmu = c1.mean - c2.mean
    return float(dmu @ dmu) + float(np.trace(c1.covariance) + np.trace(c2.covariance))


def _component_cost_matrix(g1: GaussianMixture, g2: GaussianMixture) -> np.ndarray:
    if _is_degenerate(g1) and _is_degenerate(g2):
        return cdist(g1.mean_matrix(), g2.mean_matrix(), "sqeuclidean")
    cost = np.empty((g1.n_components, g2.n_components))
    for i, ci in enumerate(g1.components):
        for j, cj in enumerate(g2.components):
            cost[i, j] = gaussian_w2(ci, cj)
    return cost


def _is_degenerate(g: GaussianMixture) -> bool:
    cached = getattr(g, "_zero_cov", None)
    if cached is None:
        cached = not any(c.covariance.any() for c in g.components)
        g._zero_cov = cached
    return cached


def maw2(g1: GaussianMixture, g2: GaussianMixture) -> OtResult:
    """Squared mixture transport distance.

    Optimal transport over the component priors with the closed-form Gaussian
    squared Wasserstein distance as ground cost. For zero-covariance mixtures
    this coincides with the discrete squared Wasserstein distance.
    """
    if g1.dim != g2.dim:
        raise DimensionMismatch(f"dimensions differ: {g1.dim} vs {g2.dim}")
    cost = _component_cost_matrix(g1, g2)
    return solve_ot(cost, g1.priors, g2.priors)


def pairwise_maw_sq(mixtures, threads: int = 1) -> np.ndarray:
    """Symmetric matrix of squared mixture distances; the diagonal is zero.

    Pairs are independent, so they may be computed on a thread pool; results
    are reduced in a fixed order either way.
    """
    mixtures = list(mixtures)
    n = len(mixtures)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vals = map_ordered(
        lambda ij: maw2(mixtures[ij[0]], mixtures[ij[1]]).cost, pairs, threads
    )
    out = np.zeros((n, n))
    for (i, j), c in zip(pairs, vals):
        out[i, j] = out[j, i] = c
    return out
