"""Supervised dimension reduction in the mixture-distance metric space.

The core alternating algorithm: anchor-based pair selection via discriminant
distance ratios, scatter-matrix assembly under fixed couplings, a whitened
generalized-eigenvalue (Rayleigh-Ritz) step, and the outer iteration that
tracks the variation ratio and subspace drift until the relative gain falls
below a threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import map_ordered
from .distributions import GaussianMixture, LabeledSample, project
from .errors import (
    DegenerateWithinVariation,
    DimensionMismatch,
    EmptyPairSet,
    InvalidInput,
    MarginalMismatch,
    SingletonClass,
)
from .linalg import (
    SymMatrix,
    grassmann_distance,
    orthonormal_span,
    psd_inv_sqrt,
    sym_eig,
)
from .transport import MARGINAL_ATOL, Coupling, maw2, pairwise_maw_sq

# Ridge is applied to the within-scatter only when its relative conditioning
# falls below this threshold; scatter matrices are usually positive definite.
RIDGE_RCOND = 1e-10


@dataclass(frozen=True)
class PairSets:
    """Ordered index pairs used for the between- and within-class variations."""

    between: tuple
    within: tuple

    def __post_init__(self):
        if not self.between or not self.within:
            raise EmptyPairSet("both between- and within-class pair sets must be nonempty")


@dataclass(frozen=True)
class OtafConfig:
    """Hyperparameters for the alternating fit.

    ``alpha`` is the fraction of instances (those with the smallest
    discriminant distance ratios) anchoring the selected pairs. The loop runs
    at least ``min_iters`` ratio evaluations and stops once the relative
    ratio increase drops to ``epsilon`` or ``max_iters`` is reached.
    """

    reduced_dim: int
    alpha: float = 1.0 / 3.0
    min_iters: int = 2
    max_iters: int = 50
    epsilon: float = 1e-4
    orthonormal: bool = True
    ridge_scale: float = 1e-8

    def __post_init__(self):
        if self.reduced_dim < 1:
            raise InvalidInput("reduced_dim must be a positive integer")
        if not 0 < self.alpha <= 1:
            raise InvalidInput("alpha must lie in (0, 1]")
        if self.epsilon <= 0:
            raise InvalidInput("epsilon must be positive")
        if not 1 <= self.min_iters <= self.max_iters:
            raise InvalidInput("need 1 <= min_iters <= max_iters")
        if self.ridge_scale < 0:
            raise InvalidInput("ridge_scale must be nonnegative")


@dataclass(frozen=True)
class ProjectionMatrix:
    """d x d' matrix whose columns are the learned discriminant coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2 or a.shape[1] > a.shape[0]:
            raise InvalidInput(f"invalid projection shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("projection has non-finite entries")
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[0] == 0 or sv[-1] <= 1e-10 * sv[0]:
            raise InvalidInput("projection columns are rank deficient")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def reduced_dim(self) -> int:
        return self.matrix.shape[1]


@dataclass
class OtafResult:
    """Fit output: the projection plus per-iteration diagnostics.

    ``fisher_trace[t]`` is the variation ratio at iteration ``t+1`` (the first
    entry is evaluated on the unprojected data). ``grassmann_trace[k]``
    compares the subspaces from consecutive projection updates. The returned
    projection is the iterate with the highest recorded ratio.
    """

    projection: ProjectionMatrix
    fisher_trace: list = field(default_factory=list)
    grassmann_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _labels(samples) -> list:
    return [s.label for s in samples]


def discriminant_ratios(samples, pairwise_sq_dists=None) -> np.ndarray:
    """Per-instance ratio of mean other-class to mean same-class squared distance.

    Distances are squared mixture transport distances in the original
    dimension. A zero same-class mean (identical duplicates) yields an
    infinite ratio, ranking the instance as easiest.
    """
    labels = _labels(samples)
    n = len(samples)
    classes = set(labels)
    if len(classes) < 2:
        raise InvalidInput("need at least two classes")
    for c in classes:
        if labels.count(c) < 2:
            raise SingletonClass(f"class {c} has a single member")
    if pairwise_sq_dists is None:
        pairwise_sq_dists = pairwise_maw_sq([s.distribution for s in samples])
    d2 = np.asarray(pairwise_sq_dists, dtype=float)
    if d2.shape != (n, n):
        raise InvalidInput(f"distance matrix shape {d2.shape} does not match {n} samples")
    y = np.asarray(labels)
    gammas = np.empty(n)
    for k in range(n):
        same = (y == y[k]) & (np.arange(n) != k)
        delta = d2[k, same].mean()
        delta_prime = d2[k, ~same & (np.arange(n) != k)].mean()
        gammas[k] = math.inf if delta == 0 else delta_prime / delta
    return gammas


def select_pairs(samples, gammas, alpha: float) -> PairSets:
    """Anchor the ``ceil(alpha * n)`` smallest-ratio instances and pair them
    with every other instance, split by label agreement.

    Ties in the ratios are broken by ascending index; self-pairs are excluded.
    """
    if not 0 < alpha <= 1:
        raise InvalidInput("alpha must lie in (0, 1]")
    labels = _labels(samples)
    n = len(samples)
    gammas = np.asarray(gammas, dtype=float)
    if gammas.shape != (n,):
        raise InvalidInput("one ratio per sample is required")
    n_anchor = min(n, int(math.ceil(alpha * n - 1e-12)))
    order = np.argsort(gammas, kind="stable")
    anchors = sorted(int(k) for k in order[:n_anchor])
    between, within = [], []
    for k1 in anchors:
        for k2 in range(n):
            if k2 == k1:
                continue
            if labels[k1] == labels[k2]:
                within.append((k1, k2))
            else:
                between.append((k1, k2))
    if not between or not within:
        raise EmptyPairSet("pair selection produced an empty pair set")
    return PairSets(tuple(between), tuple(within))


def _check_coupling(pi: Coupling, g1: GaussianMixture, g2: GaussianMixture):
    if np.abs(pi.row_marginal - g1.priors).max() > MARGINAL_ATOL:
        raise MarginalMismatch("coupling row marginal does not match the first prior vector")
    if np.abs(pi.col_marginal - g2.priors).max() > MARGINAL_ATOL:
        raise MarginalMismatch("coupling column marginal does not match the second prior vector")


def scatter_matrices(samples, pairs: PairSets, couplings) -> tuple[SymMatrix, SymMatrix]:
    """Between- and within-class scatter matrices under fixed couplings.

    Each pair contributes the coupling-weighted outer products of component
    mean differences plus both mixtures' prior-weighted covariance sums; the
    two matrices average those contributions over their pair sets. With zero
    covariances this reduces exactly to the support-point construction.
    """
    mixtures = [s.distribution for s in samples]
    d = mixtures[0].dim
    weighted_cov = [g.prior_weighted_covariance() for g in mixtures]
    means = [g.mean_matrix() for g in mixtures]

    def accumulate(pair_list):
        acc = np.zeros((d, d))
        for k1, k2 in pair_list:
            pi = couplings[(k1, k2)]
            _check_coupling(pi, mixtures[k1], mixtures[k2])
            diff = means[k1][:, None, :] - means[k2][None, :, :]
            acc += np.einsum("ij,ijk,ijl->kl", pi.matrix, diff, diff, optimize=True)
            acc += weighted_cov[k1] + weighted_cov[k2]
        return acc / len(pair_list)

    cb = accumulate(pairs.between)
    cw = accumulate(pairs.within)
    return SymMatrix((cb + cb.T) / 2.0), SymMatrix((cw + cw.T) / 2.0)


def fisher_ratio(cb, cw, a) -> float:
    """Trace quotient ``tr(A^t C_B A) / tr(A^t C_W A)``."""
    cbm = cb.entries if isinstance(cb, SymMatrix) else np.asarray(cb, dtype=float)
    cwm = cw.entries if isinstance(cw, SymMatrix) else np.asarray(cw, dtype=float)
    am = a.matrix if isinstance(a, ProjectionMatrix) else np.asarray(a, dtype=float)
    if am.ndim == 1:
        am = am.reshape(-1, 1)
    t_b = float(np.sum((cbm @ am) * am))
    t_w = float(np.sum((cwm @ am) * am))
    if t_w <= 0:
        raise DegenerateWithinVariation("projected within-class variation is not positive")
    return t_b / t_w


def _whitener(cw: np.ndarray, ridge_scale: float) -> np.ndarray:
    d = cw.shape[0]
    eigs = np.linalg.eigvalsh(cw)
    ridge = 0.0
    if eigs[-1] <= 0 or eigs[0] / eigs[-1] < RIDGE_RCOND:
        ridge = ridge_scale * float(np.trace(cw)) / d
    return psd_inv_sqrt(cw, ridge).entries


def solve_directions(cb, cw, reduced_dim: int, orthonormal: bool = True,
                     ridge_scale: float = 1e-8) -> ProjectionMatrix:
    """Maximize the trace quotient over d' directions.

    Whiten with the inverse square root of the within-scatter, eigendecompose
    the whitened between-scatter, and map the top eigenvectors back. When an
    orthonormal projection is requested the columns are replaced by an
    orthonormal basis of their span.
    """
    cbm = cb.entries if isinstance(cb, SymMatrix) else SymMatrix(cb).entries
    cwm = cw.entries if isinstance(cw, SymMatrix) else SymMatrix(cw).entries
    d = cbm.shape[0]
    if cwm.shape[0] != d:
        raise DimensionMismatch("scatter matrices have different dimensions")
    if not 1 <= reduced_dim <= d:
        raise InvalidInput(f"reduced_dim {reduced_dim} out of range for dimension {d}")
    winv = _whitener(cwm, ridge_scale)
    cstar = winv @ cbm @ winv
    _, vecs = sym_eig((cstar + cstar.T) / 2.0)
    a = winv @ vecs[:, :reduced_dim]
    if orthonormal:
        a = orthonormal_span(a).basis
    return ProjectionMatrix(a)


def _solve_pair_couplings(mixtures, pair_list, projection, threads=1):
    """Couplings and squared distances for every ordered pair, after projecting.

    Each unordered pair is solved once; the mirrored orientation reuses the
    transposed coupling. Iteration order is fixed for determinism.
    """
    if projection is None:
        projected = mixtures
    else:
        projected = [project(g, projection) for g in mixtures]
    keys = sorted({(min(k1, k2), max(k1, k2)) for k1, k2 in pair_list})
    results = map_ordered(
        lambda key: maw2(projected[key[0]], projected[key[1]]), keys, threads
    )
    solved = dict(zip(keys, results))
    couplings, costs = {}, {}
    for k1, k2 in pair_list:
        res = solved[(min(k1, k2), max(k1, k2))]
        if k1 <= k2:
            couplings[(k1, k2)] = res.coupling
        else:
            couplings[(k1, k2)] = Coupling(
                res.coupling.matrix.T,
                res.coupling.col_marginal,
                res.coupling.row_marginal,
            )
        costs[(k1, k2)] = res.cost
    return couplings, costs


def _variation_ratio(pairs: PairSets, costs) -> float:
    v_b = sum(costs[p] for p in pairs.between) / len(pairs.between)
    v_w = sum(costs[p] for p in pairs.within) / len(pairs.within)
    if v_w <= 0:
        raise DegenerateWithinVariation("within-class variation is zero")
    return v_b / v_w


def fit(samples, config: OtafConfig, pairwise_sq_dists=None, threads: int = 1) -> OtafResult:
    """Alternating optimization of the projection.

    Couplings for the selected pairs are solved on the projected mixtures
    (initially unprojected, i.e. under the identity), scatter matrices are
    assembled in the original dimension, and the directions are refreshed by
    the whitened eigensolve. The variation ratio is re-evaluated after every
    update; iteration stops once its relative increase reaches ``epsilon``
    (after ``min_iters`` evaluations) or at ``max_iters``.
    """
    samples = list(samples)
    if not samples:
        raise InvalidInput("no samples")
    d = samples[0].distribution.dim
    for s in samples:
        if s.distribution.dim != d:
            raise DimensionMismatch("samples mix ambient dimensions")
    if config.reduced_dim >= d:
        raise InvalidInput(f"reduced_dim must be < ambient dimension {d}")
    mixtures = [s.distribution for s in samples]

    gammas = discriminant_ratios(samples, pairwise_sq_dists)
    pairs = select_pairs(samples, gammas, config.alpha)
    pair_list = pairs.between + pairs.within

    couplings, costs = _solve_pair_couplings(mixtures, pair_list, None, threads)
    rho = _variation_ratio(pairs, costs)
    fisher_trace = [rho]
    grassmann_trace = []
    tau = 1
    eta = math.inf
    best = None
    prev_subspace = None
    while tau < config.min_iters or (eta > config.epsilon and tau < config.max_iters):
        cb, cw = scatter_matrices(samples, pairs, couplings)
        proj = solve_directions(
            cb, cw, config.reduced_dim, config.orthonormal, config.ridge_scale
        )
        subspace = orthonormal_span(proj.matrix)
        if prev_subspace is not None:
            grassmann_trace.append(grassmann_distance(prev_subspace, subspace))
        prev_subspace = subspace
        couplings, costs = _solve_pair_couplings(mixtures, pair_list, proj.matrix, threads)
        rho_new = _variation_ratio(pairs, costs)
        fisher_trace.append(rho_new)
        eta = math.inf if rho == 0 else (rho_new - rho) / rho
        rho = rho_new
        tau += 1
        if best is None or rho_new > best[0]:
            best = (rho_new, proj)
    return OtafResult(
        projection=best[1],
        fisher_trace=fisher_trace,
        grassmann_trace=grassmann_trace,
        iterations=tau,
        converged=eta <= config.epsilon,
    )
