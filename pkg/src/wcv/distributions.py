"""Distribution value types: weighted point sets and Gaussian mixtures.

A discrete distribution embeds into a mixture as components with zero
covariance, so every downstream operation runs on a single representation.
All types are immutable after construction.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NotPositiveSemidefinite
from .linalg import PSD_EIG_RTOL, SymMatrix

WEIGHT_ATOL = 1e-9


def _prob_vector(w, what: str) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidInput(f"{what} must be a nonempty vector")
    if not np.all(np.isfinite(w)):
        raise InvalidInput(f"{what} have non-finite entries")
    if np.any(w < 0):
        raise InvalidInput(f"{what} must be nonnegative")
    total = w.sum()
    if abs(total - 1.0) > WEIGHT_ATOL:
        raise InvalidInput(f"{what} sum to {total!r}, expected 1 within {WEIGHT_ATOL}")
    w = w / total
    w.flags.writeable = False
    return w


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


class DiscreteDistribution:
    """Probability-weighted support points in R^d."""

    def __init__(self, support, weights):
        support = np.asarray(support, dtype=float)
        if support.ndim == 1:
            support = support.reshape(-1, 1)
        if support.ndim != 2 or support.shape[0] == 0:
            raise InvalidInput(f"support must be a nonempty (m, d) array, got {support.shape}")
        if not np.all(np.isfinite(support)):
            raise InvalidInput("support points have non-finite entries")
        weights = _prob_vector(weights, "weights")
        if weights.shape[0] != support.shape[0]:
            raise InvalidInput(
                f"{support.shape[0]} support points but {weights.shape[0]} weights"
            )
        self.support = _frozen(support)
        self.weights = weights

    @property
    def dim(self) -> int:
        return self.support.shape[1]

    @property
    def n_points(self) -> int:
        return self.support.shape[0]

    def __repr__(self):
        return f"DiscreteDistribution(n_points={self.n_points}, dim={self.dim})"


class GaussianComponent:
    """A single Gaussian, mean and PSD covariance. Zero covariance is allowed."""

    def __init__(self, mean, covariance, *, _check: bool = True):
        mean = np.asarray(mean, dtype=float).reshape(-1)
        covariance = np.asarray(covariance, dtype=float)
        if _check:
            if mean.size == 0 or not np.all(np.isfinite(mean)):
                raise InvalidInput("mean must be a finite vector")
            covariance = SymMatrix(covariance).entries
            if covariance.shape[0] != mean.size:
                raise DimensionMismatch(
                    f"mean has dim {mean.size} but covariance is {covariance.shape}"
                )
            if covariance.shape[0] == 1:
                lo, scale = covariance[0, 0], abs(covariance[0, 0])
            else:
                eigs = np.linalg.eigvalsh(covariance)
                lo, scale = eigs[0], np.abs(eigs).max()
            if lo < -PSD_EIG_RTOL * scale:
                raise NotPositiveSemidefinite(
                    f"covariance eigenvalue {lo:g} below PSD tolerance"
                )
            mean = _frozen(mean)
        else:
            covariance = np.ascontiguousarray(covariance)
        self.mean = mean
        self.covariance = covariance

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def __repr__(self):
        return f"GaussianComponent(dim={self.dim})"


class GaussianMixture:
    """Prior-weighted Gaussian components sharing a common dimension."""

    def __init__(self, components, priors, *, _check: bool = True):
        components = tuple(components)
        if not components:
            raise InvalidInput("mixture needs at least one component")
        if _check:
            d = components[0].dim
            for c in components:
                if c.dim != d:
                    raise DimensionMismatch(
                        f"components mix dimensions {d} and {c.dim}"
                    )
            priors = _prob_vector(priors, "priors")
            if priors.shape[0] != len(components):
                raise InvalidInput(
                    f"{len(components)} components but {priors.shape[0]} priors"
                )
        self.components = components
        self.priors = priors

    @property
    def dim(self) -> int:
        return self.components[0].dim

    @property
    def n_components(self) -> int:
        return len(self.components)

    def mean_matrix(self) -> np.ndarray:
        """Component means stacked as an (m, d) array."""
        return np.array([c.mean for c in self.components])

    def prior_weighted_covariance(self) -> np.ndarray:
        """Sum of priors times covariances, the mixture's aggregate spread term."""
        out = np.zeros((self.dim, self.dim))
        for p, c in zip(self.priors, self.components):
            out += p * c.covariance
        return out

    def __repr__(self):
        return f"GaussianMixture(n_components={self.n_components}, dim={self.dim})"


class LabeledSample:
    """An instance: a mixture plus its class label and an identifier."""

    def __init__(self, id, distribution: GaussianMixture, label):
        self.id = str(id)
        if not isinstance(distribution, GaussianMixture):
            raise InvalidInput("distribution must be a GaussianMixture")
        self.distribution = distribution
        self.label = int(label)

    def __repr__(self):
        return f"LabeledSample(id={self.id!r}, label={self.label})"


def from_discrete(q: DiscreteDistribution) -> GaussianMixture:
    """View a discrete distribution as a mixture of point masses.

    One component per support point: mean equal to the point, zero covariance,
    prior equal to the point's weight.
    """
    d = q.dim
    zero = np.zeros((d, d))
    zero.flags.writeable = False  # shared across components
    comps = [GaussianComponent(x, zero, _check=False) for x in q.support]
    return GaussianMixture(comps, q.weights, _check=False)


def project(g: GaussianMixture, a) -> GaussianMixture:
    """Linear projection of a mixture by a d x d' matrix (or a single vector).

    Each component N(mu, Sigma) maps to N(a^T mu, a^T Sigma a); priors are
    unchanged. Zero-covariance components stay exactly degenerate.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[0] != g.dim or a.shape[1] > g.dim:
        raise DimensionMismatch(
            f"projection {a.shape} does not apply to mixtures of dim {g.dim}"
        )
    at = a.T
    comps = [
        GaussianComponent(at @ c.mean, at @ c.covariance @ a, _check=False)
        for c in g.components
    ]
    return GaussianMixture(comps, g.priors, _check=False)


def mixture_to_dict(g: GaussianMixture) -> dict:
    """JSON-ready document with the fixed field names priors/means/covariances."""
    return {
        "priors": g.priors.tolist(),
        "means": [c.mean.tolist() for c in g.components],
        "covariances": [c.covariance.tolist() for c in g.components],
    }


def mixture_from_dict(doc: dict) -> GaussianMixture:
    for key in ("priors", "means", "covariances"):
        if key not in doc:
            raise InvalidInput(f"mixture document missing field {key!r}")
    means = doc["means"]
    covs = doc["covariances"]
    if len(means) != len(covs):
        raise InvalidInput("means and covariances have different lengths")
    comps = [GaussianComponent(m, c) for m, c in zip(means, covs)]
    return GaussianMixture(comps, doc["priors"])


def mixture_to_json(g: GaussianMixture) -> str:
    return json.dumps(mixture_to_dict(g), sort_keys=True)


def mixture_from_json(text: str) -> GaussianMixture:
    return mixture_from_dict(json.loads(text))
