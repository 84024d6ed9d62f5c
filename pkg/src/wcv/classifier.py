"""Distance-based pseudo-mixture classification over Gaussian mixtures.

Each class is represented by its (possibly projected) training mixtures; the
class score is an average distance kernel over those references, combined with
class priors to form a posterior. Evaluation happens in the log domain, with
the class-independent normalizing factor cancelled.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .distributions import (
    GaussianMixture,
    mixture_from_dict,
    mixture_to_dict,
    project,
)
from .errors import DimensionMismatch, EmptyClass, InvalidInput
from .transport import maw2

MODEL_FORMAT = "wcv-pmm/1"


@dataclass(frozen=True)
class ClassifierConfig:
    """Shape ``s`` and scale ``b`` of the distance kernel.

    Either may be left unset: ``s`` then defaults to the reference dimension
    and ``b`` to the median pairwise squared distance among the training
    references (the median heuristic).
    """

    shape: float | None = None
    scale: float | None = None

    def __post_init__(self):
        if self.shape is not None and self.shape <= 0:
            raise InvalidInput("shape s must be positive")
        if self.scale is not None and self.scale <= 0:
            raise InvalidInput("scale b must be positive")


class PseudoMixtureModel:
    """Fitted model: per-class reference mixtures, kernel parameters, priors."""

    def __init__(self, class_labels, class_refs, priors, shape, scale, projection=None):
        self.class_labels = tuple(int(c) for c in class_labels)
        self.class_refs = {int(c): tuple(refs) for c, refs in class_refs.items()}
        priors = np.asarray(priors, dtype=float)
        if priors.shape != (len(self.class_labels),) or abs(priors.sum() - 1.0) > 1e-9:
            raise InvalidInput("class priors must be one probability per class")
        priors = priors / priors.sum()
        priors.flags.writeable = False
        self.priors = priors
        if shape <= 0 or scale <= 0:
            raise InvalidInput("shape and scale must be positive")
        self.shape = float(shape)
        self.scale = float(scale)
        self.projection = None if projection is None else np.asarray(projection, dtype=float)

    @property
    def dim(self) -> int:
        return self.class_refs[self.class_labels[0]][0].dim

    def prepare(self, g: GaussianMixture) -> GaussianMixture:
        """Project a query mixture into the model's space if a projection is set."""
        return g if self.projection is None else project(g, self.projection)


def _sq_dists_to_refs(g: GaussianMixture, refs) -> np.ndarray:
    return np.array([maw2(g, r).cost for r in refs])


def pseudo_density(model: PseudoMixtureModel, label, g: GaussianMixture) -> float:
    """Average distance kernel of ``g`` against the references of one class."""
    label = int(label)
    if label not in model.class_refs:
        raise InvalidInput(f"unknown class label {label}")
    refs = model.class_refs[label]
    if g.dim != refs[0].dim:
        raise DimensionMismatch(
            f"query dim {g.dim} does not match reference dim {refs[0].dim}"
        )
    d2 = _sq_dists_to_refs(g, refs)
    b, s = model.scale, model.shape
    return float(np.mean((np.pi * b) ** (-s) * np.exp(-d2 / b)))


def _posterior_from_sq_dists(model: PseudoMixtureModel, d2_by_class) -> np.ndarray:
    b = model.scale
    log_post = np.empty(len(model.class_labels))
    for idx, label in enumerate(model.class_labels):
        d2 = np.asarray(d2_by_class[idx], dtype=float)
        log_post[idx] = (
            np.log(model.priors[idx]) - np.log(d2.size) + logsumexp(-d2 / b)
        )
    shift = log_post.max()
    if not np.isfinite(shift):
        # Every kernel underflowed: fall back to the nearest reference.
        nearest = min(
            range(len(model.class_labels)),
            key=lambda idx: np.min(d2_by_class[idx]),
        )
        out = np.zeros(len(model.class_labels))
        out[nearest] = 1.0
        return out
    p = np.exp(log_post - shift)
    return p / p.sum()


def posterior(model: PseudoMixtureModel, g: GaussianMixture) -> np.ndarray:
    """Posterior class probabilities for a query mixture.

    Proportional to prior times pseudo-density, evaluated in the log domain;
    the class-independent kernel normalization cancels. If every density
    underflows to zero, the nearest-reference class receives posterior one.
    """
    d2_by_class = [
        _sq_dists_to_refs(g, model.class_refs[label]) for label in model.class_labels
    ]
    return _posterior_from_sq_dists(model, d2_by_class)


def predict(model: PseudoMixtureModel, g: GaussianMixture) -> int:
    return model.class_labels[int(np.argmax(posterior(model, g)))]


def fit_pseudo_mixture(train, projection=None, config: ClassifierConfig | None = None,
                       pairwise_sq_dists=None) -> PseudoMixtureModel:
    """Fit the model on labeled samples.

    References are the training mixtures, projected if a projection is given.
    Class priors are the class frequencies. Unset kernel parameters default to
    the reference dimension (shape) and the median pairwise squared distance
    among all references (scale); ``pairwise_sq_dists`` can supply those
    distances precomputed.
    """
    train = list(train)
    if not train:
        raise EmptyClass("no training samples")
    config = config or ClassifierConfig()
    proj_matrix = None
    if projection is not None:
        proj_matrix = np.asarray(getattr(projection, "matrix", projection), dtype=float)
        if proj_matrix.ndim == 1:
            proj_matrix = proj_matrix.reshape(-1, 1)
    mixtures = [s.distribution for s in train]
    if proj_matrix is not None:
        mixtures = [project(g, proj_matrix) for g in mixtures]
    labels = [s.label for s in train]
    class_labels = sorted(set(labels))
    class_refs = {c: [g for g, y in zip(mixtures, labels) if y == c] for c in class_labels}
    priors = np.array([labels.count(c) / len(labels) for c in class_labels])

    shape = config.shape if config.shape is not None else float(mixtures[0].dim)
    scale = config.scale
    if scale is None:
        if pairwise_sq_dists is not None and proj_matrix is None:
            d2 = np.asarray(pairwise_sq_dists, dtype=float)
            iu = np.triu_indices(len(mixtures), k=1)
            vals = d2[iu]
        else:
            vals = np.array(
                [
                    maw2(mixtures[i], mixtures[j]).cost
                    for i in range(len(mixtures))
                    for j in range(i + 1, len(mixtures))
                ]
            )
        med = float(np.median(vals)) if vals.size else 0.0
        scale = med if med > 0 else 1.0
    return PseudoMixtureModel(class_labels, class_refs, priors, shape, scale, proj_matrix)


def model_to_dict(model: PseudoMixtureModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "shape": model.shape,
        "scale": model.scale,
        "class_labels": list(model.class_labels),
        "class_priors": model.priors.tolist(),
        "references": {
            str(c): [mixture_to_dict(g) for g in model.class_refs[c]]
            for c in model.class_labels
        },
        "projection": None if model.projection is None else model.projection.tolist(),
    }


def model_from_dict(doc: dict) -> PseudoMixtureModel:
    if doc.get("format") != MODEL_FORMAT:
        raise InvalidInput(f"unsupported model format {doc.get('format')!r}")
    class_labels = [int(c) for c in doc["class_labels"]]
    class_refs = {
        int(c): [mixture_from_dict(g) for g in refs]
        for c, refs in doc["references"].items()
    }
    return PseudoMixtureModel(
        class_labels,
        class_refs,
        doc["class_priors"],
        doc["shape"],
        doc["scale"],
        doc["projection"],
    )


def model_to_json(model: PseudoMixtureModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def model_from_json(text: str) -> PseudoMixtureModel:
    return model_from_dict(json.loads(text))
