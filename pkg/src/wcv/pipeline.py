"""End-to-end experiment harness.

Data-cloud ingestion from CSV, mixture construction under the combined and
separate clustering schemes, leave-one-out evaluation with accuracy and AUC,
cross-representation robustness grids, and per-iteration diagnostics.
"""
from __future__ import annotations

import csv
import math
import warnings
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import rankdata

from . import classifier as _classifier
from . import otaf as _otaf
from .distributions import GaussianComponent, GaussianMixture, LabeledSample
from .errors import (
    DimensionMismatch,
    EmptyCloud,
    EmptyPairSet,
    IdMismatch,
    InvalidInput,
    SingletonClass,
)
from .transport import pairwise_maw_sq


@dataclass(frozen=True)
class DataCloud:
    """An instance given as an unordered set of points in R^d plus a label."""

    id: str
    points: np.ndarray
    label: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise EmptyCloud(f"cloud {self.id!r} has no points")
        if not np.all(np.isfinite(pts)):
            raise InvalidInput(f"cloud {self.id!r} has non-finite points")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "label", int(self.label))

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class GmmBuildConfig:
    """How clouds become mixtures.

    ``scheme`` is "combined" (pool all points, cluster once) or "separate"
    (cluster each cloud on its own). Clouds smaller than
    ``small_sample_threshold`` become a single Gaussian; a single point gets
    its covariance from ten copies perturbed with Gaussian noise of sd
    ``perturbation_sd``.
    """

    scheme: str = "separate"
    components: int = 3
    small_sample_threshold: int = 10
    perturbation_sd: float = 0.1
    rng_seed: int = 0

    def __post_init__(self):
        if self.scheme not in ("combined", "separate"):
            raise InvalidInput(f"unknown scheme {self.scheme!r}")
        if self.components < 1:
            raise InvalidInput("components must be >= 1")
        if self.small_sample_threshold < 2:
            raise InvalidInput("small_sample_threshold must be >= 2")
        if self.perturbation_sd <= 0:
            raise InvalidInput("perturbation_sd must be positive")


def kmeans(points, k: int, seed=0, max_iters: int = 300):
    """Lloyd's algorithm with k-means++ seeding and a fixed rng seed.

    Runs until the assignment reaches a fixed point or ``max_iters`` passes.
    An empty cluster is re-seeded with the point farthest from its assigned
    centroid (never emptying another cluster). ``k`` larger than the point
    count is reduced to it.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    n = x.shape[0]
    if n == 0:
        raise InvalidInput("kmeans needs at least one point")
    if k < 1:
        raise InvalidInput("k must be >= 1")
    k = min(k, n)
    rng = np.random.default_rng(seed)

    centroids = np.empty((k, x.shape[1]))
    centroids[0] = x[int(rng.integers(n))]
    closest = cdist(x, centroids[:1], "sqeuclidean").ravel()
    for c in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            idx = int(rng.integers(n))
        centroids[c] = x[idx]
        closest = np.minimum(closest, cdist(x, centroids[c : c + 1], "sqeuclidean").ravel())

    labels = np.full(n, -1)
    for _ in range(max_iters):
        d2 = cdist(x, centroids, "sqeuclidean")
        new_labels = d2.argmin(axis=1)
        for c in range(k):
            if np.any(new_labels == c):
                continue
            counts = np.bincount(new_labels, minlength=k)
            movable = np.flatnonzero(counts[new_labels] > 1)
            assigned = d2[movable, new_labels[movable]]
            donor = movable[int(np.argmax(assigned))]
            new_labels[donor] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centroids = np.array([x[labels == c].mean(axis=0) for c in range(k)])
    return labels, centroids


def assign_to_centroids(points, centroids) -> np.ndarray:
    """Nearest-centroid labels, ties to the lowest cluster index."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    return cdist(x, np.asarray(centroids, dtype=float), "sqeuclidean").argmin(axis=1)


def _id_seed(cloud_id: str) -> int:
    # Stable across processes, unlike hash().
    return zlib.crc32(cloud_id.encode("utf-8"))


def _cloud_rng(cfg: GmmBuildConfig, cloud_id: str) -> np.random.Generator:
    return np.random.default_rng([cfg.rng_seed, _id_seed(cloud_id), 1])


def _perturbation_cov(rng, point: np.ndarray, sd: float) -> np.ndarray:
    pts = point + rng.normal(0.0, sd, size=(10, point.size))
    return np.cov(pts, rowvar=False, ddof=1).reshape(point.size, point.size)


def _moment_component(pts: np.ndarray, rng, sd: float) -> GaussianComponent:
    mean = pts.mean(axis=0)
    if pts.shape[0] >= 2:
        cov = np.cov(pts, rowvar=False, ddof=1).reshape(pts.shape[1], pts.shape[1])
    else:
        cov = _perturbation_cov(rng, pts[0], sd)
    return GaussianComponent(mean, cov)


def _cloud_gmm(points: np.ndarray, cluster_labels, cfg: GmmBuildConfig, rng) -> GaussianMixture:
    n = points.shape[0]
    if cluster_labels is None:
        return GaussianMixture([_moment_component(points, rng, cfg.perturbation_sd)], [1.0])
    comps, priors = [], []
    for c in np.unique(cluster_labels):
        pts = points[cluster_labels == c]
        comps.append(_moment_component(pts, rng, cfg.perturbation_sd))
        priors.append(pts.shape[0] / n)
    return GaussianMixture(comps, priors)


def _build_with_partition(clouds, cfg: GmmBuildConfig):
    """Build mixtures; for the combined scheme also return the shared centroids."""
    clouds = list(clouds)
    if not clouds:
        raise InvalidInput("no clouds")
    d = clouds[0].dim
    for c in clouds:
        if c.dim != d:
            raise DimensionMismatch("clouds mix dimensions")
    centroids = None
    pooled_labels = None
    if cfg.scheme == "combined":
        pooled = np.vstack([c.points for c in clouds])
        k = min(cfg.components, pooled.shape[0])
        all_labels, centroids = kmeans(pooled, k, seed=cfg.rng_seed)
        pooled_labels = []
        offset = 0
        for c in clouds:
            pooled_labels.append(all_labels[offset : offset + c.points.shape[0]])
            offset += c.points.shape[0]
    samples = []
    for idx, cloud in enumerate(clouds):
        rng = _cloud_rng(cfg, cloud.id)
        n_i = cloud.points.shape[0]
        if n_i < cfg.small_sample_threshold:
            gmm = _cloud_gmm(cloud.points, None, cfg, rng)
        else:
            if cfg.scheme == "separate":
                k_i = min(cfg.components, n_i)
                if k_i < cfg.components:
                    warnings.warn(
                        f"cloud {cloud.id!r}: components reduced to {k_i} "
                        f"(only {n_i} points)"
                    )
                labels_i, _ = kmeans(
                    cloud.points, k_i, seed=[cfg.rng_seed, _id_seed(cloud.id)]
                )
            else:
                labels_i = pooled_labels[idx]
            gmm = _cloud_gmm(cloud.points, labels_i, cfg, rng)
        samples.append(LabeledSample(cloud.id, gmm, cloud.label))
    return samples, centroids


def build_gmms(clouds, cfg: GmmBuildConfig):
    """One labeled mixture per cloud under the configured clustering scheme.

    Combined scheme: clusters with no points from a given cloud are omitted
    from that cloud's mixture, so its priors (within-cloud proportions) still
    sum to one.
    """
    return _build_with_partition(clouds, cfg)[0]


def represent_cloud(cloud: DataCloud, centroids, cfg: GmmBuildConfig) -> LabeledSample:
    """Represent a held-out cloud using an already-fitted partition.

    Under the combined scheme the cloud's points are assigned to the training
    centroids rather than re-pooled; the separate scheme clusters the cloud on
    its own (no training information needed). Small-sample rules match
    ``build_gmms``.
    """
    rng = _cloud_rng(cfg, cloud.id)
    n = cloud.points.shape[0]
    if n < cfg.small_sample_threshold:
        gmm = _cloud_gmm(cloud.points, None, cfg, rng)
    elif cfg.scheme == "combined":
        labels = assign_to_centroids(cloud.points, centroids)
        gmm = _cloud_gmm(cloud.points, labels, cfg, rng)
    else:
        k = min(cfg.components, n)
        labels, _ = kmeans(cloud.points, k, seed=[cfg.rng_seed, _id_seed(cloud.id)])
        gmm = _cloud_gmm(cloud.points, labels, cfg, rng)
    return LabeledSample(cloud.id, gmm, cloud.label)


def top_variable_indices(clouds, k: int) -> np.ndarray:
    """Indices of the k highest-variance coordinates over the pooled points."""
    clouds = list(clouds)
    if not clouds:
        raise InvalidInput("no clouds")
    d = clouds[0].dim
    if k > d:
        raise InvalidInput(f"k={k} exceeds dimension {d}")
    pooled = np.vstack([c.points for c in clouds])
    variances = pooled.var(axis=0)
    order = np.argsort(-variances, kind="stable")[:k]
    return np.sort(order)


def select_top_variable_features(clouds, k: int):
    """Restrict every cloud to the k most variable coordinates (pooled ranking).

    Ties rank by ascending coordinate index; the kept coordinates stay in
    their original order.
    """
    keep = top_variable_indices(clouds, k)
    return [DataCloud(c.id, c.points[:, keep], c.label) for c in clouds]


def rank_auc(scores, is_positive) -> float | None:
    """Mann-Whitney AUC from ranks; tied score pairs count one half."""
    scores = np.asarray(scores, dtype=float)
    is_positive = np.asarray(is_positive, dtype=bool)
    n_pos = int(is_positive.sum())
    n_neg = scores.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = rankdata(scores)
    return float((ranks[is_positive].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def positive_label(class_labels) -> int:
    """Scoring class for binary AUC: label 1 when present, else the largest."""
    labels = sorted(class_labels)
    return 1 if 1 in labels else labels[-1]


@dataclass(frozen=True)
class FoldRecord:
    id: str
    true_label: int
    posterior: tuple
    predicted_label: int


@dataclass
class EvaluationReport:
    """Per-fold predictions plus aggregate accuracy/AUC and fit diagnostics."""

    class_labels: list
    per_fold: list
    skipped: list
    accuracy: float | None
    auc: float | None
    fisher_traces: dict = field(default_factory=dict)
    grassmann_traces: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format": "wcv-report/1",
            "class_labels": list(self.class_labels),
            "positive_label": positive_label(self.class_labels)
            if len(self.class_labels) == 2
            else None,
            "accuracy": self.accuracy,
            "auc": self.auc,
            "per_fold": [
                {
                    "id": r.id,
                    "true_label": r.true_label,
                    "posterior": list(r.posterior),
                    "predicted_label": r.predicted_label,
                }
                for r in self.per_fold
            ],
            "skipped": [{"id": i, "reason": why} for i, why in self.skipped],
            "fisher_traces": {k: list(v) for k, v in self.fisher_traces.items()},
            "grassmann_traces": {k: list(v) for k, v in self.grassmann_traces.items()},
            "config": self.config,
        }


def _aggregate_auc(records, class_labels) -> float | None:
    if not records:
        return None
    labels = np.array([r.true_label for r in records])
    posteriors = np.array([r.posterior for r in records])
    classes = list(class_labels)
    if len(classes) == 2:
        pos = positive_label(classes)
        return rank_auc(posteriors[:, classes.index(pos)], labels == pos)
    values = []
    for idx, c in enumerate(classes):
        auc = rank_auc(posteriors[:, idx], labels == c)
        if auc is not None:
            values.append(auc)
    return float(np.mean(values)) if values else None


def _evaluate_records(records):
    if not records:
        return None
    correct = sum(1 for r in records if r.predicted_label == r.true_label)
    return correct / len(records)


def _fit_fold(train, otaf_cfg, classifier_cfg, sub_d2, threads):
    """Fit reduction (optional) and classifier on one training fold."""
    otaf_result = None
    if otaf_cfg is not None:
        otaf_result = _otaf.fit(train, otaf_cfg, pairwise_sq_dists=sub_d2, threads=threads)
        model = _classifier.fit_pseudo_mixture(
            train, otaf_result.projection, classifier_cfg
        )
    else:
        model = _classifier.fit_pseudo_mixture(
            train, None, classifier_cfg, pairwise_sq_dists=sub_d2
        )
    return model, otaf_result


def _score_sample(model, sample, fast_d2_row=None, train_labels=None):
    if fast_d2_row is not None:
        d2_by_class = [
            fast_d2_row[np.asarray(train_labels) == c] for c in model.class_labels
        ]
        post = _classifier._posterior_from_sq_dists(model, d2_by_class)
    else:
        post = _classifier.posterior(model, model.prepare(sample.distribution))
    pred = model.class_labels[int(np.argmax(post))]
    return FoldRecord(sample.id, sample.label, tuple(float(x) for x in post), pred)


def leave_one_out(samples, otaf_cfg=None, classifier_cfg=None, threads: int = 1,
                  config_echo=None) -> EvaluationReport:
    """Leave-one-out evaluation over labeled mixtures.

    Per fold: pair selection and the reduction are re-fit on the n-1 training
    instances (the held-out label never reaches either fit), the classifier is
    fit on the projected training mixtures, and the held-out instance is
    scored in the projected space. Folds whose training set loses a class are
    skipped and flagged.
    """
    samples = list(samples)
    n = len(samples)
    labels = [s.label for s in samples]
    classes = sorted(set(labels))
    if n < len(classes) + 1:
        raise InvalidInput("need at least one more sample than there are classes")
    if len({s.id for s in samples}) != n:
        raise InvalidInput("sample ids must be unique")
    d2 = pairwise_maw_sq([s.distribution for s in samples], threads=threads)
    per_fold, skipped = [], []
    fisher_traces, grassmann_traces = {}, {}
    for h in range(n):
        train_idx = np.array([i for i in range(n) if i != h])
        train = [samples[i] for i in train_idx]
        if sorted(set(s.label for s in train)) != classes:
            skipped.append((samples[h].id, "training fold is missing a class"))
            continue
        sub_d2 = d2[np.ix_(train_idx, train_idx)]
        try:
            model, otaf_result = _fit_fold(train, otaf_cfg, classifier_cfg, sub_d2, threads)
        except (SingletonClass, EmptyPairSet) as exc:
            skipped.append((samples[h].id, f"degenerate training fold: {exc}"))
            continue
        if otaf_result is not None:
            fisher_traces[samples[h].id] = list(otaf_result.fisher_trace)
            grassmann_traces[samples[h].id] = list(otaf_result.grassmann_trace)
            record = _score_sample(model, samples[h])
        else:
            record = _score_sample(
                model,
                samples[h],
                fast_d2_row=d2[h, train_idx],
                train_labels=[s.label for s in train],
            )
        per_fold.append(record)
    return EvaluationReport(
        class_labels=classes,
        per_fold=per_fold,
        skipped=skipped,
        accuracy=_evaluate_records(per_fold),
        auc=_aggregate_auc(per_fold, classes),
        fisher_traces=fisher_traces,
        grassmann_traces=grassmann_traces,
        config=dict(config_echo or {}),
    )


def leave_one_out_clouds(clouds, gmm_cfg: GmmBuildConfig, otaf_cfg=None,
                         classifier_cfg=None, threads: int = 1,
                         config_echo=None) -> EvaluationReport:
    """Leave-one-out starting from raw clouds.

    Mixtures are rebuilt per fold from the training clouds only; the held-out
    cloud is represented with the training fold's partitioning rules (nearest
    training centroid under the combined scheme), so no held-out points leak
    into the pooled clustering.
    """
    clouds = list(clouds)
    n = len(clouds)
    labels = [c.label for c in clouds]
    classes = sorted(set(labels))
    if n < len(classes) + 1:
        raise InvalidInput("need at least one more cloud than there are classes")
    if len({c.id for c in clouds}) != n:
        raise InvalidInput("cloud ids must be unique")
    per_fold, skipped = [], []
    fisher_traces, grassmann_traces = {}, {}
    for h in range(n):
        train_clouds = [clouds[i] for i in range(n) if i != h]
        if sorted(set(c.label for c in train_clouds)) != classes:
            skipped.append((clouds[h].id, "training fold is missing a class"))
            continue
        train, centroids = _build_with_partition(train_clouds, gmm_cfg)
        held_out = represent_cloud(clouds[h], centroids, gmm_cfg)
        sub_d2 = pairwise_maw_sq([s.distribution for s in train], threads=threads)
        try:
            model, otaf_result = _fit_fold(train, otaf_cfg, classifier_cfg, sub_d2, threads)
        except (SingletonClass, EmptyPairSet) as exc:
            skipped.append((clouds[h].id, f"degenerate training fold: {exc}"))
            continue
        if otaf_result is not None:
            fisher_traces[clouds[h].id] = list(otaf_result.fisher_trace)
            grassmann_traces[clouds[h].id] = list(otaf_result.grassmann_trace)
        per_fold.append(_score_sample(model, held_out))
    return EvaluationReport(
        class_labels=classes,
        per_fold=per_fold,
        skipped=skipped,
        accuracy=_evaluate_records(per_fold),
        auc=_aggregate_auc(per_fold, classes),
        fisher_traces=fisher_traces,
        grassmann_traces=grassmann_traces,
        config=dict(config_echo or {}),
    )


@dataclass
class CrossRepresentationResult:
    """Grids of accuracy and AUC: entry [i][j] trains on representation i and
    scores held-out instances drawn from representation j."""

    class_labels: list
    accuracy: list
    auc: list
    skipped: list


def cross_representation_eval(representations, otaf_cfg=None, classifier_cfg=None,
                              threads: int = 1) -> CrossRepresentationResult:
    """Leave-one-out across alternate mixture representations of the same
    instances.

    For each training representation the per-fold fits are shared across all
    test representations; the diagonal therefore reduces to plain
    leave-one-out.
    """
    reps = [list(r) for r in representations]
    if not reps:
        raise InvalidInput("no representations")
    n = len(reps[0])
    ids = [s.id for s in reps[0]]
    labels = [s.label for s in reps[0]]
    dim = reps[0][0].distribution.dim
    for r in reps:
        if [s.id for s in r] != ids or [s.label for s in r] != labels:
            raise IdMismatch("representations disagree on instance ids or labels")
        for s in r:
            if s.distribution.dim != dim:
                raise DimensionMismatch("representations mix ambient dimensions")
    classes = sorted(set(labels))
    n_reps = len(reps)
    records = [[[] for _ in range(n_reps)] for _ in range(n_reps)]
    skipped = []
    for i in range(n_reps):
        d2 = pairwise_maw_sq([s.distribution for s in reps[i]], threads=threads)
        for h in range(n):
            train_idx = np.array([t for t in range(n) if t != h])
            train = [reps[i][t] for t in train_idx]
            if sorted(set(s.label for s in train)) != classes:
                if i == 0:
                    skipped.append((ids[h], "training fold is missing a class"))
                continue
            sub_d2 = d2[np.ix_(train_idx, train_idx)]
            try:
                model, _ = _fit_fold(train, otaf_cfg, classifier_cfg, sub_d2, threads)
            except (SingletonClass, EmptyPairSet) as exc:
                if i == 0:
                    skipped.append((ids[h], f"degenerate training fold: {exc}"))
                continue
            for j in range(n_reps):
                records[i][j].append(_score_sample(model, reps[j][h]))
    accuracy = [[_evaluate_records(records[i][j]) for j in range(n_reps)] for i in range(n_reps)]
    auc = [[_aggregate_auc(records[i][j], classes) for j in range(n_reps)] for i in range(n_reps)]
    return CrossRepresentationResult(classes, accuracy, auc, skipped)


def _parse_float_row(row, path, line_no):
    try:
        return [float(x) for x in row]
    except ValueError as exc:
        raise InvalidInput(f"{path}:{line_no}: {exc}") from None


def _read_points_csv(path) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line_no, row in enumerate(reader, start=1):
            row = [x for x in row if x.strip() != ""]
            if not row:
                continue
            if line_no == 1:
                try:
                    rows.append([float(x) for x in row])
                except ValueError:
                    continue  # header line
            else:
                rows.append(_parse_float_row(row, path, line_no))
    if not rows:
        raise InvalidInput(f"{path}: no numeric rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidInput(f"{path}: rows have inconsistent widths {sorted(widths)}")
    return np.array(rows)


def load_manifest(path) -> list:
    """Clouds from a manifest CSV with columns id, path, label.

    Instance paths are resolved relative to the manifest's directory. Each
    instance file holds one point per row (an optional header is skipped).
    """
    path = Path(path)
    clouds = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InvalidInput(f"{path}: empty manifest")
        cols = [c.strip().lower() for c in header]
        for name in ("id", "path", "label"):
            if name not in cols:
                raise InvalidInput(f"{path}: manifest is missing column {name!r}")
        idx = {name: cols.index(name) for name in ("id", "path", "label")}
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not x.strip() for x in row):
                continue
            try:
                label = int(row[idx["label"]])
            except (ValueError, IndexError):
                raise InvalidInput(f"{path}:{line_no}: bad label") from None
            file_path = path.parent / row[idx["path"]].strip()
            clouds.append(
                DataCloud(row[idx["id"]].strip(), _read_points_csv(file_path), label)
            )
    if not clouds:
        raise InvalidInput(f"{path}: manifest lists no instances")
    return clouds


def load_long_csv(path) -> list:
    """Clouds from one long-format CSV with columns id, label, then features.

    Rows sharing an id form one cloud, in first-seen order; conflicting labels
    for the same id are rejected.
    """
    path = Path(path)
    groups: dict = {}
    order = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InvalidInput(f"{path}: empty file")
        cols = [c.strip().lower() for c in header]
        if "id" not in cols or "label" not in cols:
            raise InvalidInput(f"{path}: long-format CSV needs id and label columns")
        id_col, label_col = cols.index("id"), cols.index("label")
        feature_cols = [i for i in range(len(cols)) if i not in (id_col, label_col)]
        if not feature_cols:
            raise InvalidInput(f"{path}: no feature columns")
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not x.strip() for x in row):
                continue
            cid = row[id_col].strip()
            try:
                label = int(row[label_col])
            except ValueError:
                raise InvalidInput(f"{path}:{line_no}: bad label") from None
            feats = _parse_float_row([row[i] for i in feature_cols], path, line_no)
            if cid not in groups:
                groups[cid] = (label, [])
                order.append(cid)
            elif groups[cid][0] != label:
                raise InvalidInput(f"{path}:{line_no}: id {cid!r} has conflicting labels")
            groups[cid][1].append(feats)
    if not order:
        raise InvalidInput(f"{path}: no data rows")
    return [DataCloud(cid, np.array(groups[cid][1]), groups[cid][0]) for cid in order]


def trace_rows(fisher_trace, grassmann_trace):
    """Tidy (iteration, fisher, grassmann) rows; the subspace drift compares
    consecutive projection updates, so it is empty before iteration 3."""
    rows = []
    for t, rho in enumerate(fisher_trace, start=1):
        g = grassmann_trace[t - 3] if 3 <= t <= len(grassmann_trace) + 2 else None
        rows.append((t, float(rho), None if g is None else float(g)))
    return rows
