"""Synthetic dataset generators shared by the unit and acceptance tests."""
import numpy as np

from wcv.distributions import (
    DiscreteDistribution,
    GaussianComponent,
    GaussianMixture,
    LabeledSample,
    from_discrete,
)
from wcv.pipeline import DataCloud


def random_spd(rng, d, scale=1.0):
    a = rng.normal(size=(d, d))
    return scale * (a @ a.T + 0.1 * np.eye(d))


def random_psd(rng, d, rank=None):
    rank = rank if rank is not None else d
    a = rng.normal(size=(d, rank))
    return a @ a.T


def random_mixture(rng, d, m, zero_cov=False, mean_scale=1.0, cov_scale=0.3):
    means = rng.normal(0.0, mean_scale, size=(m, d))
    priors = rng.dirichlet(np.ones(m) * 5.0)
    comps = []
    for mu in means:
        cov = np.zeros((d, d)) if zero_cov else random_psd(rng, d) * cov_scale
        comps.append(GaussianComponent(mu, cov))
    return GaussianMixture(comps, priors)


def zero_cov_dataset(seed, n_per_class=5, d=5, n_points=3, shift=4.0, noise=0.5):
    """Two zero-covariance classes separated along a random unit direction."""
    rng = np.random.default_rng(seed)
    u = rng.normal(size=d)
    u /= np.linalg.norm(u)
    samples = []
    idx = 0
    for y in (0, 1):
        for _ in range(n_per_class):
            pts = rng.normal(0.0, noise, size=(n_points, d)) + shift * y * u
            q = DiscreteDistribution(pts, np.full(n_points, 1.0 / n_points))
            samples.append(LabeledSample(f"s{idx:02d}", from_discrete(q), y))
            idx += 1
    return samples, u


def planted_direction_dataset(seed, n_per_class=9, d=20, n_components=2,
                              shift=10.0, nuisance_sd=0.35, comp_spread=0.35,
                              noisy_dir_sd=9.0, cov_range=(0.8, 1.4)):
    """Two GMM classes whose conditional means differ only along a planted
    unit direction.

    Nuisance variation shared by both classes covers every coordinate, with
    one orthogonal direction carrying heavy instance-level noise; that
    direction pollutes full-dimensional distances but is removed by the
    planted one-dimensional reduction.
    """
    rng = np.random.default_rng(seed)
    u = rng.normal(size=d)
    u /= np.linalg.norm(u)
    q, _ = np.linalg.qr(np.column_stack([u, rng.normal(size=(d, 1))]))
    noisy_dir = q[:, 1]
    samples = []
    idx = 0
    for y in (0, 1):
        for _ in range(n_per_class):
            center = (
                shift * y * u
                + rng.normal(0.0, nuisance_sd, size=d)
                + noisy_dir * rng.normal(0.0, noisy_dir_sd)
            )
            comps = []
            for _ in range(n_components):
                mean = center + rng.normal(0.0, comp_spread, size=d)
                cov = np.diag(rng.uniform(*cov_range, size=d))
                comps.append(GaussianComponent(mean, cov))
            priors = np.full(n_components, 1.0 / n_components)
            samples.append(LabeledSample(f"s{idx:02d}", GaussianMixture(comps, priors), y))
            idx += 1
    return samples, u


def cloud_suite(seed, n_per_class=6, d=6, points_per_cloud=60, shift=5.0):
    """Two-class clouds with shared cluster structure and a class shift along
    the first coordinate."""
    rng = np.random.default_rng(seed)
    blob_offsets = rng.normal(0.0, 1.5, size=(3, d))
    clouds = []
    idx = 0
    for y in (0, 1):
        for _ in range(n_per_class):
            center = rng.normal(0.0, 0.3, size=d)
            center[0] += shift * y
            assign = rng.integers(0, 3, size=points_per_cloud)
            pts = center + blob_offsets[assign] + rng.normal(0.0, 0.5, size=(points_per_cloud, d))
            clouds.append(DataCloud(f"c{idx:02d}", pts, y))
            idx += 1
    return clouds
