import math

import numpy as np
import pytest

from _synth import random_mixture
from wcv.classifier import (
    ClassifierConfig,
    PseudoMixtureModel,
    _posterior_from_sq_dists,
    fit_pseudo_mixture,
    model_from_json,
    model_to_json,
    posterior,
    predict,
    pseudo_density,
)
from wcv.distributions import GaussianComponent, GaussianMixture, LabeledSample
from wcv.errors import DimensionMismatch, EmptyClass, InvalidInput
from wcv.transport import maw2


def gaussian_1d(mu, var=0.0):
    return GaussianMixture([GaussianComponent([mu], [[var]])], [1.0])


def make_model(refs_by_class, priors=None, shape=1.0, scale=1.0):
    labels = sorted(refs_by_class)
    priors = priors if priors is not None else np.full(len(labels), 1 / len(labels))
    return PseudoMixtureModel(labels, refs_by_class, priors, shape, scale)


class TestPseudoDensity:
    def test_coincident_reference(self):
        g = gaussian_1d(0.0)
        model = make_model({0: [g], 1: [gaussian_1d(100.0)]})
        assert pseudo_density(model, 0, g) == pytest.approx(1 / math.pi, abs=1e-12)

    def test_one_efold_at_scale(self):
        b = 1.0
        model = make_model({0: [gaussian_1d(0.0)], 1: [gaussian_1d(100.0)]}, scale=b)
        at_zero = pseudo_density(model, 0, gaussian_1d(0.0))
        at_b = pseudo_density(model, 0, gaussian_1d(math.sqrt(b)))  # squared distance b
        assert at_b == pytest.approx(at_zero * math.exp(-1.0), rel=1e-12)
        far = pseudo_density(model, 0, gaussian_1d(1e6))
        assert far == 0.0

    def test_two_equidistant_references_average(self):
        refs = [gaussian_1d(-1.0), gaussian_1d(1.0)]
        model2 = make_model({0: refs, 1: [gaussian_1d(100.0)]})
        model1 = make_model({0: [gaussian_1d(1.0)], 1: [gaussian_1d(100.0)]})
        q = gaussian_1d(0.0)
        assert pseudo_density(model2, 0, q) == pytest.approx(pseudo_density(model1, 0, q))

    def test_dimension_mismatch(self):
        model = make_model({0: [gaussian_1d(0.0)], 1: [gaussian_1d(1.0)]})
        g2 = GaussianMixture([GaussianComponent([0.0, 0.0], np.zeros((2, 2)))], [1.0])
        with pytest.raises(DimensionMismatch):
            pseudo_density(model, 0, g2)

    def test_monotone_in_distance(self):
        model = make_model({0: [gaussian_1d(0.0)], 1: [gaussian_1d(50.0)]})
        ds = [pseudo_density(model, 0, gaussian_1d(x)) for x in (0.0, 0.5, 1.0, 2.0)]
        assert all(a >= b for a, b in zip(ds, ds[1:]))


class TestPosterior:
    def test_uniform_when_symmetric(self):
        model = make_model({0: [gaussian_1d(-1.0)], 1: [gaussian_1d(1.0)]})
        post = posterior(model, gaussian_1d(0.0))
        np.testing.assert_allclose(post, [0.5, 0.5], atol=1e-12)

    def test_prior_only(self):
        model = make_model(
            {0: [gaussian_1d(-1.0)], 1: [gaussian_1d(1.0)]}, priors=[0.9, 0.1]
        )
        post = posterior(model, gaussian_1d(0.0))
        np.testing.assert_allclose(post, [0.9, 0.1], atol=1e-12)

    def test_coincident_far_reference(self):
        model = make_model({0: [gaussian_1d(0.0)], 1: [gaussian_1d(40.0)]}, scale=2.0)
        post = posterior(model, gaussian_1d(0.0))
        assert post[0] > 1 - 1e-12

    def test_sums_to_one_random(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            refs = {
                0: [random_mixture(rng, 2, 2) for _ in range(2)],
                1: [random_mixture(rng, 2, 2) for _ in range(3)],
            }
            model = make_model(refs, priors=rng.dirichlet([3.0, 3.0]), scale=rng.uniform(0.5, 5))
            post = posterior(model, random_mixture(rng, 2, 2))
            assert abs(post.sum() - 1.0) <= 1e-12
            assert np.all(post >= 0)

    def test_underflow_fallback_nearest_reference(self):
        model = make_model(
            {0: [gaussian_1d(0.0)], 1: [gaussian_1d(1.0)]}, scale=1e-300
        )
        post = posterior(model, gaussian_1d(0.4))
        np.testing.assert_array_equal(post, [1.0, 0.0])

    def test_scale_invariance_of_posterior(self):
        # scaling all squared distances and b by c leaves the posterior unchanged
        rng = np.random.default_rng(1)
        model = make_model({0: [gaussian_1d(0.0)], 1: [gaussian_1d(3.0)]}, scale=2.0)
        d2 = [np.array([rng.uniform(0, 5)]), np.array([rng.uniform(0, 5)])]
        base = _posterior_from_sq_dists(model, d2)
        c = 7.3
        scaled_model = make_model(
            {0: [gaussian_1d(0.0)], 1: [gaussian_1d(3.0)]}, scale=2.0 * c
        )
        scaled = _posterior_from_sq_dists(scaled_model, [v * c for v in d2])
        np.testing.assert_allclose(base, scaled, atol=1e-12)


class TestFit:
    def _train(self, labels, rng):
        return [
            LabeledSample(f"s{i}", random_mixture(rng, 2, 2), y)
            for i, y in enumerate(labels)
        ]

    def test_class_frequencies(self):
        rng = np.random.default_rng(2)
        model = fit_pseudo_mixture(self._train([0, 0, 0, 1, 1, 1], rng))
        np.testing.assert_allclose(model.priors, [0.5, 0.5])
        model = fit_pseudo_mixture(self._train([0, 1, 1, 1], rng))
        np.testing.assert_allclose(model.priors, [0.25, 0.75])

    def test_identity_projection_keeps_references(self):
        rng = np.random.default_rng(3)
        train = self._train([0, 0, 1, 1], rng)
        model = fit_pseudo_mixture(train, np.eye(2))
        for s in train:
            refs = model.class_refs[s.label]
            assert any(
                np.array_equal(r.components[0].mean, s.distribution.components[0].mean)
                for r in refs
            )

    def test_median_heuristic_hand_computed(self):
        mus = [0.0, 1.0, 3.0, 7.0]
        train = [
            LabeledSample(f"s{i}", gaussian_1d(mu), i % 2) for i, mu in enumerate(mus)
        ]
        model = fit_pseudo_mixture(train)
        d2 = [
            maw2(train[i].distribution, train[j].distribution).cost
            for i in range(4)
            for j in range(i + 1, 4)
        ]
        assert model.scale == pytest.approx(float(np.median(d2)))

    def test_shape_defaults_to_dim(self):
        rng = np.random.default_rng(4)
        train = [
            LabeledSample(f"s{i}", random_mixture(rng, 3, 2), i % 2) for i in range(4)
        ]
        assert fit_pseudo_mixture(train).shape == 3.0
        proj = np.eye(3)[:, :1]
        assert fit_pseudo_mixture(train, proj).shape == 1.0

    def test_empty_train(self):
        with pytest.raises(EmptyClass):
            fit_pseudo_mixture([])

    def test_config_validation(self):
        with pytest.raises(InvalidInput):
            ClassifierConfig(shape=-1.0)
        with pytest.raises(InvalidInput):
            ClassifierConfig(scale=0.0)

    def test_identical_references_fall_back_to_unit_scale(self):
        train = [LabeledSample(f"s{i}", gaussian_1d(0.0), i % 2) for i in range(4)]
        assert fit_pseudo_mixture(train).scale == 1.0


class TestPredict:
    def test_nearest_reference_equivalence(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            refs = {c: [random_mixture(rng, 2, 2)] for c in (0, 1, 2)}
            model = make_model(refs, priors=np.full(3, 1 / 3), scale=rng.uniform(0.5, 3))
            q = random_mixture(rng, 2, 2)
            d2 = [maw2(q, refs[c][0]).cost for c in (0, 1, 2)]
            assert predict(model, q) == int(np.argmin(d2))


class TestSerialization:
    def test_round_trip(self):
        rng = np.random.default_rng(6)
        train = [
            LabeledSample(f"s{i}", random_mixture(rng, 2, 2), i % 2) for i in range(4)
        ]
        model = fit_pseudo_mixture(train, np.eye(2)[:, :1])
        clone = model_from_json(model_to_json(model))
        assert clone.class_labels == model.class_labels
        assert clone.shape == model.shape and clone.scale == model.scale
        np.testing.assert_allclose(clone.projection, model.projection)
        q = random_mixture(rng, 2, 2)
        np.testing.assert_allclose(
            posterior(model, model.prepare(q)), posterior(clone, clone.prepare(q)), atol=1e-15
        )

    def test_bad_format_rejected(self):
        with pytest.raises(InvalidInput):
            model_from_json('{"format": "other/9"}')
