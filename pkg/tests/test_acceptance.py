"""Acceptance suite: one test per criterion, tolerances pinned.

Each test prints a PASS line on success; the conftest terminal-summary hook
repeats one line per criterion at the end of the run.
"""
import json
import time

import numpy as np
import pytest

from _oracles import (
    auc_pairwise,
    brute_force_ot_cost,
    monotone_coupling_cost,
    random_coupling,
    rayleigh_oracle,
)
from _synth import (
    cloud_suite,
    planted_direction_dataset,
    random_mixture,
    random_spd,
    zero_cov_dataset,
)
from wcv.classifier import PseudoMixtureModel, posterior, predict
from wcv.cli import main as cli_main
from wcv.distributions import (
    DiscreteDistribution,
    GaussianComponent,
    from_discrete,
    LabeledSample,
)
from wcv.otaf import OtafConfig, PairSets, fit, scatter_matrices, solve_directions, fisher_ratio
from wcv.pipeline import GmmBuildConfig, build_gmms, cross_representation_eval, leave_one_out, rank_auc
from wcv.transport import Coupling, gaussian_w2, gaussian_what2, maw2, solve_ot, wasserstein2_discrete


def _report(name, detail=""):
    print(f"ACCEPTANCE {name}: PASS {detail}")


def test_c01_ot_correctness():
    """solve_ot matches vertex enumeration on 200 random instances and the
    1D monotone-coupling oracle; under 10 seconds."""
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for _ in range(200):
        m1, m2 = rng.integers(1, 5, size=2)
        cost = rng.random((m1, m2)) * rng.uniform(0.1, 50)
        p = rng.dirichlet(np.ones(m1))
        q = rng.dirichlet(np.ones(m2))
        res = solve_ot(cost, p, q)
        oracle = brute_force_ot_cost(cost, p, q)
        assert abs(res.cost - oracle) <= 1e-8
    for _ in range(100):
        m1, m2 = rng.integers(1, 7, size=2)
        x1, x2 = rng.normal(size=m1) * 3, rng.normal(size=m2) * 3
        w1 = rng.dirichlet(np.ones(m1))
        w2 = rng.dirichlet(np.ones(m2))
        res = wasserstein2_discrete(
            DiscreteDistribution(x1, w1), DiscreteDistribution(x2, w2)
        )
        oracle = monotone_coupling_cost(x1, w1, x2, w2)
        assert abs(res.cost - oracle) <= 1e-12 * max(1.0, abs(oracle))
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report("C1 ot-correctness", f"({elapsed:.2f}s)")


def test_c02_gaussian_w2_closed_form():
    """1D pairs match (mu1-mu2)^2 + (sd1-sd2)^2 to 1e-10; d<=5 pairs satisfy
    the independence upper bound to 1e-8."""
    rng = np.random.default_rng(102)
    for _ in range(100):
        mu1, mu2 = rng.normal(size=2) * 4
        v1, v2 = rng.uniform(1e-4, 9.0, size=2)
        c1 = GaussianComponent([mu1], [[v1]])
        c2 = GaussianComponent([mu2], [[v2]])
        expected = (mu1 - mu2) ** 2 + (np.sqrt(v1) - np.sqrt(v2)) ** 2
        assert abs(gaussian_w2(c1, c2) - expected) <= 1e-10
    for _ in range(100):
        d = int(rng.integers(1, 6))
        a1 = rng.normal(size=(d, d))
        a2 = rng.normal(size=(d, d))
        c1 = GaussianComponent(rng.normal(size=d) * 2, a1 @ a1.T)
        c2 = GaussianComponent(rng.normal(size=d) * 2, a2 @ a2.T)
        assert gaussian_what2(c1, c2) >= gaussian_w2(c1, c2) - 1e-8
    _report("C2 gaussian-w2-closed-form")


def test_c03_degenerate_equivalence():
    """Zero-covariance mixtures: maw2 equals the discrete distance to 1e-10
    and the scatter matrices equal the support-point construction to 1e-12."""
    rng = np.random.default_rng(103)
    for _ in range(50):
        d = int(rng.integers(1, 5))
        m1, m2 = rng.integers(1, 5, size=2)
        q1 = DiscreteDistribution(rng.normal(size=(m1, d)) * 2, rng.dirichlet(np.ones(m1)))
        q2 = DiscreteDistribution(rng.normal(size=(m2, d)) * 2, rng.dirichlet(np.ones(m2)))
        mixture_cost = maw2(from_discrete(q1), from_discrete(q2)).cost
        discrete_cost = wasserstein2_discrete(q1, q2).cost
        assert abs(mixture_cost - discrete_cost) <= 1e-10

    for _ in range(20):
        d = int(rng.integers(2, 5))
        supports, samples = [], []
        for i in range(4):
            m = int(rng.integers(1, 4))
            pts = rng.normal(size=(m, d))
            w = rng.dirichlet(np.ones(m))
            supports.append((pts, w))
            samples.append(
                LabeledSample(f"s{i}", from_discrete(DiscreteDistribution(pts, w)), i % 2)
            )
        pairs = PairSets(((0, 1), (2, 3)), ((0, 2), (1, 3)))
        couplings = {}
        for k1, k2 in pairs.between + pairs.within:
            w1, w2 = supports[k1][1], supports[k2][1]
            couplings[(k1, k2)] = Coupling(random_coupling(rng, w1, w2), w1, w2)
        cb, cw = scatter_matrices(samples, pairs, couplings)

        def support_construction(pair_list):
            acc = np.zeros((d, d))
            for k1, k2 in pair_list:
                x1, x2 = supports[k1][0], supports[k2][0]
                pi = couplings[(k1, k2)].matrix
                for i in range(x1.shape[0]):
                    for j in range(x2.shape[0]):
                        diff = x1[i] - x2[j]
                        acc += pi[i, j] * np.outer(diff, diff)
            return acc / len(pair_list)

        np.testing.assert_allclose(cb.entries, support_construction(pairs.between), atol=1e-12)
        np.testing.assert_allclose(cw.entries, support_construction(pairs.within), atol=1e-12)
    _report("C3 degenerate-equivalence")


def test_c04_trace_identities():
    """Directly summed between/within variations equal tr(A^t C A) to 1e-8
    relative, for random samples, couplings, and projections."""
    rng = np.random.default_rng(104)
    for _ in range(25):
        d = int(rng.integers(2, 7))
        dprime = int(rng.integers(1, min(3, d) + 1))
        zero_cov = bool(rng.integers(2))
        samples = []
        for i in range(4):
            m = int(rng.integers(1, 4))
            samples.append(
                LabeledSample(f"s{i}", random_mixture(rng, d, m, zero_cov=zero_cov), i % 2)
            )
        pairs = PairSets(((0, 1), (2, 3), (0, 3)), ((0, 2), (1, 3)))
        couplings = {}
        for k1, k2 in pairs.between + pairs.within:
            g1 = samples[k1].distribution
            g2 = samples[k2].distribution
            couplings[(k1, k2)] = Coupling(
                random_coupling(rng, g1.priors, g2.priors), g1.priors, g2.priors
            )
        a = rng.normal(size=(d, dprime))
        cb, cw = scatter_matrices(samples, pairs, couplings)

        def direct_sum(pair_list):
            total = 0.0
            for k1, k2 in pair_list:
                g1, g2 = samples[k1].distribution, samples[k2].distribution
                pi = couplings[(k1, k2)].matrix
                for i, ci in enumerate(g1.components):
                    for j, cj in enumerate(g2.components):
                        dmu = a.T @ (ci.mean - cj.mean)
                        val = float(dmu @ dmu)
                        val += float(np.trace(a.T @ ci.covariance @ a))
                        val += float(np.trace(a.T @ cj.covariance @ a))
                        total += pi[i, j] * val
            return total / len(pair_list)

        for c, pair_list in ((cb, pairs.between), (cw, pairs.within)):
            trace_form = float(np.trace(a.T @ c.entries @ a))
            direct = direct_sum(pair_list)
            assert abs(direct - trace_form) <= 1e-8 * max(1.0, abs(trace_form))
    _report("C4 trace-identities")


def test_c05_rayleigh_ritz_solve():
    """solve_directions with d'=1 reaches the multi-start/grid oracle ratio
    within 1e-6 on 100 random SPD pairs."""
    rng = np.random.default_rng(105)
    for trial in range(100):
        d = int(rng.integers(2, 7))
        cb = random_spd(rng, d)
        cw = random_spd(rng, d)
        proj = solve_directions(cb, cw, 1)
        achieved = fisher_ratio(cb, cw, proj.matrix)
        oracle = rayleigh_oracle(cb, cw, seed=trial, n_starts=10)
        assert achieved >= oracle - 1e-6
        assert abs(achieved - oracle) <= 1e-6 * max(1.0, oracle)
    _report("C5 rayleigh-ritz")


def test_c06_empirical_ascent():
    """On 50 synthetic zero-covariance datasets with d'=1 the ratio never
    drops by more than 1e-10 per iteration and the run converges within 20."""
    for seed in range(50):
        samples, _ = zero_cov_dataset(seed)
        res = fit(samples, OtafConfig(reduced_dim=1, max_iters=20, epsilon=1e-4))
        trace = np.array(res.fisher_trace)
        assert np.all(np.diff(trace) >= -1e-10), f"seed {seed}: ratio decreased"
        assert res.converged and res.iterations <= 20, f"seed {seed}: no convergence"
    _report("C6 empirical-ascent")


@pytest.mark.slow
def test_c07_direction_recovery():
    """Planted-direction recovery in R^20 and the reduction's LOOCV AUC vs the
    original-space model, over 50 seeds; under 5 minutes."""
    start = time.perf_counter()
    cfg = OtafConfig(reduced_dim=1, max_iters=15)
    aligned = 0
    auc_not_worse = 0
    for seed in range(50):
        samples, u = planted_direction_dataset(seed)
        res = fit(samples, cfg)
        a = res.projection.matrix.ravel()
        if abs(a @ u) / np.linalg.norm(a) > 0.95:
            aligned += 1
        reduced = leave_one_out(samples, cfg)
        original = leave_one_out(samples, otaf_cfg=None)
        if reduced.auc >= original.auc:
            auc_not_worse += 1
    elapsed = time.perf_counter() - start
    assert aligned >= 45, f"only {aligned}/50 seeds recovered the planted direction"
    assert auc_not_worse >= 45, f"reduction improved AUC in only {auc_not_worse}/50 seeds"
    assert elapsed < 300.0
    _report("C7 direction-recovery", f"({aligned}/50 aligned, {auc_not_worse}/50 auc, {elapsed:.0f}s)")


def test_c08_classifier_sanity():
    """Posterior normalization, nearest-reference equivalence, and the rank
    AUC against pairwise brute force."""
    rng = np.random.default_rng(108)
    for _ in range(50):
        n_classes = int(rng.integers(2, 4))
        refs = {
            c: [random_mixture(rng, 2, 2) for _ in range(int(rng.integers(1, 3)))]
            for c in range(n_classes)
        }
        model = PseudoMixtureModel(
            list(range(n_classes)),
            refs,
            rng.dirichlet(np.ones(n_classes) * 4),
            shape=rng.uniform(0.5, 3),
            scale=rng.uniform(0.2, 4),
        )
        post = posterior(model, random_mixture(rng, 2, 2))
        assert abs(post.sum() - 1.0) <= 1e-12

    for _ in range(30):
        refs = {c: [random_mixture(rng, 2, 2)] for c in range(3)}
        model = PseudoMixtureModel(
            [0, 1, 2], refs, np.full(3, 1 / 3), shape=2.0, scale=rng.uniform(0.3, 3)
        )
        query = random_mixture(rng, 2, 2)
        d2 = [maw2(query, refs[c][0]).cost for c in range(3)]
        assert predict(model, query) == int(np.argmin(d2))

    for _ in range(100):
        n = int(rng.integers(4, 40))
        scores = rng.choice(np.linspace(0, 1, 7), size=n)
        positive = rng.random(n) < 0.5
        if positive.all() or not positive.any():
            continue
        assert rank_auc(scores, positive) == pytest.approx(
            auc_pairwise(scores, positive), abs=1e-12
        )
    _report("C8 classifier-sanity")


def test_c09_robustness_grid():
    """Cross-representation grid over components {3, 5} and both clustering
    schemes: off-diagonal AUC within 0.1 of the diagonal on >= 90% of cells."""
    clouds = cloud_suite(0)
    reps = []
    for scheme in ("separate", "combined"):
        for zeta in (3, 5):
            cfg = GmmBuildConfig(scheme=scheme, components=zeta, rng_seed=0)
            reps.append(build_gmms(clouds, cfg))
    grid = cross_representation_eval(reps, OtafConfig(reduced_dim=1, max_iters=10))
    auc = np.array(grid.auc, dtype=float)
    n_reps = len(reps)
    cells = [
        abs(auc[i][j] - auc[i][i]) <= 0.1
        for i in range(n_reps)
        for j in range(n_reps)
        if i != j
    ]
    frac = sum(cells) / len(cells)
    assert frac >= 0.9, f"only {sum(cells)}/{len(cells)} off-diagonal cells within 0.1"
    _report("C9 robustness-grid", f"({sum(cells)}/{len(cells)} cells)")


def test_c10_determinism(tmp_path):
    """Two cmd_evaluate runs with the same config and seed produce
    byte-identical report files."""
    rng = np.random.default_rng(110)
    for c in cloud_suite(5, n_per_class=4, points_per_cloud=30):
        lines = [",".join(repr(float(v)) for v in row) for row in c.points]
        (tmp_path / f"{c.id}.csv").write_text("\n".join(lines) + "\n")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text(
        "id,path,label\n"
        + "\n".join(
            f"{c.id},{c.id}.csv,{c.label}" for c in cloud_suite(5, n_per_class=4, points_per_cloud=30)
        )
        + "\n"
    )
    argv = [
        "evaluate", "--manifest", str(manifest), "--scheme", "combined",
        "--components", "3", "--dims", "1", "--max-iters", "8",
        "--seed", "42", "--threads", "2",
    ]
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    assert cli_main(argv + ["--out", str(out1)]) == 0
    assert cli_main(argv + ["--out", str(out2)]) == 0
    r1 = (out1 / "report.json").read_bytes()
    r2 = (out2 / "report.json").read_bytes()
    assert r1 == r2
    assert (out1 / "traces.csv").read_bytes() == (out2 / "traces.csv").read_bytes()
    report = json.loads(r1)
    assert report["config"]["seed"] == 42
    _report("C10 determinism")
