import math

import numpy as np
import pytest

from tempembed.transform import (
    GdConfig,
    SmoothingSpec,
    clip_by_global_norm,
    combine,
    combine_weights,
    fit_heterogeneous,
    fit_homogeneous,
    fit_pairwise,
    fit_pairwise_all,
    gradient,
    least_squares_gd,
    objective,
    project,
    stack_pairs,
)


def lstsq_oracle(x, z):
    return np.linalg.solve(x.T @ x, x.T @ z)


def planted(rng, n=100, d=8, noise=0.0):
    phi1 = rng.standard_normal((n, d))
    a = rng.standard_normal((d, d)) / math.sqrt(d) + np.eye(d)
    phi2 = phi1 @ a + noise * rng.standard_normal((n, d))
    return phi1, phi2, a


def direct_weight(kind, t, count, theta):
    # weights written out one term at a time, t = 1..count
    if kind == "avg":
        return 1.0 / count
    if kind == "linear":
        return t / count
    if kind == "exp":
        return math.exp(t / count)
    return (1.0 - theta) ** (count - t)


class TestStacking:
    def test_two_snapshots(self, rng):
        a, b = rng.standard_normal((4, 2)), rng.standard_normal((4, 2))
        x, z = stack_pairs([a, b])
        assert np.array_equal(x, a) and np.array_equal(z, b)

    def test_row_correspondence(self):
        phis = [np.full((4, 1), t) + np.arange(4)[:, None] * 10 for t in range(3)]
        x, z = stack_pairs(phis)
        assert x.shape == (8, 1)
        np.testing.assert_array_equal(x[:4].ravel(), phis[0].ravel())
        np.testing.assert_array_equal(x[4:].ravel(), phis[1].ravel())
        # same vertex id (tens digit), next snapshot (units digit)
        np.testing.assert_array_equal(x.ravel() // 10, z.ravel() // 10)
        np.testing.assert_array_equal(z.ravel() - x.ravel(), 1)

    def test_errors(self):
        with pytest.raises(ValueError):
            stack_pairs([np.zeros((3, 2))])
        with pytest.raises(ValueError):
            stack_pairs([np.zeros((3, 2)), np.zeros((3, 3))])


class TestGradient:
    def test_finite_differences(self, rng):
        h = 1e-6
        for _ in range(100):
            n, d = int(rng.integers(3, 20)), int(rng.integers(1, 6))
            x, z, w = rng.standard_normal((n, d)), rng.standard_normal((n, d)), rng.standard_normal((d, d))
            g = gradient(x, z, w)
            i, j = rng.integers(d), rng.integers(d)
            e = np.zeros((d, d))
            e[i, j] = h
            num = (objective(x, z, w + e) - objective(x, z, w - e)) / (2 * h)
            assert abs(g[i, j] - num) / max(abs(num), 1e-3) < 1e-5

    def test_clip_invariant(self, rng):
        for _ in range(50):
            g = rng.standard_normal((4, 4)) * rng.uniform(0.1, 10)
            c = clip_by_global_norm(g, 5.0)
            if np.linalg.norm(g) > 5.0:
                assert np.linalg.norm(c) == pytest.approx(5.0, rel=1e-12)
                np.testing.assert_allclose(c / np.linalg.norm(c), g / np.linalg.norm(g))
            else:
                assert c is g


class TestFit:
    def test_identity_when_unchanged(self, rng):
        phi = rng.standard_normal((30, 4))
        w = fit_homogeneous([phi, phi, phi])
        x, z = stack_pairs([phi, phi, phi])
        assert objective(x, z, w) < 1e-8
        np.testing.assert_allclose(w, np.eye(4), atol=1e-12)

    def test_planted_map_exact(self, rng):
        phi1, phi2, a = planted(rng)
        w = fit_homogeneous([phi1, phi2])
        assert np.linalg.norm(w - a) / np.linalg.norm(a) < 1e-3
        np.testing.assert_allclose(w, lstsq_oracle(phi1, phi2), atol=1e-8)

    def test_planted_map_noisy(self, rng):
        phi1, phi2, a = planted(rng, noise=1e-3)
        w = fit_homogeneous([phi1, phi2])
        assert np.linalg.norm(w - a) / np.linalg.norm(a) < 0.05

    def test_objective_monotone(self, rng):
        phi1, phi2, _ = planted(rng)
        x, z = stack_pairs([phi1, phi2])
        history = []
        least_squares_gd(x, z, GdConfig(), history)
        assert len(history) == GdConfig().iterations
        assert np.all(np.diff(history) <= 1e-9 * history[0])
        assert history[-1] < 1e-12 * history[0]

    def test_pairwise_doubling(self, rng):
        phi = rng.standard_normal((50, 5))
        w = fit_pairwise(phi, 2 * phi)
        assert np.max(np.abs(w - 2 * np.eye(5))) < 1e-3

    def test_pairwise_is_homogeneous_on_two(self, rng):
        a, b = rng.standard_normal((20, 3)), rng.standard_normal((20, 3))
        assert np.array_equal(fit_pairwise(a, b), fit_homogeneous([a, b]))

    @pytest.mark.parametrize("d", [4, 16, 32])
    def test_residual_near_optimum(self, d, rng):
        a = rng.standard_normal((200, d))
        b = a @ (np.eye(d) + 0.1 * rng.standard_normal((d, d))) + 0.3 * rng.standard_normal((200, d))
        w = fit_pairwise(a, b)
        best = np.linalg.norm(a @ lstsq_oracle(a, b) - b)
        assert np.linalg.norm(a @ w - b) <= best * (1 + 1e-3)

    def test_deterministic(self, rng):
        a, b = rng.standard_normal((20, 3)), rng.standard_normal((20, 3))
        cfg = GdConfig(iterations=500)
        assert np.array_equal(fit_pairwise(a, b, cfg), fit_pairwise(a, b, cfg))

    def test_heterogeneous(self, rng):
        phis = [rng.standard_normal((20, 3)) for _ in range(4)]
        cfg, sm = GdConfig(iterations=300), SmoothingSpec("wct", 0.5)
        assert np.array_equal(fit_heterogeneous(phis, cfg, sm), combine(fit_pairwise_all(phis, cfg), sm))


class TestCombine:
    @pytest.mark.parametrize("kind", ["avg", "linear", "exp", "wct"])
    def test_weights_match_direct(self, kind):
        for T in range(2, 11):
            for theta in (0.0, 0.3, 0.5, 0.9):
                got = combine_weights(T - 1, SmoothingSpec(kind, theta))
                want = [direct_weight(kind, t, T - 1, theta) for t in range(1, T)]
                np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_hand_cases(self, rng):
        w1, w2 = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
        np.testing.assert_allclose(combine([w1, w2], SmoothingSpec("wct", 0.0)), w1 + w2)
        np.testing.assert_allclose(combine([w1, w2], SmoothingSpec("linear")), 0.5 * w1 + w2)
        np.testing.assert_allclose(combine([w1, w2], SmoothingSpec("wct", 0.5)), 0.5 * w1 + w2)

    def test_avg_of_equal(self, rng):
        m = rng.standard_normal((3, 3))
        np.testing.assert_allclose(combine([m] * 7, SmoothingSpec("avg")), m, rtol=1e-15)

    @pytest.mark.parametrize("kind", ["avg", "linear", "exp", "wct"])
    def test_linearity(self, kind, rng):
        ws = [rng.standard_normal((3, 3)) for _ in range(4)]
        sm = SmoothingSpec(kind, 0.3)
        np.testing.assert_allclose(combine([2.5 * w for w in ws], sm), 2.5 * combine(ws, sm), rtol=1e-12)

    def test_normalize_flag(self):
        w = combine_weights(5, SmoothingSpec("exp", normalize=True))
        assert w.sum() == pytest.approx(1.0)

    def test_errors(self):
        with pytest.raises(ValueError):
            combine([], SmoothingSpec())
        with pytest.raises(ValueError):
            combine([np.eye(2), np.eye(3)], SmoothingSpec())
        with pytest.raises(ValueError):
            SmoothingSpec("wct", 1.0)
        with pytest.raises(ValueError):
            SmoothingSpec("cubic")


class TestProject:
    def test_identity_and_scaling(self, rng):
        phi = rng.standard_normal((5, 3))
        np.testing.assert_array_equal(project(phi, np.eye(3)), phi)
        np.testing.assert_array_equal(project(phi, 2 * np.eye(3)), 2 * phi)

    def test_associative(self, rng):
        phi, a, b = rng.standard_normal((5, 3)), rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
        np.testing.assert_allclose(project(project(phi, a), b), project(phi, a @ b), atol=1e-10)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            project(np.zeros((4, 3)), np.eye(2))
