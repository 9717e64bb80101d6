"""Bayesian logistic regression model and its synthetic data generator."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmle import ConfigurationError, LogisticRegressionModel, generate_logistic_data
from mmle.models import sigmoid
from conftest import grad_rel_error


class TestPotential:
    def test_value_at_origin(self, logistic_small):
        m = logistic_small
        expected = 0.5 * m.d_x * np.log(2 * np.pi * m.sigma**2) + m.d_y * np.log(2.0)
        assert m.potential(0.0, np.zeros(m.d_x)) == pytest.approx(expected)

    def test_bounded_below(self, logistic_small):
        m = logistic_small
        floor = 0.5 * m.d_x * np.log(2 * np.pi * m.sigma**2)
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = rng.uniform(-20, 20, m.d_x)
            assert m.potential(rng.uniform(-5, 5), x) >= floor

    def test_stable_at_extreme_logits(self):
        m = LogisticRegressionModel([1.0, 0.0], [[1.0], [-1.0]], sigma=1.0)
        for x in (np.array([500.0]), np.array([-500.0])):
            assert np.isfinite(m.potential(0.0, x))
            assert np.isfinite(m.grad_x(0.0, x)).all()

    def test_dimension_mismatch(self, logistic_small):
        with pytest.raises(ConfigurationError):
            logistic_small.potential(0.0, np.zeros(3))

    def test_bad_labels_rejected(self):
        with pytest.raises(ConfigurationError):
            LogisticRegressionModel([0.5], [[1.0]], sigma=1.0)


class TestGradients:
    def test_grad_theta_closed_form(self, logistic_small):
        m = logistic_small
        rng = np.random.default_rng(1)
        x = rng.standard_normal(m.d_x)
        theta = 0.4
        expected = np.sum(theta - x) / m.sigma**2
        assert m.grad_theta(theta, x)[0] == pytest.approx(expected)

    def test_grad_x_prior_only_without_covariates(self):
        # zero covariates: likelihood independent of x
        m = LogisticRegressionModel([1.0, 0.0, 1.0], np.zeros((3, 2)), sigma=2.0)
        x = np.array([1.0, -3.0])
        np.testing.assert_allclose(m.grad_x(0.5, x), (x - 0.5) / 4.0)

    def test_finite_difference_consistency(self, logistic_small):
        rng = np.random.default_rng(12)
        for _ in range(100):
            theta = rng.uniform(-5, 5, size=1)
            x = rng.uniform(-5, 5, size=logistic_small.d_x)
            assert grad_rel_error(logistic_small, theta, x) <= 1e-6

    def test_batched_grads_match_rowwise(self, logistic_small):
        rng = np.random.default_rng(4)
        cloud = rng.standard_normal((7, logistic_small.d_x))
        gt = logistic_small.grad_theta(1.1, cloud)
        gx = logistic_small.grad_x(1.1, cloud)
        for i in range(7):
            np.testing.assert_allclose(gt[i], logistic_small.grad_theta(1.1, cloud[i]))
            np.testing.assert_allclose(gx[i], logistic_small.grad_x(1.1, cloud[i]))

    @given(scale=st.floats(0.1, 50.0), theta=st.floats(-3.0, 3.0))
    @settings(max_examples=25, deadline=None)
    def test_gradient_globally_lipschitz(self, scale, theta):
        m = generate_logistic_data(d_x=4, d_y=12, theta_true=0.5, sigma=1.0, seed=3)
        # Hessian_x <= (lammax(V'V)/4 + 1/sigma^2) I everywhere
        lip = np.linalg.eigvalsh(m.covariates.T @ m.covariates)[-1] / 4 + 1 / m.sigma**2
        rng = np.random.default_rng(8)
        x = scale * rng.standard_normal(4)
        xp = scale * rng.standard_normal(4)
        lhs = np.linalg.norm(m.grad_x(theta, x) - m.grad_x(theta, xp))
        assert lhs <= lip * np.linalg.norm(x - xp) * (1 + 1e-9)


class TestGenerator:
    def test_deterministic(self):
        a = generate_logistic_data(4, 15, 1.0, 1.0, seed=42)
        b = generate_logistic_data(4, 15, 1.0, 1.0, seed=42)
        np.testing.assert_array_equal(a.labels, b.labels)
        np.testing.assert_array_equal(a.covariates, b.covariates)

    def test_seed_changes_data(self):
        a = generate_logistic_data(4, 15, 1.0, 1.0, seed=42)
        b = generate_logistic_data(4, 15, 1.0, 1.0, seed=43)
        assert not np.array_equal(a.covariates, b.covariates)

    def test_covariate_scaling(self):
        m = generate_logistic_data(d_x=400, d_y=2000, theta_true=0.0, sigma=1.0, seed=1)
        # entries are N(0, 1/d_x): row norms concentrate near 1
        norms = np.linalg.norm(m.covariates, axis=1)
        assert abs(norms.mean() - 1.0) < 0.05

    def test_positive_covariates_large_theta_biases_labels(self):
        # Bernoulli(s(v.x)) label semantics: with all-positive covariates and
        # a strongly positive latent draw the label mean must exceed 1/2.
        means = []
        for seed in range(80):
            rng = np.random.default_rng(seed)
            v = np.abs(rng.standard_normal((40, 3))) / np.sqrt(3)
            x_true = 20.0 + rng.standard_normal(3)
            labels = (rng.random(40) < sigmoid(v @ x_true)).astype(float)
            means.append(labels.mean())
        assert np.mean(means) > 0.9

    def test_bad_dimensions(self):
        with pytest.raises(ConfigurationError):
            generate_logistic_data(0, 5, 1.0, 1.0, seed=0)
        with pytest.raises(ConfigurationError):
            generate_logistic_data(3, 0, 1.0, 1.0, seed=0)
