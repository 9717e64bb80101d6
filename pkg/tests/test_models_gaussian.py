"""Gaussian hierarchical model: closed forms against independent oracles."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from mmle import ConfigurationError, GaussianHierarchicalModel
from conftest import grad_rel_error


def brute_marginal(model, theta):
    """log int exp(-U) dx by per-coordinate quadrature (U is separable)."""
    total = 0.0
    for y_j in model.y:
        def integrand(x, y_j=y_j):
            return np.exp(
                -((y_j - x) ** 2) / (2 * model.sigma_y**2)
                - ((x - theta) ** 2) / (2 * model.sigma_x**2)
            )
        val, err = quad(integrand, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)
        total += np.log(val)
    return total


def golden_section_max(f, lo, hi, tol=1e-10):
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    while abs(b - a) > tol:
        if f(c) > f(d):
            b = d
        else:
            a = c
        c = b - phi * (b - a)
        d = a + phi * (b - a)
    return 0.5 * (a + b)


class TestPotential:
    def test_worked_example(self, gaussian_small):
        # residuals (0, 0) and prior (1 + 9)/2
        assert gaussian_small.potential(0.0, [1.0, 3.0]) == pytest.approx(5.0)

    def test_prior_only_when_x_equals_y(self, gaussian_small):
        u = gaussian_small.potential(0.0, gaussian_small.y)
        assert u == pytest.approx(np.sum(gaussian_small.y**2) / 2.0)

    def test_dimension_mismatch(self, gaussian_small):
        with pytest.raises(ConfigurationError):
            gaussian_small.potential(0.0, [1.0, 2.0, 3.0])
        with pytest.raises(ConfigurationError):
            gaussian_small.grad_theta([0.0, 1.0], [1.0, 2.0])

    def test_empty_y_forbidden(self):
        with pytest.raises(ConfigurationError):
            GaussianHierarchicalModel([], 1.0, 1.0)


class TestGradients:
    def test_grad_theta_zero_at_mean(self, gaussian_small):
        np.testing.assert_allclose(gaussian_small.grad_theta(0.0, [0.0, 0.0]), [0.0])

    def test_grad_theta_closed_form(self, gaussian_small):
        # sum (theta - x_j) / sigma_x^2 = (2-1) + (2-3) = 0
        np.testing.assert_allclose(gaussian_small.grad_theta(2.0, [1.0, 3.0]), [0.0])
        np.testing.assert_allclose(gaussian_small.grad_theta(1.0, [1.0, 3.0]), [-2.0])

    def test_grad_x_closed_form(self, gaussian_small):
        np.testing.assert_allclose(
            gaussian_small.grad_x(0.0, [0.0, 0.0]), [-1.0, -3.0]
        )

    def test_grad_x_vanishes_at_posterior_mean(self, gaussian_small):
        m = gaussian_small.posterior_mean(0.7)
        np.testing.assert_allclose(
            gaussian_small.grad_x(0.7, m), np.zeros(2), atol=1e-14
        )

    def test_batched_gradients_match_rowwise(self, gaussian_d10):
        rng = np.random.default_rng(3)
        cloud = rng.standard_normal((6, 10))
        gt = gaussian_d10.grad_theta(0.3, cloud)
        gx = gaussian_d10.grad_x(0.3, cloud)
        for i in range(6):
            np.testing.assert_allclose(gt[i], gaussian_d10.grad_theta(0.3, cloud[i]))
            np.testing.assert_allclose(gx[i], gaussian_d10.grad_x(0.3, cloud[i]))

    def test_finite_difference_consistency(self, gaussian_d10):
        rng = np.random.default_rng(11)
        for _ in range(100):
            theta = rng.uniform(-5, 5, size=1)
            x = rng.uniform(-5, 5, size=10)
            assert grad_rel_error(gaussian_d10, theta, x) <= 1e-6


class TestMarginalOracle:
    def test_closed_form_value(self, gaussian_small):
        # -(1+9)/4 = -2.5 plus the documented constant
        const = 0.5 * 2 * np.log(2 * np.pi * 0.5)
        assert gaussian_small.marginal_log_likelihood(0.0) == pytest.approx(-2.5 + const)

    def test_matches_quadrature(self, gaussian_small):
        for theta in (-1.0, 0.0, 0.4, 2.0):
            exact = gaussian_small.marginal_log_likelihood(theta)
            brute = brute_marginal(gaussian_small, theta)
            assert abs(exact - brute) / abs(brute) <= 1e-8

    def test_maximised_at_mean(self, gaussian_small):
        star = gaussian_small.marginal_log_likelihood(2.0)
        for theta in (1.5, 1.99, 2.01, 2.5):
            assert gaussian_small.marginal_log_likelihood(theta) < star

    @given(shift=st.floats(-10, 10))
    @settings(max_examples=25, deadline=None)
    def test_translation_invariance(self, shift):
        m0 = GaussianHierarchicalModel([1.0, 3.0], 1.0, 1.0)
        m1 = GaussianHierarchicalModel([1.0 + shift, 3.0 + shift], 1.0, 1.0)
        assert m1.marginal_log_likelihood(shift) == pytest.approx(
            m0.marginal_log_likelihood(0.0)
        )

    def test_grad_marginal_closed_form(self, gaussian_small):
        assert gaussian_small.grad_marginal(2.0)[0] == pytest.approx(0.0)
        assert gaussian_small.grad_marginal(0.0)[0] == pytest.approx(2.0)
        wide = GaussianHierarchicalModel([1.0, 3.0], 1.0, np.sqrt(3.0))
        assert wide.grad_marginal(0.0)[0] == pytest.approx(1.0)

    def test_grad_marginal_matches_finite_difference(self, gaussian_d10):
        # the marginal is quadratic in theta, so central differences carry no
        # truncation error and a wide step avoids cancellation
        h = 1e-3
        for theta in (-0.5, 0.0, 1.3):
            fd = (
                gaussian_d10.marginal_log_likelihood(theta + h)
                - gaussian_d10.marginal_log_likelihood(theta - h)
            ) / (2 * h)
            g = gaussian_d10.grad_marginal(theta)[0]
            assert abs(fd - g) / max(abs(g), 1e-8) <= 1e-8

    def test_grad_marginal_is_posterior_average(self, gaussian_small):
        # -E[grad_theta U(theta, X)] under the exact posterior, Monte Carlo
        rng = np.random.default_rng(5)
        theta = 0.3
        n = 40_000
        mean = gaussian_small.posterior_mean(theta)
        sd = np.sqrt(gaussian_small.posterior_var)
        xs = mean + sd * rng.standard_normal((n, 2))
        vals = -gaussian_small.grad_theta(theta, xs)[:, 0]
        se = vals.std(ddof=1) / np.sqrt(n)
        assert abs(vals.mean() - gaussian_small.grad_marginal(theta)[0]) <= 3 * se

    def test_mmle_value_and_golden_section(self, gaussian_small):
        assert gaussian_small.mmle()[0] == pytest.approx(2.0)
        # function-value search resolves a quadratic vertex only to
        # sqrt(machine eps) in the argument
        found = golden_section_max(
            gaussian_small.marginal_log_likelihood, -10, 10, tol=1e-12
        )
        assert found == pytest.approx(2.0, abs=1e-6)

    def test_mmle_constant_data(self):
        m = GaussianHierarchicalModel([0.7, 0.7, 0.7], 2.0, 0.5)
        assert m.mmle()[0] == pytest.approx(0.7)

    def test_marginal_log_concavity_constant(self, gaussian_d10):
        # -d^2/dtheta^2 log p(y) is exactly d_x / (sigma_x^2 + sigma_y^2)
        h = 1e-4
        f = gaussian_d10.marginal_log_likelihood
        second = (f(1.0 + h) - 2 * f(1.0) + f(1.0 - h)) / h**2
        assert -second == pytest.approx(10.0 / 2.0, rel=1e-6)
        assert gaussian_d10.marginal_curvature == pytest.approx(5.0)


class TestExactEm:
    def test_worked_sequence(self, gaussian_small):
        thetas = [0.0]
        for _ in range(3):
            thetas.append(float(gaussian_small.exact_em_step(thetas[-1])[0]))
        assert thetas[1:] == pytest.approx([1.0, 1.5, 1.75])

    def test_fixed_point(self, gaussian_small):
        assert gaussian_small.exact_em_step(2.0)[0] == pytest.approx(2.0)

    @given(
        sx=st.floats(0.2, 3.0),
        sy=st.floats(0.2, 3.0),
        theta0=st.floats(-5.0, 5.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_exact_geometric_contraction(self, sx, sy, theta0):
        model = GaussianHierarchicalModel([1.0, 3.0, -2.0], sx, sy)
        star = model.mmle()[0]
        rate = sy**2 / (sx**2 + sy**2)
        theta1 = model.exact_em_step(theta0)[0]
        assert abs(theta1 - star) == pytest.approx(rate * abs(theta0 - star), abs=1e-12)

    def test_ascent(self, gaussian_small):
        theta = -4.0
        prev = gaussian_small.marginal_log_likelihood(theta)
        for _ in range(30):
            theta = float(gaussian_small.exact_em_step(theta)[0])
            cur = gaussian_small.marginal_log_likelihood(theta)
            assert cur >= prev - 1e-12
            prev = cur


class TestPosteriorAndHessian:
    def test_posterior_moments_formula(self, gaussian_small):
        np.testing.assert_allclose(
            gaussian_small.posterior_mean(0.0), [0.5, 1.5]
        )
        assert gaussian_small.posterior_var == pytest.approx(0.5)

    def test_hessian_eigenvalue(self, gaussian_small):
        # H = [[2,-1,-1],[-1,2,0],[-1,0,2]] has eigenvalues 2, 2 +/- sqrt(2)
        assert gaussian_small.joint_convexity_constant() == pytest.approx(2 - np.sqrt(2))

    def test_hessian_is_potential_curvature(self, gaussian_small):
        h = gaussian_small.hessian()
        rng = np.random.default_rng(2)
        z0 = rng.standard_normal(3)
        dz = rng.standard_normal(3)
        # quadratic potential: U(z0+dz) - 2U(z0) + U(z0-dz) = dz' H dz
        u = lambda z: gaussian_small.potential(z[:1], z[1:])
        lhs = u(z0 + dz) - 2 * u(z0) + u(z0 - dz)
        assert lhs == pytest.approx(dz @ h @ dz, rel=1e-9)

    def test_synthetic_deterministic(self):
        a = GaussianHierarchicalModel.synthetic(5, 1.0, 1.0, 2.0, seed=9)
        b = GaussianHierarchicalModel.synthetic(5, 1.0, 1.0, 2.0, seed=9)
        np.testing.assert_array_equal(a.y, b.y)
