"""Cosine-perturbed quadratic potentials and their curvature bounds."""
import numpy as np
import pytest

from mmle import ConfigurationError, ExamplePotential
from conftest import grad_rel_error


@pytest.fixture
def separable():
    # 2a - |b||g''| = 0.75 > 0 and 2a~ - |b''||g| = 1.75 >= d|b'|^2|g'|^2/(2k)
    return ExamplePotential.separable_cos(a=0.5, a_tilde=1.0, d=2, c_b=0.5, c_g=0.5)


@pytest.fixture
def shifted():
    # kappa = 2a - |h''| = 1 and 2a~ = 3 >= (1 + d/(2k))|h''| = 2
    return ExamplePotential.shift_cos(a=1.0, a_tilde=1.5, d=2, c_h=1.0)


@pytest.fixture
def broken():
    # 2a = 0.1 < |h''| = 1: the fast block loses convexity near x = theta
    return ExamplePotential.shift_cos(a=0.05, a_tilde=1.5, d=2, c_h=1.0)


class TestGradients:
    @pytest.mark.parametrize("fixture", ["separable", "shifted", "broken"])
    def test_finite_difference_consistency(self, fixture, request):
        model = request.getfixturevalue(fixture)
        rng = np.random.default_rng(21)
        for _ in range(100):
            theta = rng.uniform(-5, 5, model.d_theta)
            x = rng.uniform(-5, 5, model.d_x)
            assert grad_rel_error(model, theta, x) <= 1e-6

    def test_potential_value(self, shifted):
        theta = np.array([0.0, 0.0])
        x = np.array([0.0, 0.0])
        assert shifted.potential(theta, x) == pytest.approx(2.0)  # d * c_h * cos 0

    def test_invalid_construction(self):
        with pytest.raises(ConfigurationError):
            ExamplePotential.shift_cos(a=-1.0, a_tilde=1.0, d=2, c_h=1.0)
        with pytest.raises(ConfigurationError):
            ExamplePotential("nope", 1.0, 1.0, 2)


class TestBounds:
    def test_shift_bounds(self, shifted):
        assert shifted.fast_convexity_bound() == pytest.approx(1.0)
        assert shifted.slow_convexity_bound() == pytest.approx(2.0)
        # min over s in [-1,1] of (a + a~ + s) - sqrt((a~-a)^2 + s^2), at s=-1
        expected = (1.0 + 1.5 - 1.0) - np.sqrt(0.25 + 1.0)
        assert shifted.joint_convexity_bound() == pytest.approx(expected)

    def test_conditions_satisfied(self, separable, shifted):
        for model in (separable, shifted):
            cond = model.satisfies_conditions()
            assert cond["fast_ok"] and cond["slow_ok"]

    def test_conditions_broken(self, broken):
        cond = broken.satisfies_conditions()
        assert not cond["fast_ok"]

    def test_fast_bound_is_true_hessian_floor(self, shifted):
        # directional curvature of grad_x in x equals 2a + h''(x - theta);
        # its minimum over the sampled box approaches the bound
        rng = np.random.default_rng(3)
        worst = np.inf
        for _ in range(4000):
            theta = rng.uniform(-4, 4, 2)
            x = rng.uniform(-4, 4, 2)
            xp = rng.uniform(-4, 4, 2)
            dx = x - xp
            quot = (shifted.grad_x(theta, x) - shifted.grad_x(theta, xp)) @ dx
            worst = min(worst, quot / (dx @ dx))
        assert worst >= shifted.fast_convexity_bound() - 1e-12
        assert worst <= shifted.fast_convexity_bound() + 0.05

    def test_broken_potential_has_nonconvex_region(self, broken):
        # near x = theta the x-curvature is 2a - c_h < 0
        theta = np.zeros(2)
        x = np.array([1e-3, 0.0])
        xp = np.array([-1e-3, 0.0])
        dx = x - xp
        quot = (broken.grad_x(theta, x) - broken.grad_x(theta, xp)) @ dx / (dx @ dx)
        assert quot < 0
