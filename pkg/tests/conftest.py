import numpy as np
import pytest

from mmle import GaussianHierarchicalModel, generate_logistic_data


class ZeroModel:
    """Null-model stub: zero potential and gradients everywhere.

    Used to isolate the injected noise of the integrators; also carries a
    zero marginal-gradient oracle so the averaged chain runs on it.
    """

    def __init__(self, d_theta=1, d_x=2):
        self.d_theta = d_theta
        self.d_x = d_x

    def potential(self, theta, x):
        return 0.0

    def grad_theta(self, theta, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            return np.zeros((x.shape[0], self.d_theta))
        return np.zeros(self.d_theta)

    def grad_x(self, theta, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def grad_marginal(self, theta):
        return np.zeros(self.d_theta)

    def grad_joint(self, theta, x):
        return np.zeros(self.d_theta + self.d_x)


def central_diff_grad(f, v, h=1e-5):
    """Central finite-difference gradient of a scalar function of a vector."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    for i in range(v.size):
        up = v.copy()
        dn = v.copy()
        up[i] += h
        dn[i] -= h
        out[i] = (f(up) - f(dn)) / (2.0 * h)
    return out


def grad_rel_error(model, theta, x, h=1e-5):
    """Worst relative error of both analytic gradients vs finite differences."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    x = np.asarray(x, dtype=float)
    fd_t = central_diff_grad(lambda t: model.potential(t, x), theta, h)
    fd_x = central_diff_grad(lambda xx: model.potential(theta, xx), x, h)
    gt = model.grad_theta(theta, x)
    gx = model.grad_x(theta, x)
    err_t = np.linalg.norm(fd_t - gt) / max(np.linalg.norm(gt), 1e-8)
    err_x = np.linalg.norm(fd_x - gx) / max(np.linalg.norm(gx), 1e-8)
    return max(err_t, err_x)


@pytest.fixture
def gaussian_small():
    return GaussianHierarchicalModel([1.0, 3.0], 1.0, 1.0)


@pytest.fixture
def gaussian_d10():
    return GaussianHierarchicalModel.synthetic(10, 1.0, 1.0, 1.0, seed=20240601)


@pytest.fixture
def logistic_small():
    return generate_logistic_data(d_x=5, d_y=20, theta_true=1.0, sigma=1.0, seed=7)
