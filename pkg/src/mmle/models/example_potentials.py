"""Quadratic-plus-bounded-nonlinearity test potentials for assumption probes.

Both variants use d_theta = d_x = d and a cosine nonlinearity, whose
derivatives of every order are bounded by the amplitude, so all curvature
bounds below are exact sup-norm computations.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from .base import Model, as_latent, as_theta


class ExamplePotential(Model):
    """U = a|x|^2 + a_tilde|theta|^2 + coupled bounded term.

    variant "separable": coupling sum_i b(theta_i) g(x_i) with
        b(t) = c_b cos t,  g(t) = c_g cos t.
    variant "shift": coupling sum_i h(x_i - theta_i) with
        h(t) = c_h cos t.
    """

    def __init__(self, variant: str, a: float, a_tilde: float, d: int,
                 c_b: float = 0.0, c_g: float = 0.0, c_h: float = 0.0):
        if variant not in ("separable", "shift"):
            raise ConfigurationError(f"unknown variant {variant!r}")
        if not (a > 0 and a_tilde > 0):
            raise ConfigurationError("a and a_tilde must be positive")
        if d < 1:
            raise ConfigurationError("d must be >= 1")
        self.variant = variant
        self.a = float(a)
        self.a_tilde = float(a_tilde)
        self.d_theta = self.d_x = int(d)
        self.c_b = float(c_b)
        self.c_g = float(c_g)
        self.c_h = float(c_h)

    @classmethod
    def separable_cos(cls, a, a_tilde, d, c_b, c_g):
        return cls("separable", a, a_tilde, d, c_b=c_b, c_g=c_g)

    @classmethod
    def shift_cos(cls, a, a_tilde, d, c_h):
        return cls("shift", a, a_tilde, d, c_h=c_h)

    def potential(self, theta, x) -> float:
        th = as_theta(theta, self.d_theta)
        x = as_latent(x, self.d_x)
        quad = self.a * np.sum(x**2) + self.a_tilde * np.sum(th**2)
        if self.variant == "separable":
            coup = np.sum(self.c_b * np.cos(th) * self.c_g * np.cos(x))
        else:
            coup = np.sum(self.c_h * np.cos(x - th))
        return float(quad + coup)

    def grad_theta(self, theta, x) -> np.ndarray:
        th = as_theta(theta, self.d_theta)
        x = as_latent(x, self.d_x)
        if self.variant == "separable":
            coup = -self.c_b * np.sin(th) * self.c_g * np.cos(x)
        else:
            coup = self.c_h * np.sin(x - th)
        return 2.0 * self.a_tilde * th + coup

    def grad_x(self, theta, x) -> np.ndarray:
        th = as_theta(theta, self.d_theta)
        x = as_latent(x, self.d_x)
        if self.variant == "separable":
            coup = -self.c_b * np.cos(th) * self.c_g * np.sin(x)
        else:
            coup = -self.c_h * np.sin(x - th)
        return 2.0 * self.a * x + coup

    # exact curvature bounds (cosine family: every derivative is bounded by
    # the amplitude)

    @property
    def _coupling_amp(self) -> float:
        if self.variant == "separable":
            return abs(self.c_b * self.c_g)
        return abs(self.c_h)

    def fast_convexity_bound(self) -> float:
        """Exact min over (theta, x) of the smallest eigenvalue of the
        x-block Hessian: 2a - sup|coupling''|."""
        return 2.0 * self.a - self._coupling_amp

    def slow_convexity_bound(self) -> float:
        """Same for the theta-block Hessian: 2a_tilde - sup|coupling''|."""
        return 2.0 * self.a_tilde - self._coupling_amp

    def joint_convexity_bound(self) -> float:
        """Lower bound on the smallest joint-Hessian eigenvalue.

        The Hessian decomposes into per-coordinate 2x2 blocks whose entries
        range over the coupling amplitude box; the bound is the minimum
        eigenvalue over that box (exact for the shift variant, conservative
        for the separable one).
        """
        m = self._coupling_amp
        if self.variant == "shift":
            cands = []
            for s in (-m, 0.0, m):
                blk = np.array([[2 * self.a_tilde + s, -s],
                                [-s, 2 * self.a + s]])
                cands.append(np.linalg.eigvalsh(blk)[0])
            return float(min(cands))
        a_eff = 2 * self.a - m
        at_eff = 2 * self.a_tilde - m
        mid = 0.5 * (a_eff + at_eff)
        return float(mid - np.sqrt((0.5 * (at_eff - a_eff)) ** 2 + m**2))

    def satisfies_conditions(self) -> dict:
        """Check the sufficient constants conditions for this family.

        shift variant:      2a - ||h''|| >= kappa > 0  and
                            2 a_tilde >= (1 + d/(2 kappa)) ||h''||.
        separable variant:  2a - ||b|| ||g''|| >= kappa > 0  and
                            2 a_tilde - ||b''|| ||g|| >= d ||b'||^2 ||g'||^2 / (2 kappa).
        """
        m = self._coupling_amp
        kappa = self.fast_convexity_bound()
        if self.variant == "shift":
            fast_ok = kappa > 0
            slow_ok = fast_ok and (
                2 * self.a_tilde >= (1 + self.d_x / (2 * kappa)) * m
            )
        else:
            fast_ok = kappa > 0
            cross = (abs(self.c_b) * abs(self.c_g)) ** 2
            slow_ok = fast_ok and (
                2 * self.a_tilde - m >= self.d_x * cross / (2 * kappa)
            )
        return {"kappa": kappa, "fast_ok": bool(fast_ok), "slow_ok": bool(slow_ok)}
