"""Weighted log-log slope fitting with a parametric bootstrap CI."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    ci_low: float
    ci_high: float
    n_boot: int


def _wls_slope(lx, ly, w):
    xm = np.average(lx, weights=w)
    ym = np.average(ly, weights=w)
    dx = lx - xm
    slope = np.sum(w * dx * (ly - ym)) / np.sum(w * dx * dx)
    return slope, ym - slope * xm


def fit_loglog_slope(points, n_boot: int = 1000, seed: int = 0) -> SlopeFit:
    """Fit log y = slope * log x + intercept by inverse-variance weighted
    least squares.

    ``points`` is a sequence of (x, y, stderr) with x, y > 0 and stderr >= 0
    (stderr of y; zero marks a noise-free point).  The CI is a 95% parametric
    bootstrap perturbing log y by the relative errors.
    """
    pts = [(float(x), float(y), float(s)) for x, y, s in points]
    if len(pts) < 3:
        raise ConfigurationError("slope fit needs at least 3 points")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    se = np.array([p[2] for p in pts])
    if (x <= 0).any() or (y <= 0).any():
        raise ConfigurationError("slope fit needs strictly positive x and y")
    if (se < 0).any():
        raise ConfigurationError("stderr must be non-negative")
    lx = np.log(x)
    ly = np.log(y)
    rel = se / y
    w = 1.0 / np.maximum(rel, 1e-12) ** 2
    slope, intercept = _wls_slope(lx, ly, w)
    rng = np.random.default_rng(seed)
    boots = np.empty(n_boot)
    for b in range(n_boot):
        ly_b = ly + rel * rng.standard_normal(len(ly))
        boots[b], _ = _wls_slope(lx, ly_b, w)
    lo, hi = np.percentile(boots, [2.5, 97.5])
    return SlopeFit(float(slope), float(intercept), float(lo), float(hi), n_boot)
