"""Randomised numerical probes of the convexity and dissipativity assumptions.

Each probe samples random point pairs inside a ball, evaluates the relevant
pairwise monotonicity quotient, and reports the worst margin against the
claimed constant together with the witnessing pair.  For quadratic models
the sampled quotient is exactly a Rayleigh quotient of the Hessian, so a
claim at the smallest eigenvalue passes and any claim above it fails once
sampling is dense enough.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from ..models.base import Model


@dataclass
class ProbeReport:
    name: str
    parameter: float
    n_samples: int
    tolerance: float
    passed: bool
    worst_violation: float
    witness: dict
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "parameter": self.parameter,
            "n_samples": self.n_samples,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "witness": self.witness,
            "extras": self.extras,
        }


def _ball(rng: np.random.Generator, n: int, dim: int, radius: float) -> np.ndarray:
    u = rng.standard_normal((n, dim))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = radius * rng.random(n) ** (1.0 / dim)
    return u * r[:, None]


def _finish(name, claim, margins, witness_at, witnesses, n_samples, tolerance,
            extras=None) -> ProbeReport:
    worst = int(np.argmin(margins))
    violation = float(margins[worst])
    return ProbeReport(
        name=name,
        parameter=float(claim),
        n_samples=n_samples,
        tolerance=tolerance,
        passed=bool(violation >= -tolerance),
        worst_violation=violation,
        witness={k: np.asarray(v[worst]).tolist() for k, v in zip(witness_at, witnesses)},
        extras=extras or {},
    )


def probe_joint_convexity(model: Model, mu_claim: float, n_samples: int = 10_000,
                          radius: float = 5.0, seed: int = 0,
                          tolerance: float = 1e-9) -> ProbeReport:
    """Check <z - z', grad U(z) - grad U(z')> >= mu_claim |z - z'|^2 on random
    pairs z, z' in the joint ball."""
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    dim = model.d_theta + model.d_x
    z = _ball(rng, n_samples, dim, radius)
    zp = _ball(rng, n_samples, dim, radius)
    dt = model.d_theta
    margins = np.empty(n_samples)
    for i in range(n_samples):
        dz = z[i] - zp[i]
        nrm = dz @ dz
        if nrm == 0.0:
            margins[i] = np.inf
            continue
        dg = model.grad_joint(z[i, :dt], z[i, dt:]) - model.grad_joint(zp[i, :dt], zp[i, dt:])
        margins[i] = (dz @ dg) / nrm - mu_claim
    return _finish("joint_convexity", mu_claim, margins,
                   ("theta", "x", "theta_prime", "x_prime"),
                   (z[:, :dt], z[:, dt:], zp[:, :dt], zp[:, dt:]),
                   n_samples, tolerance)


def probe_fast_convexity(model: Model, kappa_claim: float, n_samples: int = 10_000,
                         radius: float = 5.0, seed: int = 0,
                         tolerance: float = 1e-9) -> ProbeReport:
    """Check <x - x', grad_x U(theta,x) - grad_x U(theta,x')> >=
    kappa_claim |x - x'|^2 across random theta (the pairwise form of strong
    convexity in x, uniformly in theta)."""
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    thetas = _ball(rng, n_samples, model.d_theta, radius)
    x = _ball(rng, n_samples, model.d_x, radius)
    xp = _ball(rng, n_samples, model.d_x, radius)
    margins = np.empty(n_samples)
    for i in range(n_samples):
        dx = x[i] - xp[i]
        nrm = dx @ dx
        if nrm == 0.0:
            margins[i] = np.inf
            continue
        dg = model.grad_x(thetas[i], x[i]) - model.grad_x(thetas[i], xp[i])
        margins[i] = (dx @ dg) / nrm - kappa_claim
    return _finish("fast_convexity", kappa_claim, margins,
                   ("theta", "x", "x_prime"), (thetas, x, xp),
                   n_samples, tolerance)


def probe_slow_convexity(model: Model, zeta_claim: float, n_samples: int = 10_000,
                         radius: float = 5.0, seed: int = 0,
                         tolerance: float = 1e-9) -> ProbeReport:
    """Check <theta - theta', grad_theta U(theta,x) - grad_theta U(theta',x)>
    >= zeta_claim |theta - theta'|^2 across random x (strong convexity in
    theta, uniformly in x)."""
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    xs = _ball(rng, n_samples, model.d_x, radius)
    th = _ball(rng, n_samples, model.d_theta, radius)
    thp = _ball(rng, n_samples, model.d_theta, radius)
    margins = np.empty(n_samples)
    for i in range(n_samples):
        dt = th[i] - thp[i]
        nrm = dt @ dt
        if nrm == 0.0:
            margins[i] = np.inf
            continue
        dg = model.grad_theta(th[i], xs[i]) - model.grad_theta(thp[i], xs[i])
        margins[i] = (dt @ dg) / nrm - zeta_claim
    return _finish("slow_convexity", zeta_claim, margins,
                   ("x", "theta", "theta_prime"), (xs, th, thp),
                   n_samples, tolerance)


def _monotonicity_side(points, grads_at_points, grads_at_zero):
    """Fit (rate, offset) in <grad, v> >= rate |v|^2 - offset over samples.

    The pairwise constant kappa is taken over the (v, 0) pair family, the
    offset bound C over |grad at 0|, and the fitted constants follow the
    Young-inequality split: rate = kappa and offset = 0 when the gradient
    vanishes at the origin, else rate = kappa/2 and offset = 2 C^2 / kappa.
    """
    norms2 = np.einsum("ij,ij->i", points, points)
    keep = norms2 > 0
    s = np.einsum("ij,ij->i", grads_at_points, points)
    pair = np.einsum("ij,ij->i", grads_at_points - grads_at_zero, points)
    kappa = float(np.min(pair[keep] / norms2[keep]))
    c = float(np.max(np.linalg.norm(grads_at_zero, axis=1)))
    if kappa <= 0:
        rate, offset = kappa, 0.0
    elif c < 1e-12:
        rate, offset = kappa, 0.0
    else:
        rate, offset = kappa / 2.0, 2.0 * c * c / kappa
    margins = s - (rate * norms2 - offset)
    return rate, offset, kappa, c, margins


def probe_monotonicity(model: Model, n_samples: int = 10_000, radius: float = 5.0,
                       seed: int = 0, tolerance: float = 1e-9) -> ProbeReport:
    """Fit dissipativity constants for both drifts and verify them.

    Finds (r, R) with -<grad_x U(theta,x), x> <= -r|x|^2 + R and
    (r_tilde, R_tilde) likewise for the theta drift; passes iff both rates
    are positive and every sample satisfies the fitted bounds.
    """
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    thetas = _ball(rng, n_samples, model.d_theta, radius)
    xs = _ball(rng, n_samples, model.d_x, radius)
    zero_x = np.zeros(model.d_x)
    zero_t = np.zeros(model.d_theta)

    gx = np.array([model.grad_x(thetas[i], xs[i]) for i in range(n_samples)])
    gx0 = np.array([model.grad_x(thetas[i], zero_x) for i in range(n_samples)])
    r, big_r, kappa_x, c_x, margins_x = _monotonicity_side(xs, gx, gx0)

    gt = np.array([model.grad_theta(thetas[i], xs[i]) for i in range(n_samples)])
    gt0 = np.array([model.grad_theta(zero_t, xs[i]) for i in range(n_samples)])
    rt, big_rt, kappa_t, c_t, margins_t = _monotonicity_side(thetas, gt, gt0)

    margins = np.minimum(margins_x, margins_t)
    worst = int(np.argmin(margins))
    violation = float(margins[worst])
    passed = bool(r > 0 and rt > 0 and violation >= -tolerance)
    return ProbeReport(
        name="monotonicity",
        parameter=float(min(r, rt)),
        n_samples=n_samples,
        tolerance=tolerance,
        passed=passed,
        worst_violation=violation,
        witness={"theta": thetas[worst].tolist(), "x": xs[worst].tolist()},
        extras={
            "r": r, "R": big_r, "r_tilde": rt, "R_tilde": big_rt,
            "kappa_x": kappa_x, "grad_bound_x": c_x,
            "kappa_theta": kappa_t, "grad_bound_theta": c_t,
        },
    )


def default_probe_claims(model: Model) -> dict:
    """Model-derived constants at which the convexity probes should be tight.

    Quadratic models expose eigenvalue-exact constants; the example
    potentials expose sup-norm curvature bounds; anything else gets the
    trivially-weaker claim 0.
    """
    if hasattr(model, "hessian"):
        h = model.hessian()
        dt = model.d_theta
        return {
            "joint": float(np.linalg.eigvalsh(h)[0]),
            "fast": float(np.linalg.eigvalsh(h[dt:, dt:])[0]),
            "slow": float(np.linalg.eigvalsh(h[:dt, :dt])[0]),
        }
    if hasattr(model, "fast_convexity_bound"):
        return {
            "joint": model.joint_convexity_bound(),
            "fast": model.fast_convexity_bound() / 2.0,
            "slow": model.slow_convexity_bound() / 2.0,
        }
    return {"joint": 0.0, "fast": 0.0, "slow": 0.0}


def run_all_probes(model: Model, claims: dict | None = None, n_samples: int = 10_000,
                   radius: float = 5.0, seed: int = 0) -> list[ProbeReport]:
    """The four assumption probes at model-derived (or supplied) claims."""
    claims = claims or default_probe_claims(model)
    return [
        probe_joint_convexity(model, claims["joint"], n_samples, radius, seed),
        probe_fast_convexity(model, claims["fast"], n_samples, radius, seed + 1),
        probe_slow_convexity(model, claims["slow"], n_samples, radius, seed + 2),
        probe_monotonicity(model, n_samples, radius, seed + 3),
    ]
