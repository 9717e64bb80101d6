from .lyapunov import (
    averaged_theta_variance,
    slow_fast_theta_variance,
    stationary_covariance_lyapunov,
)
from .probes import (
    ProbeReport,
    default_probe_claims,
    probe_fast_convexity,
    probe_joint_convexity,
    probe_monotonicity,
    probe_slow_convexity,
    run_all_probes,
)
from .slope import SlopeFit, fit_loglog_slope
from .studies import (
    ScalingReport,
    averaging_scaling_study,
    bias_decay_study,
    concentration_study,
    em_ascent_study,
)

__all__ = [
    "averaged_theta_variance",
    "slow_fast_theta_variance",
    "stationary_covariance_lyapunov",
    "ProbeReport",
    "default_probe_claims",
    "probe_fast_convexity",
    "probe_joint_convexity",
    "probe_monotonicity",
    "probe_slow_convexity",
    "run_all_probes",
    "SlopeFit",
    "fit_loglog_slope",
    "ScalingReport",
    "averaging_scaling_study",
    "bias_decay_study",
    "concentration_study",
    "em_ascent_study",
]
