"""Named RNG sub-streams derived from one master seed.

Each noise source owns its own generator so coupled-run comparisons can
share sub-streams: the latent stream feeds both the single-chain x noise
and the particle-cloud block noise, so e.g. PGD with one particle consumes
exactly the variates an SFLA run would.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

THETA_STREAM = 0
LATENT_STREAM = 1


@dataclass
class NoiseStreams:
    theta: np.random.Generator
    latent: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "NoiseStreams":
        return cls(
            theta=np.random.default_rng(np.random.SeedSequence([seed, THETA_STREAM])),
            latent=np.random.default_rng(np.random.SeedSequence([seed, LATENT_STREAM])),
        )


def replica_seed(master_seed: int, index: int) -> int:
    """Deterministic 64-bit child seed for replica ``index``."""
    ss = np.random.SeedSequence([master_seed, 2, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
