import math

import numpy as np
import pytest

from stochres.activations import ActivationDistribution
from stochres.esn import default_window, sample_weights


def random_config(seed: int, L: int, kind: str = "qubit", n: int = 1, safety: float = 0.99):
    rho = ActivationDistribution.default(kind)
    return sample_weights(seed, L, n, rho, default_window(kind), 1.0, safety)


def random_stochastic(rng, M: int, sparsity: float = 0.0) -> np.ndarray:
    """Column-stochastic matrix; each entry is zeroed with probability ``sparsity``."""
    p = rng.random((M, M))
    if sparsity:
        p[rng.random((M, M)) < sparsity] = 0.0
    for b in range(M):
        if p[:, b].sum() == 0:
            p[rng.integers(M), b] = 1.0
    return p / p.sum(axis=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def qubit2():
    return random_config(0, 2)


QUARTER_PI = math.pi / 4
