"""Shot-noise analysis of probability readouts.

With ``N_runs`` shots the raw frequency vector ``f_k = n_k / N_runs`` is a
multinomial average, so its outer product is biased::

    E[f_k f_k^T] = (1 - 1/N_runs) P_k P_k^T + (1/N_runs) diag(P_k)

Averaging over the ``N`` training steps gives the expected estimated Gram
matrix. The small eigenvalues of the exact Gram matrix ``K`` are swamped by
the ``1/N_runs`` diagonal term until ``N_runs`` is a few times ``1/lambda_min``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import linalg

from .esn import EsnConfig
from .pipeline import evaluate, exact_readouts, shot_readouts
from .sampler import nested_counts
from .tasks import TaskData
from .training import DEFAULT_LAMBDA, gram_matrix


def min_eigenvalue(K) -> float:
    """Smallest eigenvalue of a symmetric matrix (dense symmetric solver)."""
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError("K must be square")
    if np.abs(K - K.T).max() > 1e-10:
        raise ValueError("K is not symmetric")
    return float(linalg.eigvalsh(K, subset_by_index=[0, 0])[0])


def expected_kest_per_step(P_series, n_runs: int) -> np.ndarray:
    """``(N, M, M)`` stack of ``(1 - 1/N_runs) P_k P_k^T + (1/N_runs) diag(P_k)``."""
    P = np.asarray(P_series, dtype=float)
    if P.ndim != 2 or len(P) == 0:
        raise ValueError("P_series must be a nonempty (N, M) array")
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    c = 1.0 / n_runs
    out = (1.0 - c) * P[:, :, None] * P[:, None, :]
    idx = np.arange(P.shape[1])
    out[:, idx, idx] += c * P
    return out


def expected_kest(P_series, n_runs: int) -> np.ndarray:
    """``(1 - 1/N_runs) K + (1/N_runs) mean_k diag(P_k)`` over the series."""
    P = np.asarray(P_series, dtype=float)
    if P.ndim != 2 or len(P) == 0:
        raise ValueError("P_series must be a nonempty (N, M) array")
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    c = 1.0 / n_runs
    return (1.0 - c) * gram_matrix(P) + c * np.diag(P.mean(axis=0))


def runs_heuristic(lambda_min: float, factor: float = 3.0) -> int:
    """Run count ``ceil(factor / lambda_min)`` needed to resolve the weakest Gram direction.

    Computed in exact rational arithmetic on the decimal values given.
    """
    if not lambda_min > 0:
        raise ValueError("lambda_min must be positive")
    ratio = Fraction(repr(float(factor))) / Fraction(repr(float(lambda_min)))
    return math.ceil(ratio)


@dataclass
class NoiseSweepResult:
    runs_grid: list[int]
    metric_values: list[float]
    exact_metric: float
    lambda_min: float
    shot_lambda_min: list[float] = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n_runs", "metric", "exact_metric", "lambda_min"])
            for n, m in zip(self.runs_grid, self.metric_values):
                w.writerow([n, repr(m), repr(self.exact_metric), repr(self.lambda_min)])


def noise_sweep(cfg: EsnConfig, task: TaskData, runs_grid, master_seed: int,
                lam: float = DEFAULT_LAMBDA, workers: int = 1) -> NoiseSweepResult:
    """Test metric versus shot count, alongside the exact-probability metric.

    The grid points share one batch of runs (the ``N``-run estimate uses runs
    ``0 .. N - 1``), so a larger grid point refines rather than replaces a
    smaller one.
    """
    grid = [int(g) for g in runs_grid]
    if not grid:
        raise ValueError("runs_grid must be nonempty")
    exact = evaluate(exact_readouts(cfg, task), task, lam)
    metrics, shot_lmin = [], []
    for table in nested_counts(cfg, task.inputs, grid, master_seed, workers):
        ev = evaluate(shot_readouts(table), task, lam)
        metrics.append(ev.metric)
        shot_lmin.append(ev.lambda_min)
    return NoiseSweepResult(grid, metrics, exact.metric, exact.lambda_min, shot_lmin)
