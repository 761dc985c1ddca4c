"""Glue from a network and a task to a trained readout and a test-window score.

Readout row ``k`` is the reservoir state *after* consuming ``u_k`` (trajectory
entry ``k + 1``), so it depends on ``u_k, u_{k-1}, ...`` but never on ``y_k``.
For Lorenz-X, where ``u_k = y_{k-1}``, this is one-step-ahead prediction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baseline import run_deterministic_esn
from .esn import EsnConfig, simulate_exact
from .sampler import CountTable, accumulate_counts, estimate_probabilities
from .tasks import TaskData
from .training import (DEFAULT_LAMBDA, FitResult, classification_error_rate,
                       deterministic_readouts, fit_ridge, nmse, predict)

MODES = ("deterministic", "stochastic_exact", "stochastic_shots")


def task_metric(task: TaskData, predictions, targets) -> float:
    """NMSE for regression tasks, error percentage for sine-square."""
    if task.name == "sine_square":
        return classification_error_rate(predictions, targets)
    return nmse(predictions, targets)


def exact_readouts(cfg: EsnConfig, task: TaskData) -> np.ndarray:
    return simulate_exact(cfg, task.inputs)[1:]


def shot_readouts(counts: CountTable) -> np.ndarray:
    return estimate_probabilities(counts)[1:]


def deterministic_features(cfg: EsnConfig, task: TaskData) -> np.ndarray:
    return deterministic_readouts(run_deterministic_esn(cfg, task.inputs)[1:])


def readouts(cfg: EsnConfig, task: TaskData, mode: str, n_runs: int | None = None,
             seed: int = 0, workers: int = 1) -> np.ndarray:
    """``(T, D)`` readout rows for ``mode``, row ``k`` aligned with ``task.targets[k]``."""
    if mode == "deterministic":
        return deterministic_features(cfg, task)
    if mode == "stochastic_exact":
        return exact_readouts(cfg, task)
    if mode == "stochastic_shots":
        if not n_runs:
            raise ValueError("stochastic_shots mode needs n_runs >= 1")
        return shot_readouts(accumulate_counts(cfg, task.inputs, n_runs, seed, workers))
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


@dataclass
class Evaluation:
    metric: float
    lambda_min: float
    fit: FitResult


def evaluate(rows, task: TaskData, lam: float = DEFAULT_LAMBDA) -> Evaluation:
    """Fit on the training window, score on the test window."""
    rows = np.asarray(rows, dtype=float)
    tr, te = task.train_slice, task.test_slice
    fit = fit_ridge(rows[tr], task.targets[tr], lam)
    metric = task_metric(task, predict(fit.W, rows[te]), task.targets[te])
    return Evaluation(metric, fit.eigen_summary()["min"], fit)
