"""Ridge-regularized linear readouts and error metrics."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import linalg

DEFAULT_LAMBDA = 1e-10


class SingularGramError(np.linalg.LinAlgError):
    """Unregularized fit on a rank-deficient Gram matrix."""


def stochastic_readouts(P) -> np.ndarray:
    """Probability rows used directly as features (no bias column needed: rows sum to 1)."""
    P = np.asarray(P, dtype=float)
    if P.ndim != 2:
        raise ValueError("readouts must be 2-D")
    if P.min() < 0 or not np.allclose(P.sum(axis=1), 1.0, rtol=0, atol=1e-9):
        raise ValueError("stochastic readout rows must be probability vectors")
    return P


def deterministic_readouts(X) -> np.ndarray:
    """State rows with a trailing constant 1 column for the bias."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("readouts must be 2-D")
    return np.hstack([X, np.ones((len(X), 1))])


@dataclass
class FitResult:
    W: np.ndarray
    lam: float
    K: np.ndarray
    train_nmse: float

    def eigen_summary(self) -> dict:
        ev = linalg.eigvalsh(self.K)
        return {"min": float(ev[0]), "max": float(ev[-1])}

    def to_dict(self) -> dict:
        return {
            "W": self.W.tolist(),
            "lambda": self.lam,
            "train_nmse": self.train_nmse,
            "K_eigenvalues": self.eigen_summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def gram_matrix(rows) -> np.ndarray:
    """``(1/N) sum_k r_k r_k^T``, symmetrized."""
    rows = np.asarray(rows, dtype=float)
    K = rows.T @ rows / len(rows)
    return 0.5 * (K + K.T)


def _solve_spd(G: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        factor = linalg.cho_factor(G, lower=True, check_finite=False)
        W = linalg.cho_solve(factor, rhs, check_finite=False)
        # one step of iterative refinement
        W = W + linalg.cho_solve(factor, rhs - G @ W, check_finite=False)
    except linalg.LinAlgError:
        vals, vecs = linalg.eigh(G)
        keep = vals > vals.max() * np.finfo(float).eps * len(vals)
        W = vecs[:, keep] @ ((vecs[:, keep].T @ rhs) / vals[keep])
    return W


def fit_ridge(readouts, targets, lam: float = DEFAULT_LAMBDA) -> FitResult:
    """Solve ``(K + lam I) W = (1/N) sum_k r_k y_k`` with ``K`` the readout Gram matrix."""
    rows = np.asarray(readouts, dtype=float)
    y = np.asarray(targets, dtype=float)
    if rows.ndim != 2 or len(rows) < 1 or len(rows) != len(y):
        raise ValueError("need N >= 1 readout rows matching N targets")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    N, D = rows.shape
    K = gram_matrix(rows)
    rhs = rows.T @ y / N
    if lam == 0:
        ev = linalg.eigvalsh(K)
        if ev[0] <= max(ev[-1], 1.0) * D * np.finfo(float).eps:
            raise SingularGramError("Gram matrix is singular; use lam > 0 (e.g. 1e-10)")
    W = _solve_spd(K + lam * np.eye(D), rhs)
    pred = rows @ W
    try:
        train = nmse(pred, y)
    except ValueError:
        train = float("nan")
    return FitResult(W, float(lam), K, train)


def predict(W, readouts) -> np.ndarray:
    W = np.asarray(W, dtype=float)
    rows = np.asarray(readouts, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != W.shape[0]:
        raise ValueError(f"readouts of shape {rows.shape} do not match weights of length {W.shape[0]}")
    return rows @ W


def nmse(predictions, targets) -> float:
    """``sum (yhat - y)^2 / sum (y - mean(y))^2`` over the evaluation window."""
    yhat = np.asarray(predictions, dtype=float)
    y = np.asarray(targets, dtype=float)
    if yhat.shape != y.shape or y.size < 2:
        raise ValueError("need at least two matching predictions and targets")
    denom = np.sum((y - y.mean()) ** 2)
    if denom == 0:
        raise ValueError("targets are constant; NMSE is undefined")
    return float(np.sum((yhat - y) ** 2) / denom)


def classification_error_rate(predictions, targets) -> float:
    """Percentage of steps where ``yhat >= 0.5`` disagrees with ``y == 1``."""
    yhat = np.asarray(predictions, dtype=float)
    y = np.asarray(targets)
    if not np.isin(y, (0, 1)).all():
        raise ValueError("targets must be 0/1")
    return float(100.0 * np.mean((yhat >= 0.5) != (y == 1)))
