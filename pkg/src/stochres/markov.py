"""Controlled finite-state Markov chains on probability vectors.

Transition matrices are column-stochastic: entry ``p[a, b]`` is the probability
of moving to outcome ``a`` given the prior outcome ``b``, so a probability
vector evolves as ``P_next = p @ P``. Many libraries use the row-stochastic
transpose of this; be careful when mixing.
"""

from __future__ import annotations

import math

import numpy as np

#: Largest detector count allowed by default (M = 2**MAX_DETECTORS outcomes).
MAX_DETECTORS = 10

#: Floating-point drift tolerated (and silently corrected) in probability sums.
SUM_TOL = 1e-12


def as_probability_vector(entries, tol: float = SUM_TOL) -> np.ndarray:
    """Validate ``entries`` as a probability vector and return a float copy.

    Sums within ``tol`` of 1 are renormalized; anything further off raises.
    Negative entries no smaller than ``-tol`` are clipped to zero.
    """
    P = np.array(entries, dtype=float)
    if P.ndim != 1 or P.size == 0:
        raise ValueError(f"probability vector must be 1-D and nonempty, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ValueError("probability vector has non-finite entries")
    if P.min() < -tol:
        raise ValueError(f"probability vector has negative entry {P.min():.3e}")
    P = np.clip(P, 0.0, None)
    total = P.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"probability vector sums to {total!r}, not 1")
    return P / total


def as_transition_matrix(entries, tol: float = SUM_TOL) -> np.ndarray:
    """Validate ``entries`` as a square column-stochastic matrix.

    Columns whose sums deviate from 1 by at most ``tol`` are renormalized.
    """
    p = np.array(entries, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.size == 0:
        raise ValueError(f"transition matrix must be square, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("transition matrix has non-finite entries")
    if p.min() < -tol or p.max() > 1.0 + tol:
        raise ValueError("transition matrix entries must lie in [0, 1]")
    p = np.clip(p, 0.0, 1.0)
    sums = p.sum(axis=0)
    bad = np.abs(sums - 1.0) > tol
    if bad.any():
        b = int(np.argmax(bad))
        raise ValueError(f"column {b} sums to {sums[b]!r}, not 1")
    return p / sums


def propagate(p, P) -> np.ndarray:
    """One step of the chain: ``p @ P``, with sub-``SUM_TOL`` drift removed."""
    p = np.asarray(p, dtype=float)
    P = np.asarray(P, dtype=float)
    if p.ndim != 2 or P.ndim != 1 or p.shape[1] != P.shape[0]:
        raise ValueError(f"cannot propagate shape {P.shape} through matrix of shape {p.shape}")
    return as_probability_vector(p @ P)


def contraction_coefficient(p) -> float:
    """Tightest 1-norm contraction factor of ``p`` on differences of probability vectors.

    Equal to half the largest 1-norm distance between two columns. A matrix
    with ``eps < 1`` pulls any two distributions together by at least that
    factor per step; ``eps == 1`` means some pair of point masses is mapped to
    distributions with disjoint support.

    Computed as ``1 - min_{b1, b2} sum_a min(p[a, b1], p[a, b2])``, which equals
    the half-distance for stochastic columns and is exactly 1 for disjoint
    supports. When every pair overlaps the result is kept strictly below 1,
    so ``eps < 1`` agrees with :func:`is_contracting` even for tiny overlaps.
    """
    p = as_transition_matrix(p)
    M = p.shape[1]
    overlap = 1.0
    for b in range(M - 1):
        shared = np.minimum(p[:, b + 1 :], p[:, b : b + 1]).sum(axis=0)
        overlap = min(overlap, float(shared.min()))
    eps = min(max(1.0 - overlap, 0.0), 1.0)
    if overlap > 0.0 and eps == 1.0:
        eps = math.nextafter(1.0, 0.0)
    return eps


def maximizing_pair(p) -> tuple[int, int]:
    """Column pair ``(b1, b2)`` attaining :func:`contraction_coefficient`."""
    p = np.asarray(p, dtype=float)
    M = p.shape[1]
    dist = np.abs(p[:, :, None] - p[:, None, :]).sum(axis=0)
    b1, b2 = np.unravel_index(np.argmax(dist), (M, M))
    return int(b1), int(b2)


def is_contracting(p) -> bool:
    """True iff every entry of ``p.T @ p`` is strictly positive.

    Equivalently, every pair of columns shares at least one row where both are
    nonzero. No tolerance is applied: entries are nonnegative, so an exact zero
    is the only way to fail.
    """
    p = np.asarray(p, dtype=float)
    support = (p > 0).astype(float)
    return bool(np.all(support.T @ support > 0))


def has_positive_row(p) -> bool:
    """True iff some row of ``p`` is strictly positive (sufficient for contraction)."""
    p = np.asarray(p, dtype=float)
    return bool(np.any(np.all(p > 0, axis=1)))
