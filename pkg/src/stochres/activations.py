"""Controlled two-outcome probabilities for stochastic activation functions.

Each detector emits 1 with probability ``rho1(zeta)`` and 0 otherwise. Two
physical families are built in (a rotated, measured qubit and a single photon
detector fed by a coherent beam), plus a constant family used as a test
fixture for forced trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

KINDS = ("qubit", "optical", "constant")

DEFAULT_SHIFT = {"qubit": math.pi / 4, "optical": 1.0}


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise ValueError("activation arguments must be finite")


def rho_qubit(zeta, delta=math.pi / 4):
    """``sin(zeta + delta)**2``: probability of reading 1 after ``exp(-i sigma_x (zeta + delta))``."""
    _check_finite(zeta, delta)
    return np.sin(np.add(zeta, delta)) ** 2


def rho_optical(zeta, d=1.0):
    """``1 - exp(-(zeta + d)**2)``: click probability for coherent amplitude ``zeta + d``."""
    _check_finite(zeta, d)
    return -np.expm1(-np.add(zeta, d) ** 2)


@dataclass(frozen=True)
class ActivationDistribution:
    """A scalar controlled probability ``rho1``; ``rho0 = 1 - rho1``.

    ``shift`` is the qubit rotation offset, the optical beam offset, or the
    fixed probability for the ``constant`` kind.
    """

    kind: str
    shift: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}; expected one of {KINDS}")
        if not math.isfinite(self.shift):
            raise ValueError("activation shift must be finite")
        if self.kind == "constant" and not 0.0 <= self.shift <= 1.0:
            raise ValueError("constant activation probability must lie in [0, 1]")

    @classmethod
    def qubit(cls, delta: float = math.pi / 4) -> "ActivationDistribution":
        return cls("qubit", float(delta))

    @classmethod
    def optical(cls, d: float = 1.0) -> "ActivationDistribution":
        return cls("optical", float(d))

    @classmethod
    def constant(cls, c: float) -> "ActivationDistribution":
        return cls("constant", float(c))

    @classmethod
    def default(cls, kind: str) -> "ActivationDistribution":
        """The family with its universality-friendly default shift."""
        return cls(kind, DEFAULT_SHIFT[kind])

    def rho1(self, zeta):
        if self.kind == "qubit":
            return rho_qubit(zeta, self.shift)
        if self.kind == "optical":
            return rho_optical(zeta, self.shift)
        _check_finite(zeta)
        return np.full(np.shape(zeta), self.shift) if np.ndim(zeta) else self.shift

    def rho0(self, zeta):
        return 1.0 - self.rho1(zeta)

    __call__ = rho1


Rho1 = Union[ActivationDistribution, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class UniversalityReport:
    continuous_ok: bool
    bounded_away_ok: bool
    monotonic_ok: bool

    @property
    def overall(self) -> bool:
        return self.continuous_ok and self.bounded_away_ok and self.monotonic_ok

    def as_dict(self) -> dict:
        return {
            "continuous_ok": self.continuous_ok,
            "bounded_away_ok": self.bounded_away_ok,
            "monotonic_ok": self.monotonic_ok,
            "overall": self.overall,
        }


def check_universality_criteria(rho: Rho1, r_zeta: float, grid_points: int = 1001,
                                jump_factor: float = 5.0) -> UniversalityReport:
    """Grid check of the two-outcome universality conditions on ``[-r_zeta, r_zeta]``.

    * continuity: the largest jump between neighbouring grid values is at most
      ``jump_factor`` times the median jump (a heuristic; mainly useful for
      tabulated, user-supplied ``rho``);
    * bounded away: ``rho1`` is never 0 on the grid, or never 1;
    * monotonic: ``rho1`` is strictly increasing or strictly decreasing at
      every adjacent pair.

    ``rho`` may be an :class:`ActivationDistribution` or any vectorized callable.
    """
    if not (math.isfinite(r_zeta) and r_zeta > 0):
        raise ValueError("r_zeta must be positive and finite")
    if int(grid_points) != grid_points or grid_points < 3:
        raise ValueError("grid_points must be an integer >= 3")
    grid = np.linspace(-r_zeta, r_zeta, int(grid_points))
    values = np.asarray(rho(grid), dtype=float)
    if values.shape != grid.shape or not np.all(np.isfinite(values)):
        raise ValueError("rho must return one finite value per grid point")
    if values.min() < 0.0 or values.max() > 1.0:
        raise ValueError("rho values must lie in [0, 1]")

    steps = np.diff(values)
    jumps = np.abs(steps)
    continuous = bool(jumps.max() <= jump_factor * np.median(jumps))
    bounded = bool(np.all(values > 0.0) or np.all(values < 1.0))
    monotonic = bool(np.all(steps > 0.0) or np.all(steps < 0.0))
    return UniversalityReport(continuous, bounded, monotonic)


def two_outcome_determinant(rho: Rho1, zeta1: float, zeta2: float) -> float:
    """Determinant of the single-detector transition matrix with columns at ``zeta1``, ``zeta2``.

    The matrix is ``[[r1, r2], [1 - r1, 1 - r2]]`` with ``ri = rho1(zeta_i)``,
    whose determinant reduces to ``r1 - r2``; it is nonzero whenever ``rho1``
    is strictly monotonic and ``zeta1 != zeta2``.
    """
    r1 = float(rho(zeta1))
    r2 = float(rho(zeta2))
    return r1 - r2
