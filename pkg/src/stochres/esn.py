"""Stochastic echo state networks.

``L`` binary detectors are driven by ``z = A @ x + B @ u`` where ``x`` is the
previous outcome; detector ``i`` fires with probability ``rho1(z[i])``
independently of the others. The outcome ``x`` is indexed by the integer
``a = sum_i x[i] * 2**i`` (little-endian: detector 0 is the lowest bit), so
there are ``M = 2**L`` outcomes and the exact readout is a length-``M``
probability vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .activations import ActivationDistribution
from .markov import MAX_DETECTORS, as_probability_vector

#: Slack on the ``|z| <= r_zeta`` window to absorb rounding in ``A @ x + B @ u``.
BOUND_TOL = 1e-12


class BoundsError(ValueError):
    """An input or activation argument left its admissible window."""


def outcome_bits(a: int, L: int) -> np.ndarray:
    """Bit vector of outcome index ``a``; component ``i`` is bit ``i`` of ``a``."""
    if not 0 <= a < 2**L:
        raise ValueError(f"outcome index {a} out of range for L={L}")
    return np.array([(a >> i) & 1 for i in range(L)], dtype=np.int8)


def bits_to_index(bits) -> int:
    return int(sum(int(b) << i for i, b in enumerate(bits)))


@lru_cache(maxsize=None)
def _outcome_table(L: int) -> np.ndarray:
    a = np.arange(2**L)
    table = ((a[:, None] >> np.arange(L)) & 1).astype(float)
    table.setflags(write=False)
    return table


def all_outcomes(L: int) -> np.ndarray:
    """``(2**L, L)`` array whose row ``a`` is ``outcome_bits(a, L)`` (read-only)."""
    return _outcome_table(L)


@dataclass(frozen=True, eq=False)
class EsnConfig:
    """Weights and activation of a stochastic ESN.

    Attributes:
        A: ``(L, L)`` recurrent weights.
        B: ``(L, n)`` input weights.
        rho: the detectors' controlled probability.
        r_zeta: half-width of the admissible window for each ``z[i]``.
        r_u: bound on ``max |u|``.
        seed: the weight-sampling seed, if the config was sampled.
        strict: when true, construction rejects weights whose worst case
            ``sum_j |A_ij| + R_u * sum_j |B_ij|`` exceeds ``r_zeta``.
    """

    A: np.ndarray
    B: np.ndarray
    rho: ActivationDistribution
    r_zeta: float
    r_u: float = 1.0
    seed: Optional[int] = None
    strict: bool = field(default=True, repr=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=float, ndmin=2)
        B = np.array(self.B, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
        L = A.shape[0]
        if A.shape != (L, L):
            raise ValueError(f"A must be square, got shape {A.shape}")
        if B.ndim != 2 or B.shape[0] != L:
            raise ValueError(f"B must have shape (L, n) with L={L}, got {B.shape}")
        if not 1 <= L <= MAX_DETECTORS:
            raise ValueError(f"detector count must be in [1, {MAX_DETECTORS}], got {L}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
            raise ValueError("weights must be finite")
        if not (self.r_zeta > 0 and self.r_u >= 0):
            raise ValueError("r_zeta must be positive and r_u nonnegative")
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if self.strict and not self.satisfies_bound():
            raise BoundsError(
                f"worst-case |z| = {self.worst_case_z().max():.6g} exceeds r_zeta = {self.r_zeta:.6g}"
            )

    @property
    def L(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.B.shape[1]

    @property
    def M(self) -> int:
        return 2**self.L

    def worst_case_z(self) -> np.ndarray:
        """Per-detector bound on ``|z|`` over binary outcomes and ``|u| <= r_u``."""
        return np.abs(self.A).sum(axis=1) + np.abs(self.B).sum(axis=1) * self.r_u

    def satisfies_bound(self) -> bool:
        return bool(np.all(self.worst_case_z() <= self.r_zeta + BOUND_TOL))

    def check_input(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if u.shape != (self.n,):
            raise ValueError(f"input must have shape ({self.n},), got {u.shape}")
        if not np.all(np.isfinite(u)) or np.abs(u).max() > self.r_u + BOUND_TOL:
            raise BoundsError(f"input {u} outside the bound |u| <= {self.r_u}")
        return u

    def activation_args(self, u, x=None) -> np.ndarray:
        """``z = A @ x + B @ u``; with ``x=None``, one row per outcome index."""
        u = self.check_input(u)
        if x is None:
            x = all_outcomes(self.L)
        z = np.asarray(x, dtype=float) @ self.A.T + self.B @ u
        if np.abs(z).max() > self.r_zeta + BOUND_TOL:
            raise BoundsError(f"activation argument {np.abs(z).max():.6g} outside [-{self.r_zeta}, {self.r_zeta}]")
        return z

    def __eq__(self, other):
        if not isinstance(other, EsnConfig):
            return NotImplemented
        return (np.array_equal(self.A, other.A) and np.array_equal(self.B, other.B)
                and self.rho == other.rho and self.r_zeta == other.r_zeta
                and self.r_u == other.r_u and self.seed == other.seed)

    def to_dict(self) -> dict:
        return {
            "kind": self.rho.kind,
            "shift": self.rho.shift,
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "r_zeta": self.r_zeta,
            "r_u": self.r_u,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EsnConfig":
        return cls(
            A=np.array(d["A"], dtype=float),
            B=np.array(d["B"], dtype=float),
            rho=ActivationDistribution(d["kind"], float(d["shift"])),
            r_zeta=float(d["r_zeta"]),
            r_u=float(d["r_u"]),
            seed=d.get("seed"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EsnConfig":
        return cls.from_dict(json.loads(text))


def _kron_columns(p1: np.ndarray) -> np.ndarray:
    """Row ``b`` of the result is ``kron(v[L-1], ..., v[0])`` with ``v[i] = (1 - p1[b, i], p1[b, i])``.

    The last Kronecker factor varies fastest, so the flat index is
    little-endian in the detector bits, matching :func:`outcome_bits`.
    """
    rows = p1.shape[0]
    cur = np.ones((rows, 1))
    for i in range(p1.shape[1]):
        pair = np.stack([1.0 - p1[:, i], p1[:, i]], axis=1)
        cur = (pair[:, :, None] * cur[:, None, :]).reshape(rows, -1)
    return cur


def build_transition_matrix(cfg: EsnConfig, u) -> np.ndarray:
    """Column-stochastic ``p(u)``: ``p[a, b] = prod_i rho_{a_i}(z_b[i])`` with ``z_b = A x_b + B u``."""
    z = cfg.activation_args(u)
    p1 = np.asarray(cfg.rho(z), dtype=float)
    return _kron_columns(p1).T


def sample_weights(rng_seed: int, L: int, n: int, rho: ActivationDistribution,
                   r_zeta: float, r_u: float = 1.0, safety: float = 0.99) -> EsnConfig:
    """Draw ``A`` and ``B`` uniformly on ``[-1, 1]`` and shrink rows into the window.

    Row ``i`` is scaled down so that ``sum_j |A_ij| + r_u * sum_j |B_ij|`` is at
    most ``safety * r_zeta``; rows already inside are left alone.
    """
    if not 0.0 < safety <= 1.0:
        raise ValueError("safety must lie in (0, 1]")
    if not r_zeta > 0:
        raise ValueError("r_zeta must be positive")
    rng = np.random.default_rng(rng_seed)
    A = rng.uniform(-1.0, 1.0, size=(L, L))
    B = rng.uniform(-1.0, 1.0, size=(L, n))
    target = safety * r_zeta
    worst = np.abs(A).sum(axis=1) + np.abs(B).sum(axis=1) * r_u
    scale = np.where(worst > target, target / np.where(worst > 0, worst, 1.0), 1.0)
    return EsnConfig(A * scale[:, None], B * scale[:, None], rho, r_zeta, r_u, seed=int(rng_seed))


def default_window(kind: str) -> float:
    """Largest ``r_zeta`` for which the default-shift family stays universal (exclusive)."""
    return {"qubit": math.pi / 4, "optical": 1.0}[kind]


def simulate_exact(cfg: EsnConfig, inputs, P0=None) -> np.ndarray:
    """Exact trajectory ``P_0, ..., P_T`` under ``P_{k+1} = p(u_k) P_k``.

    ``inputs`` has shape ``(T, n)`` (or ``(T,)`` when ``n == 1``). ``P0``
    defaults to the uniform distribution. Returns a ``(T + 1, M)`` array.
    """
    inputs = _as_input_matrix(inputs, cfg.n)
    P = np.full(cfg.M, 1.0 / cfg.M) if P0 is None else as_probability_vector(P0)
    if P.shape != (cfg.M,):
        raise ValueError(f"P0 must have length {cfg.M}")
    out = np.empty((len(inputs) + 1, cfg.M))
    out[0] = P
    for k, u in enumerate(inputs):
        P = build_transition_matrix(cfg, u) @ P
        P /= P.sum()
        out[k + 1] = P
    return out


def block_compose(first: EsnConfig, second: EsnConfig) -> EsnConfig:
    """ESN with ``A = diag(A1, A2)`` and ``B = [B1; B2]``.

    The joint outcome index is ``a1 + 2**L1 * a2``, so the joint exact
    distribution at every step is ``np.kron(P2, P1)``.
    """
    if first.n != second.n or first.rho != second.rho:
        raise ValueError("block composition needs matching input dimension and activation")
    L1, L2 = first.L, second.L
    A = np.zeros((L1 + L2, L1 + L2))
    A[:L1, :L1] = first.A
    A[L1:, L1:] = second.A
    B = np.vstack([first.B, second.B])
    return EsnConfig(A, B, first.rho, max(first.r_zeta, second.r_zeta), min(first.r_u, second.r_u))


def _as_input_matrix(inputs, n: int) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim == 1:
        inputs = inputs.reshape(-1, 1) if n == 1 else inputs.reshape(-1, n)
    if inputs.ndim != 2 or inputs.shape[1] != n:
        raise ValueError(f"inputs must have shape (T, {n}), got {inputs.shape}")
    return inputs
