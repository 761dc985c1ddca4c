"""Finite-shot simulation of stochastic ESNs and probability estimation.

Randomness is counter-based so that results never depend on how runs are
scheduled. Run ``r`` of a batch gets the key ``run_key(master_seed, r)``; the
uniform draw for step ``k`` and detector ``i`` is output number ``k * L + i``
of the SplitMix64 stream started from that key::

    draw = (mix64(key + (k * L + i + 1) * GAMMA) >> 11) / 2**53

Because each draw is a pure function of ``(key, k, i)``, the whole batch is
evaluated with vectorized ``uint64`` arithmetic and any sharding of run indices
over workers reproduces the same counts bit for bit.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numba
import numpy as np

from .esn import EsnConfig, _as_input_matrix, bits_to_index

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1

#: Runs simulated per shard; fixed so shard boundaries never depend on worker count.
CHUNK_RUNS = 1 << 15

#: Cap on the float64 entries of one block of precomputed firing-probability tables.
_TABLE_BUDGET = 1 << 21


def mix64(x) -> np.ndarray:
    """SplitMix64 output finalizer on ``uint64`` values (wrapping arithmetic)."""
    shape = np.shape(x)
    z = np.array(x, dtype=np.uint64, ndmin=1)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return (z ^ (z >> np.uint64(31))).reshape(shape)


def _u64(v: int) -> np.ndarray:
    # wrapping uint64 arithmetic must stay on arrays, never numpy scalars
    return np.array([int(v) & _MASK], dtype=np.uint64)


def derive_seed(*keys: int) -> int:
    """Fold integers into one well-mixed 64-bit seed (order matters)."""
    h = mix64(_u64(0x6A09E667F3BCC909) + GAMMA)
    for k in keys:
        h = mix64(h ^ mix64(_u64(k) + GAMMA))
    return int(h[0])


def run_keys(master_seed: int, start: int, stop: int) -> np.ndarray:
    """Stream keys for runs ``start .. stop - 1`` of a batch seeded by ``master_seed``."""
    base = mix64(_u64(master_seed) + GAMMA)
    r = np.arange(start, stop, dtype=np.uint64)
    return mix64(base ^ mix64(r + GAMMA))


def run_key(master_seed: int, r: int) -> int:
    return int(run_keys(master_seed, r, r + 1)[0])


def uniforms(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """``[0, 1)`` doubles for every (key, counter) pair; shape ``keys.shape + counters.shape``."""
    keys = np.asarray(keys, dtype=np.uint64)
    offs = (np.asarray(counters, dtype=np.uint64) + np.uint64(1)) * GAMMA
    bits = mix64(keys[..., None] + offs)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / 2**53)


@numba.njit(cache=True, nogil=True)
def _advance_block(keys, state, p1_tables, k0, counts):
    """Advance every run through the steps in ``p1_tables`` (shape ``(steps, M, L)``).

    Same draws as :func:`uniforms`, written out for speed; ``counts[j + 1]``
    receives the outcome histogram after step ``k0 + j``.
    """
    n_steps, _, L = p1_tables.shape
    gamma = np.uint64(0x9E3779B97F4A7C15)
    m1 = np.uint64(0xBF58476D1CE4E5B9)
    m2 = np.uint64(0x94D049BB133111EB)
    scale = 1.0 / 9007199254740992.0
    for r in range(keys.shape[0]):
        key = keys[r]
        s = state[r]
        for j in range(n_steps):
            base = np.uint64((k0 + j) * L + 1)
            new = 0
            for i in range(L):
                z = key + (base + np.uint64(i)) * gamma
                z = (z ^ (z >> np.uint64(30))) * m1
                z = (z ^ (z >> np.uint64(27))) * m2
                z = z ^ (z >> np.uint64(31))
                if float(z >> np.uint64(11)) * scale < p1_tables[j, s, i]:
                    new |= 1 << i
            s = new
            counts[j + 1, s] += 1
        state[r] = s


def _firing_tables(cfg: EsnConfig, inputs: np.ndarray) -> np.ndarray:
    """``(T, M, L)`` probabilities that detector ``i`` fires from outcome ``b`` at step ``k``."""
    return np.stack([np.asarray(cfg.rho(cfg.activation_args(u)), dtype=float) for u in inputs]) \
        if len(inputs) else np.zeros((0, cfg.M, cfg.L))


def _simulate_runs(cfg: EsnConfig, inputs: np.ndarray, keys: np.ndarray, x0_index: int) -> np.ndarray:
    """Per-step outcome counts for one batch of runs (compiled kernel)."""
    T, M = len(inputs), cfg.M
    counts = np.zeros((T + 1, M), dtype=np.int64)
    counts[0, x0_index] = len(keys)
    state = np.full(len(keys), x0_index, dtype=np.int64)
    block = max(1, _TABLE_BUDGET // (M * cfg.L))
    for k0 in range(0, T, block):
        tables = _firing_tables(cfg, inputs[k0:k0 + block])
        _advance_block(keys, state, tables, k0, counts[k0:k0 + len(tables) + 1])
    return counts


def _simulate_paths(cfg: EsnConfig, inputs: np.ndarray, keys: np.ndarray, x0_index: int) -> np.ndarray:
    """``(T + 1, R)`` outcome-index paths, vectorized numpy reference implementation."""
    L = cfg.L
    weights = (1 << np.arange(L)).astype(np.int64)
    state = np.full(len(keys), x0_index, dtype=np.int64)
    paths = np.empty((len(inputs) + 1, len(keys)), dtype=np.int64)
    paths[0] = state
    det = np.arange(L, dtype=np.uint64)
    for k, u in enumerate(inputs):
        p1_table = np.asarray(cfg.rho(cfg.activation_args(u)), dtype=float)
        fired = uniforms(keys, np.uint64(k * L) + det) < p1_table[state]
        state = fired.astype(np.int64) @ weights
        paths[k + 1] = state
    return paths


def run_trajectory(cfg: EsnConfig, inputs, seed: int, x0=None) -> np.ndarray:
    """One sampled outcome path; row ``k`` of the ``(T + 1, L)`` result is ``x_k``.

    ``seed`` is the run's stream key (see module docstring). ``x0`` defaults
    to all zeros.
    """
    inputs = _as_input_matrix(inputs, cfg.n)
    x0_index = _x0_index(cfg, x0)
    paths = _simulate_paths(cfg, inputs, np.array([int(seed) & _MASK], dtype=np.uint64), x0_index)
    idx = paths[:, 0]
    return ((idx[:, None] >> np.arange(cfg.L)) & 1).astype(np.int8)


def _x0_index(cfg: EsnConfig, x0) -> int:
    if x0 is None:
        return 0
    x0 = np.asarray(x0)
    if x0.shape != (cfg.L,) or not np.isin(x0, (0, 1)).all():
        raise ValueError(f"x0 must be a length-{cfg.L} bit vector")
    return bits_to_index(x0)


@dataclass
class CountTable:
    """``counts[k, a]``: number of runs whose step-``k`` outcome index is ``a``."""

    counts: np.ndarray
    n_runs: int

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2:
            raise ValueError("counts must be a 2-D (steps, outcomes) array")
        if (self.counts < 0).any():
            raise ValueError("counts must be nonnegative")
        if not np.all(self.counts.sum(axis=1) == self.n_runs):
            raise ValueError("every row of counts must sum to n_runs")

    @property
    def M(self) -> int:
        return self.counts.shape[1]

    def frequencies(self) -> np.ndarray:
        """Raw relative frequencies ``n / N_runs`` (no prior)."""
        return self.counts / self.n_runs

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "a", "count"])
            for k, row in enumerate(self.counts):
                for a, c in enumerate(row):
                    w.writerow([k, a, int(c)])

    @classmethod
    def from_csv(cls, path) -> "CountTable":
        with open(path, newline="") as fh:
            rows = [(int(r["k"]), int(r["a"]), int(r["count"])) for r in csv.DictReader(fh)]
        T1 = max(r[0] for r in rows) + 1
        M = max(r[1] for r in rows) + 1
        counts = np.zeros((T1, M), dtype=np.int64)
        for k, a, c in rows:
            counts[k, a] = c
        return cls(counts, int(counts[0].sum()))


def count_range(cfg: EsnConfig, inputs, master_seed: int, start: int, stop: int,
                workers: int = 1, x0=None) -> np.ndarray:
    """Raw count array for runs ``start .. stop - 1`` of the batch ``master_seed``."""
    inputs = _as_input_matrix(inputs, cfg.n)
    x0_index = _x0_index(cfg, x0)
    bounds = list(range(start, stop, CHUNK_RUNS)) + [stop]
    shards = list(zip(bounds[:-1], bounds[1:]))

    def work(shard):
        lo, hi = shard
        return _simulate_runs(cfg, inputs, run_keys(master_seed, lo, hi), x0_index)

    total = np.zeros((len(inputs) + 1, cfg.M), dtype=np.int64)
    if workers <= 1 or len(shards) <= 1:
        parts = map(work, shards)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, shards))
    for part in parts:
        total += part
    return total


def accumulate_counts(cfg: EsnConfig, inputs, n_runs: int, master_seed: int,
                      workers: int = 1, x0=None) -> CountTable:
    """Outcome counts over ``n_runs`` independent trajectories.

    Identical for any ``workers`` value given the same ``master_seed``.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    return CountTable(count_range(cfg, inputs, master_seed, 0, n_runs, workers, x0), n_runs)


def nested_counts(cfg: EsnConfig, inputs, runs_grid: Iterable[int], master_seed: int,
                  workers: int = 1, x0=None) -> list[CountTable]:
    """Count tables for each ``N`` in an increasing grid, sharing one batch.

    The table for ``N`` covers runs ``0 .. N - 1``, i.e. exactly what
    ``accumulate_counts(cfg, inputs, N, master_seed)`` returns.
    """
    grid = [int(g) for g in runs_grid]
    if not grid or grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("runs_grid must be a nonempty, strictly increasing list of positive ints")
    tables = []
    running: Optional[np.ndarray] = None
    prev = 0
    for g in grid:
        part = count_range(cfg, inputs, master_seed, prev, g, workers, x0)
        running = part if running is None else running + part
        tables.append(CountTable(running.copy(), g))
        prev = g
    return tables


def estimate_probabilities(counts: CountTable) -> np.ndarray:
    """Posterior-mean estimate ``(n + 1) / (N_runs + M)`` under a flat prior.

    Every estimate is strictly positive and each row sums to 1.
    """
    c = counts.counts
    return (c + 1.0) / (counts.n_runs + counts.M)
