"""Deterministic ESN that uses the mean activation ``rho1`` in place of sampling."""

from __future__ import annotations

import csv

import numpy as np

from .esn import EsnConfig, _as_input_matrix


def run_deterministic_esn(cfg: EsnConfig, inputs, x0=None) -> np.ndarray:
    """Trajectory of ``x_{k+1} = rho1(A x_k + B u_k)``; returns ``(T + 1, L)``.

    Uses the same weights and window check as the stochastic network, so the
    two can be compared on identical ``(A, B)`` draws.
    """
    inputs = _as_input_matrix(inputs, cfg.n)
    x = np.zeros(cfg.L) if x0 is None else np.array(x0, dtype=float)
    if x.shape != (cfg.L,) or x.min() < 0 or x.max() > 1:
        raise ValueError(f"x0 must be a length-{cfg.L} vector in [0, 1]")
    out = np.empty((len(inputs) + 1, cfg.L))
    out[0] = x
    for k, u in enumerate(inputs):
        x = np.asarray(cfg.rho(cfg.activation_args(u, x)), dtype=float)
        out[k + 1] = x
    return out


def states_to_csv(states, path) -> None:
    states = np.asarray(states)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k"] + [f"x{i}" for i in range(states.shape[1])])
        for k, row in enumerate(states):
            w.writerow([k] + [repr(float(v)) for v in row])
