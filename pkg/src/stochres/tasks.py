"""Benchmark input/target series: sine-square identification and Lorenz-X prediction."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

LORENZ_PARAMS = {"a": 10.0, "b": 28.0, "c": 8.0 / 3.0}
LORENZ_INITIAL = (0.5, 0.1, 0.2)

SINE_SQUARE_SPLITS = (96, 3000, 504)
LORENZ_SPLITS = (100, 3000, 500)


class DivergenceError(RuntimeError):
    """Numerical integration produced a non-finite state."""


@dataclass(frozen=True)
class AffineScale:
    """``scaled = gain * raw + offset``."""

    gain: float = 1.0
    offset: float = 0.0

    def apply(self, raw):
        return self.gain * np.asarray(raw, dtype=float) + self.offset

    def invert(self, scaled):
        return (np.asarray(scaled, dtype=float) - self.offset) / self.gain

    @classmethod
    def onto_unit_interval(cls, raw) -> "AffineScale":
        lo, hi = float(np.min(raw)), float(np.max(raw))
        if hi <= lo:
            raise ValueError("cannot scale a constant series")
        gain = 2.0 / (hi - lo)
        return cls(gain, -1.0 - gain * lo)


@dataclass
class TaskData:
    """Inputs ``u_k`` (``(T, n)``) and scalar targets ``y_k`` split into three windows."""

    inputs: np.ndarray
    targets: np.ndarray
    washout: int
    train_len: int
    test_len: int
    input_scale: AffineScale = field(default_factory=AffineScale)
    name: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        if self.inputs.ndim == 1:
            self.inputs = self.inputs[:, None]
        self.targets = np.asarray(self.targets, dtype=float)
        T = self.washout + self.train_len + self.test_len
        if len(self.inputs) != T or len(self.targets) != T:
            raise ValueError(f"series length must equal washout + train + test = {T}")

    @property
    def T(self) -> int:
        return len(self.targets)

    @property
    def train_slice(self) -> slice:
        return slice(self.washout, self.washout + self.train_len)

    @property
    def test_slice(self) -> slice:
        return slice(self.washout + self.train_len, self.T)

    def split_labels(self) -> list[str]:
        return ["washout"] * self.washout + ["train"] * self.train_len + ["test"] * self.test_len

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "u", "y", "split"])
            for k, (u, y, s) in enumerate(zip(self.inputs[:, 0], self.targets, self.split_labels())):
                w.writerow([k, repr(float(u)), repr(float(y)), s])


def gen_sine_square(n_periods: int = 450, label_seed: int = 0, washout: int = 96,
                    train_len: int = 3000, test_len: int | None = None) -> TaskData:
    """Random alternation of 8-step sine and square blocks; target 1 marks square.

    ``n_periods`` 8-step blocks are generated (``T = 8 * n_periods``); the test
    window takes whatever follows washout and training unless given.
    """
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    T = 8 * n_periods
    if test_len is None:
        test_len = T - washout - train_len
    if test_len < 0 or washout + train_len + test_len != T:
        raise ValueError(f"splits {washout}+{train_len}+{test_len} do not cover {T} steps")
    labels = np.random.default_rng(label_seed).integers(0, 2, size=n_periods)
    k = np.arange(T)
    tau = labels[k // 8]
    sine = np.sin(np.pi * k / 4)
    square = np.where((k // 4) % 2 == 0, 1.0, -1.0)
    u = np.where(tau == 0, sine, square)
    return TaskData(u, tau.astype(float), washout, train_len, test_len, AffineScale(),
                    name="sine_square", metadata={"label_seed": label_seed, "period": 8})


def lorenz_rhs(state, a=LORENZ_PARAMS["a"], b=LORENZ_PARAMS["b"], c=LORENZ_PARAMS["c"]):
    x, y, z = state
    return np.array([a * (y - x), x * (b - z) - y, x * y - c * z])


def rk4_step(f, state, h):
    k1 = f(state)
    k2 = f(state + 0.5 * h * k1)
    k3 = f(state + 0.5 * h * k2)
    k4 = f(state + h * k3)
    return state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_lorenz(n_samples: int, dt: float = 0.1, substeps: int = 10,
                     initial=LORENZ_INITIAL) -> np.ndarray:
    """``(n_samples, 3)`` states sampled every ``dt``, integrated by RK4 with step ``dt / substeps``.

    Row 0 is the initial state.
    """
    if not dt > 0 or substeps < 1:
        raise ValueError("dt must be positive and substeps >= 1")
    h = dt / substeps
    a, b, c = LORENZ_PARAMS["a"], LORENZ_PARAMS["b"], LORENZ_PARAMS["c"]

    def f(x, y, z):
        return a * (y - x), x * (b - z) - y, x * y - c * z

    out = np.empty((n_samples, 3))
    x, y, z = (float(v) for v in initial)
    for j in range(n_samples):
        out[j] = x, y, z
        # scalar RK4, unrolled
        for _ in range(substeps):
            k1 = f(x, y, z)
            k2 = f(x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], z + 0.5 * h * k1[2])
            k3 = f(x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], z + 0.5 * h * k2[2])
            k4 = f(x + h * k3[0], y + h * k3[1], z + h * k3[2])
            x += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            y += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            z += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
            if abs(x) > 1e150 or abs(z) > 1e150:
                break
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)) or abs(x) > 1e150 or abs(z) > 1e150:
            raise DivergenceError(
                f"Lorenz integration diverged at sample {j} with dt={dt}, substeps={substeps} "
                f"(RK4 step {h}); use more substeps"
            )
    return out


def gen_lorenz_x(total_steps: int | None = None, dt: float = 0.1, substeps: int = 10,
                 washout: int = 100, train_len: int = 3000, test_len: int = 500,
                 burn_in: int = 1000, initial=LORENZ_INITIAL) -> TaskData:
    """One-step-ahead prediction of the Lorenz ``X`` coordinate sampled every ``dt``.

    After discarding ``burn_in`` samples, ``u_k`` is ``X`` at sample ``k`` and
    ``y_k`` is ``X`` at sample ``k + 1`` (so ``u_k = y_{k-1}``). Both are mapped
    by the affine scale that sends the training window of inputs onto
    ``[-1, 1]``; inputs of the other windows falling outside are clipped, and
    the number clipped is recorded in ``metadata["clipped"]``.

    RK4 runs with step ``dt / substeps`` (0.01 by default); a single RK4 step
    of 1.0 diverges for this system. At ``dt = 1.0`` the samples are about one
    Lyapunov time apart and one-step prediction is nearly hopeless (NMSE near
    1 for every readout), so the default samples every 0.1.
    """
    if total_steps is None:
        total_steps = washout + train_len + test_len
    elif total_steps != washout + train_len + test_len:
        test_len = total_steps - washout - train_len
        if test_len < 0:
            raise ValueError("total_steps shorter than washout + train_len")
    states = integrate_lorenz(burn_in + total_steps + 1, dt, substeps, initial)
    x = states[burn_in:, 0]
    raw_u, raw_y = x[:-1], x[1:]
    train = slice(washout, washout + train_len)
    scale = AffineScale.onto_unit_interval(raw_u[train])
    u = scale.apply(raw_u)
    clipped = int(np.sum(np.abs(u) > 1.0))
    u = np.clip(u, -1.0, 1.0)
    y = scale.apply(raw_y)
    meta = dict(LORENZ_PARAMS, dt=dt, substeps=substeps, burn_in=burn_in,
                initial=list(initial), clipped=clipped)
    return TaskData(u, y, washout, train_len, test_len, scale, name="lorenz_x", metadata=meta)
