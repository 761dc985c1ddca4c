"""Config-driven detector sweeps and run-count sweeps with persisted results."""

from __future__ import annotations

import copy
import csv
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .activations import DEFAULT_SHIFT, ActivationDistribution
from .analysis import NoiseSweepResult, noise_sweep
from .esn import EsnConfig, default_window, sample_weights
from .markov import MAX_DETECTORS
from .pipeline import MODES, evaluate, readouts
from .sampler import derive_seed
from .tasks import LORENZ_SPLITS, SINE_SQUARE_SPLITS, TaskData, gen_lorenz_x, gen_sine_square
from .training import DEFAULT_LAMBDA

SCHEMA_VERSION = 1
TASKS = ("sine_square", "lorenz_x")
FAMILIES = ("qubit", "optical")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    task: str = "lorenz_x"
    family: str = "qubit"
    mode: str = "stochastic_exact"
    detectors: list = field(default_factory=lambda: [2, 3, 4])
    n_runs: Optional[int] = 100_000
    n_samples: int = 20
    master_seed: int = 0
    lam: float = DEFAULT_LAMBDA
    washout: Optional[int] = None
    train: Optional[int] = None
    test: Optional[int] = None
    dt: float = 0.1
    substeps: int = 10
    label_seed: int = 0
    shift: Optional[float] = None
    r_zeta: Optional[float] = None
    safety: float = 0.99
    runs_grid: list = field(default_factory=lambda: [100, 1000, 10_000, 100_000])
    max_detectors: int = MAX_DETECTORS
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(name, msg):
            raise ConfigError(f"{name}: {msg}")

        if self.schema_version != SCHEMA_VERSION:
            bad("schema_version", f"unsupported version {self.schema_version!r}")
        if self.task not in TASKS:
            bad("task", f"must be one of {TASKS}, got {self.task!r}")
        if self.family not in FAMILIES:
            bad("family", f"must be one of {FAMILIES}, got {self.family!r}")
        if self.mode not in MODES:
            bad("mode", f"must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.detectors, (list, tuple)) or not self.detectors:
            bad("detectors", "must be a nonempty list of integers")
        self.detectors = [int(d) for d in self.detectors]
        if not 1 <= self.max_detectors <= MAX_DETECTORS:
            bad("max_detectors", f"must lie in [1, {MAX_DETECTORS}]")
        for d in self.detectors:
            if not 1 <= d <= self.max_detectors:
                bad("detectors", f"entry {d} outside [1, {self.max_detectors}]")
        if int(self.n_samples) < 1:
            bad("n_samples", "must be >= 1")
        if self.mode == "stochastic_shots" and (self.n_runs is None or int(self.n_runs) < 1):
            bad("n_runs", "stochastic_shots mode needs n_runs >= 1")
        if self.n_runs is not None and int(self.n_runs) < 1:
            bad("n_runs", "must be >= 1 or null")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            bad("lam", "must be a finite nonnegative number")
        if not self.dt > 0:
            bad("dt", "must be positive")
        if int(self.substeps) < 1:
            bad("substeps", "must be >= 1")
        if not 0 < self.safety <= 1:
            bad("safety", "must lie in (0, 1]")
        if self.r_zeta is not None and not self.r_zeta > 0:
            bad("r_zeta", "must be positive")
        for name in ("washout", "train", "test"):
            v = getattr(self, name)
            if v is not None and int(v) < 0:
                bad(name, "must be nonnegative")
        grid = [int(g) for g in self.runs_grid]
        if not grid or grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
            bad("runs_grid", "must be a strictly increasing list of positive integers")
        self.runs_grid = grid

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        splits = d.pop("splits", None)
        if splits is not None:
            if not isinstance(splits, dict) or set(splits) - {"washout", "train", "test"}:
                raise ConfigError("splits: expected a table with keys washout, train, test")
            d.update(splits)
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown field(s): {', '.join(sorted(extra))}")
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    # -- derived pieces -------------------------------------------------------

    def activation(self) -> ActivationDistribution:
        shift = DEFAULT_SHIFT[self.family] if self.shift is None else self.shift
        return ActivationDistribution(self.family, float(shift))

    def window(self) -> float:
        return default_window(self.family) if self.r_zeta is None else float(self.r_zeta)

    def make_task(self) -> TaskData:
        if self.task == "sine_square":
            w, tr, te = SINE_SQUARE_SPLITS
            w = w if self.washout is None else int(self.washout)
            tr = tr if self.train is None else int(self.train)
            te = te if self.test is None else int(self.test)
            T = w + tr + te
            periods = -(-T // 8)
            data = gen_sine_square(periods, self.label_seed, w, tr, 8 * periods - w - tr)
            if 8 * periods != T:
                data = TaskData(data.inputs[:T], data.targets[:T], w, tr, te, data.input_scale,
                                data.name, data.metadata)
            return data
        w, tr, te = LORENZ_SPLITS
        return gen_lorenz_x(dt=self.dt, substeps=int(self.substeps),
                            washout=w if self.washout is None else int(self.washout),
                            train_len=tr if self.train is None else int(self.train),
                            test_len=te if self.test is None else int(self.test))

    @property
    def effective_runs(self) -> Optional[int]:
        """``n_runs`` when shots are drawn, else None."""
        return int(self.n_runs) if self.mode == "stochastic_shots" else None

    def weight_seed(self, detectors: int, sample: int) -> int:
        """Same for every mode, so modes are paired on identical (A, B) draws."""
        return derive_seed(self.master_seed, detectors, sample)

    def shot_seed(self, detectors: int, sample: int) -> int:
        return derive_seed(self.master_seed, detectors, sample, 0x5307)

    def network(self, detectors: int, sample: int) -> EsnConfig:
        return sample_weights(self.weight_seed(detectors, sample), detectors, 1,
                              self.activation(), self.window(), 1.0, self.safety)


def load_config(path) -> ExperimentConfig:
    """Read a TOML or JSON experiment config (by file extension)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".toml":
            import tomli

            data = tomli.loads(text)
        else:
            data = json.loads(text)
    except Exception as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


@dataclass
class SampleResult:
    detectors: int
    sample: int
    seed: int
    mode: str
    n_runs: Optional[int]
    metric: float
    lambda_min: float


@dataclass
class ExperimentRecord:
    config: dict
    config_hash: str
    rows: list

    def aggregates(self) -> list[dict]:
        """Mean and population standard deviation of the metric per detector count."""
        out = []
        for d in sorted({r.detectors for r in self.rows}):
            vals = np.array([r.metric for r in self.rows if r.detectors == d])
            out.append({"detectors": d, "n": int(vals.size),
                        "mean": float(vals.mean()), "std": float(vals.std())})
        return out

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "config_hash": self.config_hash,
            "rows": [asdict(r) for r in self.rows],
            "aggregates": self.aggregates(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentRecord":
        return cls(d["config"], d["config_hash"], [SampleResult(**r) for r in d["rows"]])

    @classmethod
    def from_json(cls, text: str) -> "ExperimentRecord":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, ExperimentRecord):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _run_point(config: ExperimentConfig, task: TaskData, detectors: int, sample: int) -> SampleResult:
    cfg = config.network(detectors, sample)
    rows = readouts(cfg, task, config.mode, config.effective_runs, config.shot_seed(detectors, sample))
    ev = evaluate(rows, task, config.lam)
    return SampleResult(detectors, sample, config.weight_seed(detectors, sample), config.mode,
                        config.effective_runs, float(ev.metric), float(ev.lambda_min))


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentRecord:
    """Evaluate every (detector count, sample) point; output is independent of ``threads``."""
    task = config.make_task()
    grid = [(d, s) for d in config.detectors for s in range(config.n_samples)]
    if threads <= 1:
        rows = [_run_point(config, task, d, s) for d, s in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda ds: _run_point(config, task, *ds), grid))
    return ExperimentRecord(config.to_dict(), config.hash(), rows)


def run_noise_sweep(config: ExperimentConfig, sample: int = 0, threads: int = 1) -> NoiseSweepResult:
    """Run-count sweep on the first configured detector count's network ``sample``."""
    d = config.detectors[0]
    return noise_sweep(config.network(d, sample), config.make_task(), config.runs_grid,
                       config.shot_seed(d, sample), config.lam, workers=threads)


# -- reports ------------------------------------------------------------------

CSV_COLUMNS = ["detectors", "sample", "seed", "mode", "n_runs", "metric", "lambda_min"]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(record: ExperimentRecord, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in record.rows:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
        mode = record.config.get("mode", "")
        n_runs = record.config.get("n_runs") if mode == "stochastic_shots" else None
        for agg in record.aggregates():
            for stat in ("mean", "std"):
                w.writerow([agg["detectors"], stat, "", mode, _fmt(n_runs), _fmt(agg[stat]), ""])


def _svg_figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "stochres"
    return plt


def _write_svg(record: ExperimentRecord, path: Path) -> None:
    plt = _svg_figure()
    aggs = record.aggregates()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar([a["detectors"] for a in aggs], [a["mean"] for a in aggs],
                yerr=[a["std"] for a in aggs], fmt="o-", capsize=3, label=record.config.get("mode"))
    ax.set_xlabel("# of detectors")
    if record.config.get("task") == "lorenz_x":
        ax.set_yscale("log")
        ax.set_ylabel("test NMSE")
    else:
        ax.set_ylabel("test error (%)")
    ax.set_title(f"{record.config.get('task')} / {record.config.get('family')}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_report(record: ExperimentRecord, fmt: str, out_dir) -> Path:
    """Write ``results.<fmt>`` (csv, json or svg) into ``out_dir`` and return its path."""
    if not record.rows:
        raise ValueError("record has no rows")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"results.{fmt}"
    if fmt == "csv":
        _write_csv(record, path)
    elif fmt == "json":
        path.write_text(record.to_json() + "\n")
    elif fmt == "svg":
        _write_svg(record, path)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def emit_sweep_report(result: NoiseSweepResult, fmt: str, out_dir, config: ExperimentConfig | None = None) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"sweep.{fmt}"
    if fmt == "csv":
        result.to_csv(path)
    elif fmt == "json":
        payload = asdict(result)
        if config is not None:
            payload["config"] = config.to_dict()
            payload["config_hash"] = config.hash()
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif fmt == "svg":
        plt = _svg_figure()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(result.runs_grid, result.metric_values, "o-", label="finite runs")
        ax.axhline(result.exact_metric, color="k", ls="--", label="exact probabilities")
        ax.set_xscale("log")
        ax.set_xlabel("# of runs")
        ax.set_ylabel("test metric")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def with_overrides(config: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Copy of ``config`` with non-None overrides applied and revalidated."""
    d = copy.deepcopy(config.to_dict())
    d.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(d)
