"""Config-driven detector sweep with paired (A, B) draws, written to CSV/JSON/SVG.

The same thing from the shell:

    stochres run --config configs/lorenz_qubit_desk.toml --out results/
"""

import sys
from pathlib import Path

from stochres.experiment import ExperimentConfig, emit_report, run_experiment

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_results")
for mode in ("deterministic", "stochastic_exact"):
    cfg = ExperimentConfig(task="lorenz_x", family="optical", mode=mode, detectors=[2, 3, 4],
                           n_samples=10)
    rec = run_experiment(cfg)
    for a in rec.aggregates():
        print(f"{mode:>16} n_d={a['detectors']}: NMSE {a['mean']:.4f} +/- {a['std']:.4f}")
    for fmt in ("csv", "json", "svg"):
        emit_report(rec, fmt, out / mode)
print("reports in", out)
