"""Command-line entry point: ``stochres {run,sweep-runs,validate,report}``.

Exit codes: 0 success, 2 configuration error, 3 numerical divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .activations import DEFAULT_SHIFT, ActivationDistribution, check_universality_criteria
from .esn import BoundsError, default_window
from .experiment import (ConfigError, ExperimentConfig, ExperimentRecord, emit_report,
                         emit_sweep_report, load_config, run_experiment, run_noise_sweep,
                         with_overrides)
from .tasks import DivergenceError

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENCE = 0, 2, 3


def _detectors(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _formats(text: str) -> list[str]:
    fmts = [t.strip() for t in text.split(",") if t.strip()]
    for f in fmts:
        if f not in ("csv", "json", "svg"):
            raise argparse.ArgumentTypeError(f"unknown format {f!r}")
    return fmts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stochres", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="TOML or JSON experiment config")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, help="override master_seed")
        sp.add_argument("--threads", type=int, default=1, help="worker threads (never changes results)")
        sp.add_argument("--mode", help="override mode")
        sp.add_argument("--detectors", type=_detectors, help="override detector list, e.g. 2,3,4")
        sp.add_argument("--formats", type=_formats, default=["csv", "json", "svg"])

    run = sub.add_parser("run", help="detector sweep over random (A, B) draws")
    common(run)

    sweep = sub.add_parser("sweep-runs", help="test metric versus number of runs for one network")
    common(sweep)
    sweep.add_argument("--sample", type=int, default=0, help="which (A, B) draw to sweep")

    val = sub.add_parser("validate", help="universality criteria report for an activation family")
    val.add_argument("--family", required=True, choices=["qubit", "optical"])
    val.add_argument("--shift", type=float, help="delta (qubit) or d (optical)")
    val.add_argument("--r-zeta", type=float, help="window half-width (default: 0.99 x default window)")
    val.add_argument("--grid-points", type=int, default=1001)

    rep = sub.add_parser("report", help="re-render csv/svg from a saved results.json")
    rep.add_argument("--input", required=True)
    rep.add_argument("--out", required=True)
    rep.add_argument("--formats", type=_formats, default=["csv", "svg"])
    return p


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    return with_overrides(cfg, master_seed=args.seed, mode=args.mode, detectors=args.detectors)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            record = run_experiment(_load(args), threads=args.threads)
            for fmt in args.formats:
                print(emit_report(record, fmt, args.out))
        elif args.command == "sweep-runs":
            config = _load(args)
            result = run_noise_sweep(config, args.sample, threads=args.threads)
            for fmt in args.formats:
                print(emit_sweep_report(result, fmt, args.out, config))
        elif args.command == "validate":
            shift = DEFAULT_SHIFT[args.family] if args.shift is None else args.shift
            r_zeta = 0.99 * default_window(args.family) if args.r_zeta is None else args.r_zeta
            report = check_universality_criteria(ActivationDistribution(args.family, shift),
                                                 r_zeta, args.grid_points)
            print(json.dumps({"family": args.family, "shift": shift, "r_zeta": r_zeta,
                              **report.as_dict()}, indent=2))
        elif args.command == "report":
            record = ExperimentRecord.from_json(Path(args.input).read_text())
            for fmt in args.formats:
                print(emit_report(record, fmt, args.out))
    except (ConfigError, BoundsError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
