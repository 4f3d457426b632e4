"""Command-line entry point: ``nlos-bias run | analytic | validate-region``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .harness import ConfigError, load_config, region_grid, run_experiment, validate_region, with_overrides

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlos-bias", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="analytic curves plus Monte Carlo simulation")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--realizations", type=int)
    run.add_argument("--workers", type=int)

    analytic = sub.add_parser("analytic", help="closed-form curves only")
    analytic.add_argument("--config", required=True)
    analytic.add_argument("--out", required=True)

    region = sub.add_parser("validate-region", help="closed-form region area vs rejection sampling")
    region.add_argument("--config", required=True)
    region.add_argument("--samples", type=int, default=1_000_000)
    region.add_argument("--seed", type=int)
    return parser


def _run(args) -> int:
    cfg = load_config(args.config)
    if args.command == "validate-region":
        widths, thetas, bounds = region_grid(cfg)
        seed = cfg.seed if args.seed is None else args.seed
        rows = validate_region(cfg.d, widths, thetas, bounds, samples=args.samples, seed=seed)
        for r in rows:
            status = "ok  " if r.agrees else "FAIL"
            print(
                f"{status} w={r.w:g} theta={r.theta:.4f} s={r.s:g} "
                f"closed={r.closed_form:.2f} mc={r.estimate:.2f} se={r.stderr:.2f} z={r.z:+.2f}"
            )
        bad = sum(not r.agrees for r in rows)
        print(f"{len(rows) - bad}/{len(rows)} specs within 3 standard errors")
        return EXIT_OK if bad == 0 else EXIT_CHECK_FAILED

    if args.command == "run":
        cfg = with_overrides(cfg, seed=args.seed, realizations=args.realizations)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("workers", f"must be >= 1, got {args.workers}")
            cfg = replace(cfg, workers=args.workers)
    report = run_experiment(cfg, args.out, simulate=args.command == "run")
    print("\n".join(report.lines()))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
