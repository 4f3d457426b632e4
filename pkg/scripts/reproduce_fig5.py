"""Desk-scale reproduction of the NLOS bias CDF comparison.

    python scripts/reproduce_fig5.py --out out/fig5 [--realizations 100000] [--workers 4]
"""

import argparse
from dataclasses import replace
from pathlib import Path

from nlos_bias.harness import load_config, run_experiment, with_overrides

DEFAULT_CONFIG = Path(__file__).resolve().parents[1] / "configs" / "fig5.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", default=str(DEFAULT_CONFIG))
    ap.add_argument("--out", default="out/fig5")
    ap.add_argument("--realizations", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cfg = with_overrides(load_config(args.config), seed=args.seed, realizations=args.realizations)
    cfg = replace(cfg, workers=args.workers)
    report = run_experiment(cfg, args.out)
    print("\n".join(report.lines()))
    print(f"curves written to {Path(args.out) / 'curves.csv'}")


if __name__ == "__main__":
    main()
