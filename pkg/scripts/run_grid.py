"""Run the default 4 algorithms x UE_SA {1, 2} x 20 seeds grid and print the medians.

    python3 scripts/run_grid.py [--out results/grid] [--jobs N]
"""
import argparse
import sys
from pathlib import Path

from acisim.cli import main as cli_main, parse_config
from acisim.experiment import QUALITATIVE_CHECKS, aggregate, load_results


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out", type=Path, default=Path("results/grid"))
    p.add_argument("--jobs", default="1")
    args = p.parse_args()
    status = cli_main(["run", "--out", str(args.out), "--jobs", args.jobs])
    if status:
        return status
    rows = aggregate(load_results(args.out, parse_config(overrides={"out": str(args.out)})))
    for r in rows:
        print(f"{r['algorithm']:>9} ue_sa={r['ue_sa']:<4} H={r['median_final_entropy']:.3f} "
              f"top1={r['median_top1_quality']:.3f} sa_rate={r['median_sa_rate']:.3f} "
              f"cap_exceeded={r['cap_exceeded']}")
    for name, check in QUALITATIVE_CHECKS.items():
        ok, detail = check(rows)
        print(f"{name}: {'pass' if ok else 'fail'}  {detail}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
