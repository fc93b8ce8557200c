#!/usr/bin/env python3
"""Recompute aggregate.csv from the per-cell trace/summary files and compare.

Deliberately uses only the standard library so it does not share code with
the package that wrote the files.

    python scripts/check_aggregate.py RESULTS_DIR
"""
import csv
import json
import re
import statistics
import sys
from pathlib import Path

STEM = re.compile(r"^(?P<algo>[a-z]+)_ue(?P<ue>[0-9.]+)_seed(?P<seed>\d+)$")


def median_or_blank(values):
    values = [v for v in values if v is not None]
    return "" if not values else str(statistics.median(values))


def recompute(out: Path) -> dict:
    cells = {}
    for trace in sorted(out.glob("*.csv")):
        m = STEM.match(trace.stem)
        if not m:
            continue
        summary = json.loads(trace.with_suffix(".json").read_text())
        with open(trace, newline="") as f:
            rows = list(csv.DictReader(f))
        last = rows[-1] if rows else {}

        def col(name):
            v = last.get(name, "")
            return float(v) if v != "" else None

        cells.setdefault((m["algo"], float(m["ue"])), []).append({
            "capped": summary["termination"] != "StopReached",
            "entropy": col("entropy"),
            "top1": col("top1_quality"),
            "top10": col("top10_quality"),
            "rate": summary["execution_rates"]["semantic_annotation"],
        })
    table = {}
    for key, runs in cells.items():
        table[key] = {
            "n_seeds": str(len(runs)),
            "cap_exceeded": str(sum(r["capped"] for r in runs)),
            "median_final_entropy": median_or_blank(r["entropy"] for r in runs),
            "median_top1_quality": median_or_blank(r["top1"] for r in runs),
            "median_top10_quality": median_or_blank(r["top10"] for r in runs),
            "median_sa_rate": median_or_blank(r["rate"] for r in runs),
        }
    return table


def main(argv):
    out = Path(argv[1])
    expected = recompute(out)
    with open(out / "aggregate.csv", newline="") as f:
        emitted = {(r["algorithm"], float(r["ue_sa"])): r for r in csv.DictReader(f)}
    bad = 0
    if set(emitted) != set(expected):
        print(f"cell mismatch: {sorted(set(emitted) ^ set(expected))}")
        bad += 1
    for key in sorted(set(emitted) & set(expected)):
        for col, value in expected[key].items():
            if emitted[key][col] != value:
                print(f"{key} {col}: aggregate={emitted[key][col]!r} recomputed={value!r}")
                bad += 1
    print("aggregate OK" if not bad else f"{bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
