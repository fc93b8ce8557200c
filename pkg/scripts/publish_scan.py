"""Copy the small files of an alpha/beta scan (scan.csv and each aggregate.csv)
into a results directory, leaving per-seed traces behind.

    acisim scan --out /tmp/scan
    python3 scripts/publish_scan.py /tmp/scan results/scan
"""
import shutil
import sys
from pathlib import Path


def main(src, dst):
    src, dst = Path(src), Path(dst)
    dst.mkdir(parents=True, exist_ok=True)
    shutil.copy(src / "scan.csv", dst / "scan.csv")
    for agg in sorted(src.glob("alpha*_beta*/aggregate.csv")):
        shutil.copy(agg, dst / f"{agg.parent.name}_aggregate.csv")
    print(f"published {len(list(dst.iterdir()))} files to {dst}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(*sys.argv[1:])
