"""Run a report config and print the bundle digest.

    python scripts/run_report.py configs/default.json results/default
"""

import argparse
import sys

from lcmsunflower import report


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("config")
    ap.add_argument("out")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    summary = report.run_report(report.load_config(args.config), args.out, jobs=args.jobs)
    for e in summary["experiments"]:
        print(f"{e['name']:20s} {e['status']:6s} {e.get('file') or e.get('error')}")
    print("sha256", report.bundle_digest(args.out))
    return 0 if summary["failures"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
