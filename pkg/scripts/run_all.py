"""Run every verification suite and print the slowest checks.

    python scripts/run_all.py [--jobs 4] [--out verify-out] [--samples N]

Thin wrapper over ``verify run --config configs/verify.json``; the report and
per-sample residuals land in the output directory.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from demicalc import cli

ROOT = Path(__file__).resolve().parents[1]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--jobs", type=int, default=4)
    p.add_argument("--out", default=str(ROOT / "verify-out"))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    argv = ["run", "--config", str(ROOT / "configs" / "verify.json"), "--out", args.out,
            "--jobs", str(args.jobs), "--seed", str(args.seed)]
    if args.samples:
        argv += ["--samples", str(args.samples)]
    t0 = time.perf_counter()
    code = cli.main(argv)
    print(f"wall time {time.perf_counter() - t0:.1f}s, exit status {code}")

    report = json.loads((Path(args.out) / "report.json").read_text())
    by_suite = {}
    for r in report:
        by_suite.setdefault(r["suite"], []).append(r["pass"])
    for suite, passes in by_suite.items():
        print(f"  {suite:16s} {sum(passes)}/{len(passes)}")
    return code


if __name__ == "__main__":
    sys.exit(main())
