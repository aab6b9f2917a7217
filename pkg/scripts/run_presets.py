#!/usr/bin/env python3
"""Run every shipped preset config and collect the outputs under one root.

Usage: python scripts/run_presets.py [--out runs] [--jobs 4]
"""
import argparse
import sys
from pathlib import Path

from gapscan.cli import main as gapscan_main

REPO_ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs", help="output root directory")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    configs = sorted((REPO_ROOT / "configs").glob("*.cfg"))
    if not configs:
        print("no preset configs found", file=sys.stderr)
        return 1
    for config in configs:
        out_dir = Path(args.out) / config.stem
        print(f"=== {config.name} -> {out_dir}")
        code = gapscan_main(
            ["run", "--config", str(config), "--out", str(out_dir), "--jobs", str(args.jobs)]
        )
        if code != 0:
            print(f"{config.name} failed with exit code {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
