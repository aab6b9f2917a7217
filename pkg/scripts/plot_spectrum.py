#!/usr/bin/env python3
"""Plot one or more spectrum.csv files on a shared axis.

Usage: python scripts/plot_spectrum.py runs/T150/spectrum.csv runs/T75/spectrum.csv -o spectra.png
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", nargs="+", help="spectrum.csv files from gapscan run")
    parser.add_argument("-o", "--output", default="spectra.png")
    parser.add_argument("--log", action="store_true", help="log-scale magnitude axis")
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4))
    for path in args.csv:
        data = np.genfromtxt(path, delimiter=",", names=True)
        label = Path(path).parent.name or path
        ax.plot(data["nu_ghz"], data["abs"], lw=0.8, label=label)
    ax.set_xlabel(r"$\nu$ (GHz)")
    ax.set_ylabel(r"$|f(\nu)|$")
    if args.log:
        ax.set_yscale("log")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
