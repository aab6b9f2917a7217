#!/usr/bin/env python3
"""Fitted offset/amplitude of the sweep signal versus ramp duration.

Quantifies how the single-frequency fit parameters drift away from 1/2 as the
ramp gets faster.  The amplitude b shrinks monotonically, while the offset a
tracks the participation ratio sum_k p_k^2 of the level populations at the end
of the ramp and is NOT monotone once more than two levels are populated.

Usage: python scripts/offset_vs_ramp.py [--ramps 150 75 37.5 12.5] [--dt 0.001]
"""
import argparse

import numpy as np

from gapscan import (
    ModelParams,
    StepPolicy,
    SweepGrid,
    build_problem,
    cosine_fit,
    diagonalize,
    gaps,
    initial_state,
    segment_unitaries,
    sweep,
)

BENCH = ModelParams(2, (1.0, 10.7), (0.2, 0.24), 0.5, 1.05)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ramps", type=float, nargs="+", default=[150.0, 75.0, 37.5, 12.5])
    parser.add_argument("--dt", type=float, default=0.001)
    parser.add_argument("--samples", type=int, default=10000)
    args = parser.parse_args()

    policy = StepPolicy(dt_ns=args.dt)
    grid = SweepGrid(0.0, 100.0, args.samples)
    es = diagonalize(build_problem(BENCH))
    gap01 = gaps(es).gap(0, 1)
    psi0 = initial_state(BENCH)

    print(f"fit frequency: gap (0,1) = {gap01:.6f} GHz")
    print(f"{'T_ns':>8} {'a':>10} {'|a-1/2|':>10} {'b':>10} {'rms':>10} {'sum p_k^2':>10}  populations")
    for T in args.ramps:
        series = sweep(BENCH, T, grid, policy)
        fit = cosine_fit(series, gap01)
        forward, _ = segment_unitaries(BENCH, T, policy)
        pops = np.abs(es.states.conj().T @ (forward @ psi0.amplitudes)) ** 2
        print(
            f"{T:8g} {fit.offset:10.5f} {abs(fit.offset - 0.5):10.5f} "
            f"{fit.amplitude:10.5f} {fit.rms_residual:10.2e} {np.sum(pops**2):10.5f}  "
            + np.array2string(pops, precision=4, suppress_small=True)
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
