#!/usr/bin/env python3
"""Compare the bisected basin boundary for rates (0.4, 0.6) against the
previously fitted quintic approximation and print a deviation table."""

import argparse

import numpy as np

from qdyn import Rates, basin_boundary

QUINTIC = np.array([-0.0046, 0.069, -0.3987, 1.222, -2.5674, 3.3333])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=21)
    parser.add_argument("--tol", type=float, default=1e-8)
    args = parser.parse_args()

    rates = Rates([0.4, 0.6])
    grid = np.linspace(0.0, 5.0, args.points)
    samples = basin_boundary(rates, grid, tol=args.tol)

    print(f"{'x1':>6} {'boundary':>12} {'quintic':>12} {'|dev|':>8}  flag")
    worst = 0.0
    for sample in samples:
        fitted = float(np.polyval(QUINTIC, sample.x1))
        dev = abs(sample.midpoint - fitted)
        worst = max(worst, dev)
        flag = "flagged" if sample.flagged else ""
        print(f"{sample.x1:6.2f} {sample.midpoint:12.8f} {fitted:12.8f} {dev:8.4f}  {flag}")
    print(f"max deviation: {worst:.4f} (the quintic is only a fit; see the acceptance suite)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
