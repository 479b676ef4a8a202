#!/usr/bin/env python3
"""Writes the bundled synthetic regulation day: a 4-second AGC trace and
hourly capacity clearing prices. Deterministic for a given seed."""

import argparse
import math
from pathlib import Path

import numpy as np


def agc_trace(rng, hours=24, step_s=4, sd=0.05):
    n = hours * 3600 // step_s
    g = np.empty(n)
    x = 0.0
    for k in range(n):
        x += rng.normal(0.0, sd)
        # reflect at the bounds so the signal spends time across [-1, 1]
        while abs(x) > 1.0:
            x = math.copysign(2.0, x) - x
        g[k] = x
    return np.round(g, 4)


def prices(rng, hours=24):
    z = np.arange(hours)
    base = 20.0 + 6.0 * np.sin((z - 6) / 24.0 * 2 * math.pi) + 4.0 * np.exp(-((z - 18) ** 2) / 8.0)
    return np.round(base + rng.normal(0.0, 1.5, hours), 2)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=831)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    g = agc_trace(rng)
    with open(args.out / "sample_agc_day.csv", "w") as f:
        f.write("timestamp,signal\n")
        for k, v in enumerate(g):
            s = 4 * k
            f.write(f"{s // 3600:02d}:{s % 3600 // 60:02d}:{s % 60:02d},{v:.4f}\n")
    p = prices(rng)
    with open(args.out / "sample_prices.csv", "w") as f:
        f.write("period,price_usd_per_mw\n")
        for z, v in enumerate(p):
            f.write(f"{z},{v:.2f}\n")


if __name__ == "__main__":
    main()
