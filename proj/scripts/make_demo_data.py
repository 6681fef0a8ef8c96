#!/usr/bin/env python3
"""Regenerates the synthetic demo dataset in data/demo/.

The series are invented. They follow the planted relations below plus
seeded noise, so every fit in scripts/demo.sh has a known answer:

    inflation    = 0.0007 + 1.31 * r + noise
    unemployment = 0.045  - 1.5  * r + noise
    r            = labor-force change rate

Output is deterministic for a given seed.
"""

import argparse
import math
from pathlib import Path

import numpy as np

A, B = 0.0007, 1.31
UE_C, UE_S = 0.045, -1.5
PARTICIPATION = 0.521


def write_series(path, label, unit, first_year, values):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# label: {label}\n# unit: {unit}\nyear,value\n")
        for i, v in enumerate(values):
            f.write(f"{first_year + i},{v!r}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "demo")
    ap.add_argument("--seed", type=int, default=20070101)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    # Labor force 1970-2006: growth slowing from about 1.3% to a mild decline.
    years = np.arange(1970, 2007)
    t = years - 1970
    rate = 0.013 * np.exp(-t / 14.0) - 0.003 + 0.004 * np.sin(t / 2.3) * np.exp(-t / 30.0)
    rate += rng.normal(0.0, 0.0015, size=years.size)
    rate[0] = 0.0
    # Population 2000-2050: annual decline deepening from 0.05% to 0.65%.
    decline = np.linspace(0.0005, 0.0065, 50)
    pop = 126.9e6 * np.concatenate(([1.0], np.cumprod(1.0 - decline)))
    pop = np.round(pop / 1e3) * 1e3

    # Scaled so the 2006 level matches the participation-implied level and
    # the projection joins the history without a jump.
    lf = np.cumprod(1.0 + rate)
    lf *= PARTICIPATION * pop[6] / lf[-1]
    lf = np.round(lf / 1e4) * 1e4
    r = np.diff(lf) / lf[:-1]  # 1971-2006

    lf_us = np.round(lf * (0.985 + 0.002 * np.cos(t / 4.0)) / 1e4) * 1e4
    r = r[5:]  # targets start in 1976
    inflation = A + B * r + rng.normal(0.0, 0.002, size=r.size)
    unemployment = UE_C + UE_S * r + rng.normal(0.0, 0.002, size=r.size)

    write_series(args.out / "labor_force_nac.csv", "synthetic labor force, national definition", "persons", 1970,
                 [int(v) for v in lf])
    write_series(args.out / "labor_force_us_def.csv", "synthetic labor force, US definition", "persons", 1970,
                 [int(v) for v in lf_us])
    write_series(args.out / "cpi_inflation_nac.csv", "synthetic CPI inflation", "rate", 1976,
                 [round(float(v), 6) for v in inflation])
    write_series(args.out / "unemployment_nac.csv", "synthetic unemployment rate", "rate", 1976,
                 [round(float(v), 6) for v in unemployment])
    write_series(args.out / "population_ipss.csv", "synthetic population projection", "persons", 2000,
                 [int(v) for v in pop])
    print(f"wrote demo data to {args.out}")
    print(f"labor force 2010 at 0.521: {PARTICIPATION * pop[10] / 1e6:.1f}M, 2050: {PARTICIPATION * pop[50] / 1e6:.1f}M")
    assert all(math.isfinite(v) for v in inflation)


if __name__ == "__main__":
    main()
