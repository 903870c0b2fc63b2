#!/usr/bin/env python3
"""Blowup experiment driver: validate the hypothesis on the quadratic
stagnation data, integrate until the spectral-tail guard trips, and
print the indicator history tail."""

import argparse
from pathlib import Path

from axihee.config import ScenarioConfig
from axihee.scenarios import run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nx", type=int, default=256)
    ap.add_argument("--na", type=int, default=128)
    ap.add_argument("--amp", type=float, default=1.0)
    ap.add_argument("--t-end", type=float, default=6.0)
    ap.add_argument("--out", type=Path, default=Path("out/blowup"))
    args = ap.parse_args()

    cfg = ScenarioConfig(
        kind="blowup", nx=args.nx, na=args.na, dt=2e-3, t_end=args.t_end,
        cfl_max=0.4, initial_data=f"blowup_quadratic({args.amp})",
    )
    code, summary = run_scenario(cfg, args.out)
    print(f"status: {summary['status']}")
    print(f"hypothesis passed: {summary['hypothesis_passed']}")
    print(f"T* = {summary['t_star']}, |dx u|_inf growth {summary['growth_factor']:.1f}x")
    print(f"report: {args.out / 'blowup_report.json'}")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
