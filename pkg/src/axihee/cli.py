"""Command-line front end.

    axihee run <config>   [--out DIR] [--seed N] [--threads N]
    axihee sweep <config> --axis {N,dt,resolution,eps} --values 8,16,32
    axihee check          [--out DIR] [--seed N]

``run`` executes one scenario file; ``sweep`` fans a scenario out
along one axis and fits convergence orders; ``check`` runs the radial
calculus suite plus a structural-identity corpus on random states.
Exit codes: 0 ok, 2 validation, 3 sign-condition abort, 4 blowup
detected, 5 numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import ScenarioConfig, parse_config
from .domain import make_domain
from .errors import AxiheeError, ConfigError
from .scenarios import EXIT_OK, EXIT_VALIDATION, run_scenario, sweep


def _parse_values(raw: str) -> list[float]:
    vals = []
    for tok in raw.replace("[", "").replace("]", "").split(","):
        tok = tok.strip()
        if tok:
            vals.append(float(tok))
    if not vals:
        raise ConfigError(f"could not parse sweep values from {raw!r}")
    return vals


def _structural_corpus(seed: int, n_states: int = 20) -> dict:
    """Round-off identity checks on random band-limited states."""
    from . import diagnostics as diag
    from .initial_data import random_band_limited
    from .state import flow_state

    dom = make_domain(64, 48)
    worst = {"incompressibility": 0.0, "compatibility": 0.0, "v_boundary": 0.0,
             "cancellation": 0.0}
    for i in range(n_states):
        w0 = random_band_limited(dom, seed=seed + i).w0
        st = flow_state(w0, dom, dom.nx // 3)
        worst["incompressibility"] = max(
            worst["incompressibility"], diag.incompressibility_residual(st)
        )
        worst["compatibility"] = max(
            worst["compatibility"], diag.compatibility_residual(st)
        )
        worst["v_boundary"] = max(worst["v_boundary"], diag.v_boundary_magnitude(st))
        worst["cancellation"] = max(
            worst["cancellation"],
            max(diag.cancellation_residual(st, k) for k in range(4)),
        )
    passes = (
        worst["incompressibility"] <= 1e-10
        and worst["compatibility"] <= 1e-12
        and worst["v_boundary"] <= 1e-10
        and worst["cancellation"] <= 1e-10
    )
    return {"worst": worst, "n_states": n_states, "pass": passes}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="axihee", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one scenario config")
    p_run.add_argument("config", type=Path)
    p_sweep = sub.add_parser("sweep", help="fan a scenario out along one axis")
    p_sweep.add_argument("config", type=Path)
    p_sweep.add_argument("--axis", required=True, choices=("N", "dt", "resolution", "eps"))
    p_sweep.add_argument("--values", required=True)
    p_check = sub.add_parser("check", help="calculus suite + structural corpus")

    for p in (p_run, p_sweep, p_check):
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)

    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            cfg = ScenarioConfig(kind="calculus_suite")
            if args.seed is not None:
                cfg = dataclasses.replace(cfg, seed=args.seed)
            out = args.out if args.out is not None else Path("out-check")
            code, summary = run_scenario(cfg, out)
            corpus = _structural_corpus(cfg.seed)
            from .io import write_json

            write_json(Path(out) / "structural_corpus.json", corpus)
            ok = summary.get("all_pass", False) and corpus["pass"]
            print(f"calculus suite: {'PASS' if summary.get('all_pass') else 'FAIL'}")
            print(f"structural corpus: {'PASS' if corpus['pass'] else 'FAIL'}")
            return EXIT_OK if ok else 5

        cfg = parse_config(args.config)
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        out = args.out if args.out is not None else Path(cfg.out_dir)
        if args.command == "run":
            code, summary = run_scenario(cfg, out)
            print(f"{cfg.kind}: {summary.get('status')} (exit {code}) -> {out}")
            return code
        values = _parse_values(args.values)
        if args.axis in ("N", "resolution"):
            values = [int(v) for v in values]
        code, report = sweep(cfg, args.axis, values, out, threads=args.threads)
        order = report.get("fitted_order")
        msg = f"sweep {args.axis}: exit {code}"
        if order is not None:
            msg += f", fitted order {order:.2f}"
        print(msg + f" -> {out}")
        return code
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AxiheeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
