"""Snapshot and report files.

Snapshot format: one text header line

    AXIHEE v1 kind=<hydro|rescaled> nx=<int> na=<int> t=<float> [eps=<float>]

followed by n_a rows of nx decimal floats; each row is a fixed radial
node, x-major. Floats are written with repr-round-trip precision so a
re-run with the same seed reproduces files byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .domain import Domain, make_domain
from .errors import DimensionError


def write_snapshot(
    path, w: np.ndarray, dom: Domain, t: float, kind: str = "hydro",
    eps: float | None = None,
) -> None:
    w = dom.check_field(w)
    header = f"AXIHEE v1 kind={kind} nx={dom.nx} na={dom.n_a} t={t:.17g}"
    if eps is not None:
        header += f" eps={eps:.17g}"
    lines = [header]
    for row in w.T:  # row = fixed a
        lines.append(" ".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_snapshot(path) -> tuple[np.ndarray, dict]:
    text = Path(path).read_text().strip().split("\n")
    head = text[0].split()
    if len(head) < 2 or head[0] != "AXIHEE" or head[1] != "v1":
        raise DimensionError(f"not an AXIHEE v1 snapshot: {path}")
    meta: dict = {}
    for tok in head[2:]:
        key, val = tok.split("=", 1)
        meta[key] = val
    nx, na = int(meta["nx"]), int(meta["na"])
    meta["nx"], meta["na"] = nx, na
    meta["t"] = float(meta["t"])
    if "eps" in meta:
        meta["eps"] = float(meta["eps"])
    rows = [np.fromstring(line, sep=" ") for line in text[1:]]
    w = np.array(rows).T
    if w.shape != (nx, na):
        raise DimensionError(
            f"snapshot body shape {w.shape} does not match header ({nx}, {na})"
        )
    return w, meta


def snapshot_domain(meta: dict) -> Domain:
    return make_domain(meta["nx"], meta["na"])


def write_csv(path, header: str, rows: list[str]) -> None:
    Path(path).write_text("\n".join([header, *rows]) + "\n")


def _jsonable(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_json(path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n"
    )
