"""Flat key=value scenario configuration files.

A scenario file is plain text, one ``key = value`` per line, with ``#``
comments. Values are typed: integers, floats, booleans (true/false),
bracketed lists, and bare strings (initial-data descriptors). Unknown
keys, missing required keys and type mismatches are rejected with the
offending key and line.

Example::

    kind = limit_study
    nx = 64
    na = 48
    eps_list = [0.2, 0.1, 0.05]
    initial_data = shear_perturbed(4, 0.1, 1, 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError

KINDS = (
    "hydro",
    "rescaled",
    "limit_study",
    "blowup",
    "stability",
    "entropy_budget",
    "scheme_convergence",
    "calculus_suite",
)


@dataclass
class ScenarioConfig:
    kind: str = ""
    nx: int = 128
    na: int = 64
    n_modes: int | None = None  # defaults to nx // 3
    dt: float = 1e-3
    t_end: float = 0.5
    cfl_max: float = 0.5
    sigma_min: float = 0.1
    eps: float = 0.1
    eps_list: list = field(default_factory=lambda: [0.2, 0.1, 0.05])
    initial_data: str = "shear_perturbed(4, 0.1, 1, 1)"
    perturbation: str = "shear_perturbed(0, 1, 1, 1)"
    delta_list: list = field(default_factory=lambda: [1e-2, 1e-3, 1e-4])
    n_list: list = field(default_factory=lambda: [8, 16, 32])
    n_probes: int = 10
    cadence: int = 10
    seed: int = 0
    out_dir: str = "out"
    monitor_sign: bool | None = None  # default depends on kind

    def resolved_modes(self) -> int:
        return self.n_modes if self.n_modes is not None else self.nx // 3

    def resolved_monitor(self) -> bool:
        if self.monitor_sign is not None:
            return self.monitor_sign
        return self.kind not in ("blowup",)


_INT_KEYS = {"nx", "na", "n_modes", "n_probes", "cadence", "seed"}
_FLOAT_KEYS = {"dt", "t_end", "cfl_max", "sigma_min", "eps"}
_LIST_KEYS = {"eps_list", "delta_list", "n_list"}
_BOOL_KEYS = {"monitor_sign"}
_STR_KEYS = {"kind", "initial_data", "perturbation", "out_dir"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _LIST_KEYS | _BOOL_KEYS | _STR_KEYS


def _parse_scalar(tok: str, line_no: int, key: str):
    tok = tok.strip()
    low = tok.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        pass
    return tok


def _coerce(key: str, raw: str, line_no: int):
    loc = f"line {line_no}, key {key!r}"
    raw = raw.strip()
    if key in _LIST_KEYS:
        if not (raw.startswith("[") and raw.endswith("]")):
            raise ConfigError(f"{loc}: expected a bracketed list, got {raw!r}")
        items = [t for t in raw[1:-1].split(",") if t.strip()]
        vals = [_parse_scalar(t, line_no, key) for t in items]
        if any(isinstance(v, str) for v in vals):
            raise ConfigError(f"{loc}: list entries must be numeric")
        return vals
    val = _parse_scalar(raw, line_no, key)
    if key in _INT_KEYS:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"{loc}: expected an integer, got {raw!r}")
        return val
    if key in _FLOAT_KEYS:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{loc}: expected a number, got {raw!r}")
        return float(val)
    if key in _BOOL_KEYS:
        if not isinstance(val, bool):
            raise ConfigError(f"{loc}: expected true/false, got {raw!r}")
        return val
    return raw


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    if not cfg.kind:
        raise ConfigError("missing required field 'kind'")
    if cfg.kind not in KINDS:
        raise ConfigError(f"unknown kind {cfg.kind!r}; expected one of {KINDS}")
    if cfg.nx % 2 != 0 or cfg.nx < 8:
        raise ConfigError(f"nx must be even and >= 8 (dealiasing), got {cfg.nx}")
    if cfg.na < 3:
        raise ConfigError(f"na must be >= 3, got {cfg.na}")
    if 3 * cfg.resolved_modes() > cfg.nx:
        raise ConfigError(
            f"n_modes = {cfg.resolved_modes()} exceeds the dealias headroom nx/3"
        )
    if cfg.dt <= 0 or cfg.t_end <= 0:
        raise ConfigError("dt and t_end must be positive")
    if not 0 < cfg.cfl_max <= 1:
        raise ConfigError(f"cfl_max must lie in (0, 1], got {cfg.cfl_max}")
    if cfg.kind == "limit_study":
        e = list(cfg.eps_list)
        if len(e) < 2 or any(b >= a for a, b in zip(e, e[1:])):
            raise ConfigError("eps_list must be strictly decreasing with >= 2 entries")
    if cfg.kind == "scheme_convergence":
        if len(cfg.n_list) < 2 or any(int(n) < 1 for n in cfg.n_list):
            raise ConfigError("n_list needs >= 2 positive entries")
        if any(3 * int(n) > cfg.nx for n in cfg.n_list):
            raise ConfigError("every n_list entry must satisfy 3 N <= nx")
    if cfg.cadence < 1:
        raise ConfigError(f"cadence must be >= 1, got {cfg.cadence}")
    return cfg


def parse_config(path) -> ScenarioConfig:
    """Read, type and validate a scenario file."""
    text = Path(path).read_text()
    values: dict = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        values[key] = _coerce(key, raw, line_no)
    cfg = ScenarioConfig(**values)
    return validate(cfg)


def config_echo(cfg: ScenarioConfig) -> dict:
    """JSON-ready copy of the configuration for summary files."""
    out = {}
    for f in fields(cfg):
        out[f.name] = getattr(cfg, f.name)
    return out
