import json

import numpy as np
import pytest

from axihee.cli import main
from axihee.config import ScenarioConfig, parse_config, validate
from axihee.errors import ConfigError
from axihee.initial_data import make_initial
from axihee.io import read_snapshot, write_snapshot
from axihee.domain import make_domain
from axihee.scenarios import run_scenario, sweep


def write_cfg(tmp_path, text, name="s.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_defaults(tmp_path):
    cfg = parse_config(write_cfg(tmp_path, "kind = hydro\n"))
    assert cfg.nx == 128 and cfg.na == 64
    assert cfg.resolved_modes() == 128 // 3
    assert cfg.cfl_max == 0.5 and cfg.sigma_min == 0.1
    assert cfg.cadence == 10
    assert cfg.initial_data.startswith("shear_perturbed")


def test_unknown_key_named(tmp_path):
    with pytest.raises(ConfigError, match="frobnicate"):
        parse_config(write_cfg(tmp_path, "kind = hydro\nfrobnicate = 3\n"))


def test_missing_kind_named(tmp_path):
    with pytest.raises(ConfigError, match="kind"):
        parse_config(write_cfg(tmp_path, "nx = 64\n"))


def test_type_mismatch_reports_location(tmp_path):
    with pytest.raises(ConfigError, match="line 2"):
        parse_config(write_cfg(tmp_path, "kind = hydro\nnx = fast\n"))


def test_odd_nx_rejected(tmp_path):
    with pytest.raises(ConfigError, match="even"):
        parse_config(write_cfg(tmp_path, "kind = hydro\nnx = 99\n"))
    with pytest.raises(ConfigError, match="even"):
        parse_config(write_cfg(tmp_path, "kind = hydro\nnx = 6\n"))


def test_eps_list_must_decrease(tmp_path):
    with pytest.raises(ConfigError, match="decreasing"):
        parse_config(
            write_cfg(tmp_path, "kind = limit_study\neps_list = [0.05, 0.1]\n")
        )


def test_comments_and_lists(tmp_path):
    cfg = parse_config(
        write_cfg(
            tmp_path,
            "# a comment\nkind = limit_study\neps_list = [0.2, 0.1, 0.05]  # inline\n",
        )
    )
    assert cfg.eps_list == [0.2, 0.1, 0.05]


def test_initial_data_descriptors():
    dom = make_domain(16, 12)
    d = make_initial("shear(4)", dom)
    assert np.allclose(d.w0, 4 * np.tile(dom.grid.nodes, (16, 1)))
    d2 = make_initial("shear_perturbed(4, 0.1, 1, 1)", dom)
    assert d2.w0.shape == (16, 12)
    with pytest.raises(ConfigError, match="unknown initial-data"):
        make_initial("vortex(1)", dom)
    with pytest.raises(ConfigError, match="bad argument"):
        make_initial("shear(fast)", dom)


def test_snapshot_roundtrip(tmp_path):
    dom = make_domain(16, 12)
    rng = np.random.default_rng(0)
    w = rng.standard_normal((16, 12))
    path = tmp_path / "s.snap"
    write_snapshot(path, w, dom, 0.25, kind="rescaled", eps=0.1)
    w2, meta = read_snapshot(path)
    assert np.array_equal(w, w2)
    assert meta["kind"] == "rescaled"
    assert meta["t"] == 0.25 and meta["eps"] == 0.1
    header = path.read_text().splitlines()[0]
    assert header.startswith("AXIHEE v1 kind=rescaled nx=16 na=12")


def test_snapshot_initial_data(tmp_path):
    dom = make_domain(16, 12)
    w = np.tile(4 * dom.grid.nodes, (16, 1))
    path = tmp_path / "w.snap"
    write_snapshot(path, w, dom, 0.0)
    d = make_initial(f"snapshot:{path}", dom)
    assert np.array_equal(d.w0, w)


def test_run_scenario_byte_identical(tmp_path):
    cfg = ScenarioConfig(kind="hydro", nx=16, na=12, dt=4e-3, t_end=0.02,
                         sigma_min=1.0, cadence=2)
    code1, _ = run_scenario(cfg, tmp_path / "a")
    code2, _ = run_scenario(cfg, tmp_path / "b")
    assert code1 == code2 == 0
    for name in ("final.snap", "diagnostics.csv"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b
    sa = json.loads((tmp_path / "a" / "summary.json").read_text())
    sb = json.loads((tmp_path / "b" / "summary.json").read_text())
    sa.pop("wall_seconds"), sb.pop("wall_seconds")
    assert sa == sb


def test_run_scenario_validation_exit(tmp_path):
    cfg = ScenarioConfig(kind="hydro", nx=99)
    code, summary = run_scenario(cfg, tmp_path)
    assert code == 2
    assert summary["status"] == "validation_error"


def test_sweep_dt_order(tmp_path):
    cfg = ScenarioConfig(kind="hydro", nx=16, na=12, dt=8e-3, t_end=0.08,
                         sigma_min=1.0, cadence=100,
                         initial_data="shear_perturbed(4, 0.3, 1, 1)")
    code, report = sweep(cfg, "dt", [8e-3, 4e-3, 2e-3], tmp_path)
    assert code == 0
    assert report["fitted_order"] >= 3.5


def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg_path = tmp_path / "h.cfg"
    cfg_path.write_text(
        "kind = hydro\nnx = 16\nna = 12\ndt = 0.004\nt_end = 0.02\n"
        "sigma_min = 1.0\ncadence = 2\n"
    )
    assert main(["run", str(cfg_path), "--out", str(tmp_path / "o")]) == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = hydro\nnx = 99\n")
    assert main(["run", str(bad)]) == 2


def test_cli_check(tmp_path):
    assert main(["check", "--out", str(tmp_path / "chk")]) == 0
    summary = json.loads((tmp_path / "chk" / "calculus_suite.json").read_text())
    assert summary["all_pass"] is True


def test_cli_sweep(tmp_path):
    cfg_path = tmp_path / "s.cfg"
    cfg_path.write_text(
        "kind = hydro\nnx = 16\nna = 12\ndt = 0.004\nt_end = 0.04\n"
        "sigma_min = 1.0\ncadence = 100\n"
    )
    code = main([
        "sweep", str(cfg_path), "--axis", "dt", "--values", "0.004,0.002",
        "--out", str(tmp_path / "sw"),
    ])
    assert code == 0
    report = json.loads((tmp_path / "sw" / "sweep_summary.json").read_text())
    assert report["axis"] == "dt" and len(report["children"]) == 2


def test_validate_rejects_large_n(tmp_path):
    with pytest.raises(ConfigError, match="headroom"):
        validate(ScenarioConfig(kind="hydro", nx=32, n_modes=16))
