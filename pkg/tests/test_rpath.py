"""Cross-checks between the production area-coordinate path and the
independent raw-radius path (dual-route oracle)."""

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

from axihee.diagnostics import hs_norm
from axihee.domain import make_domain
from axihee.rpath import (
    hs_norm_r,
    integrate_rdr,
    lr_op,
    make_rgrid,
    step_rk4_r,
    velocities_r,
)
from axihee.state import flow_state, step_rk4


def test_rdr_weights_sum_to_half():
    g = make_rgrid(64)
    assert integrate_rdr(np.ones(64), g) == pytest.approx(0.5, abs=1e-14)


def test_lr_equals_da_on_closed_form():
    # L_r f(r) evaluated in r equals df/da evaluated at a = r^2/2
    g = make_rgrid(256)
    f = np.sin(2 * np.pi * g.nodes**2 / 2)
    got = lr_op(f, g)
    expect = 2 * np.pi * np.cos(2 * np.pi * g.nodes**2 / 2)
    assert np.abs(got[2:-2] - expect[2:-2]).max() <= 1e-3


def test_velocities_r_structure():
    g = make_rgrid(48)
    nx = 32
    x = np.arange(nx) / nx
    X, R = np.meshgrid(x, g.nodes, indexing="ij")
    A = R**2 / 2
    w = 4 * A + 0.3 * np.sin(2 * np.pi * X) * np.sin(2 * np.pi * A)
    u, v, v_faces = velocities_r(w, g, 10)
    # compatibility and boundary values exact by the same telescoping
    assert np.abs(integrate_rdr(u, g)).max() <= 1e-13
    assert np.abs(v_faces[:, 0]).max() <= 1e-13
    assert np.abs(v_faces[:, -1]).max() <= 1e-13


def test_two_paths_agree_on_smooth_run():
    nx, n_modes = 32, 8
    dt, steps = 2.5e-3, 40

    def gap_at(n):
        dom = make_domain(nx, n)
        Xa, Aa = np.meshgrid(dom.x_nodes, dom.grid.nodes, indexing="ij")
        st = flow_state(4 * Aa + 0.3 * np.sin(2 * np.pi * Xa) * np.sin(2 * np.pi * Aa),
                        dom, n_modes)
        for _ in range(steps):
            st = step_rk4(st, dt)
        g = make_rgrid(n)
        Xr, Rr = np.meshgrid(dom.x_nodes, g.nodes, indexing="ij")
        Ar = Rr**2 / 2
        w_r = 4 * Ar + 0.3 * np.sin(2 * np.pi * Xr) * np.sin(2 * np.pi * Ar)
        for _ in range(steps):
            w_r = step_rk4_r(w_r, dt, g, n_modes)
        worst = 0.0
        for i in range(nx):
            spline = CubicSpline(Ar[0], w_r[i])
            worst = max(
                worst,
                float(np.abs(spline(dom.grid.nodes[2:-2]) - st.w[i, 2:-2]).max()),
            )
        return worst

    g64, g128 = gap_at(64), gap_at(128)
    assert g64 <= 5e-5
    assert g128 <= g64 / 3.0  # second-order shrink


def test_norm_equivalence_between_coordinates():
    # the anisotropic norm computed in (x, a) equals the L_r-weighted
    # norm computed in (x, r) for a closed-form field
    dom = make_domain(32, 96)
    g = make_rgrid(96)
    Xa, Aa = np.meshgrid(dom.x_nodes, dom.grid.nodes, indexing="ij")
    Xr, Rr = np.meshgrid(dom.x_nodes, g.nodes, indexing="ij")
    f_a = np.sin(2 * np.pi * Aa) * (1 + 0.5 * np.cos(2 * np.pi * Xa))
    f_r = np.sin(2 * np.pi * Rr**2 / 2) * (1 + 0.5 * np.cos(2 * np.pi * Xr))
    for s in (0, 1, 2):
        assert hs_norm(f_a, s, dom) == pytest.approx(hs_norm_r(f_r, s, g), rel=2e-3)
