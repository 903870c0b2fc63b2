"""Independent solver path formulated in the raw radius r.

The production code works in the area coordinate a = r^2/2, where the
radial operator and measure flatten out. This module keeps a small
parallel implementation in the physical radius with (1/r) d/dr
stencils and the r dr quadrature, used as a cross-check oracle: a
smooth run performed both ways must agree to discretization order once
the radial coordinates are identified through a = r^2/2.

Layout mirrors the production path: potential on the faces r = i/n_r,
transported scalar and velocities on cell centers r_i = (i+1/2)/n_r,
so the compatibility integral and the v boundary values are exact here
too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridError, SpectralConfigError
from .spectral import dealiased_product, diff_x, project_modes


@dataclass(frozen=True)
class RGrid:
    n_r: int
    dr: float
    nodes: np.ndarray  # cell centers in (0, 1)
    faces: np.ndarray  # i / n_r


def make_rgrid(n_r: int) -> RGrid:
    if n_r < 3:
        raise GridError(f"need at least 3 radial cells, got {n_r}")
    dr = 1.0 / n_r
    return RGrid(
        n_r=n_r, dr=dr, nodes=(np.arange(n_r) + 0.5) * dr, faces=np.arange(n_r + 1) * dr
    )


def integrate_rdr(f: np.ndarray, g: RGrid) -> float | np.ndarray:
    """Midpoint rule for integral f r dr; the weights r_i dr sum to 1/2
    exactly."""
    return f @ (g.nodes * g.dr)


def lr_op(f: np.ndarray, g: RGrid) -> np.ndarray:
    """(1/r) d/dr with centered interior stencils."""
    out = np.empty_like(f)
    dr = g.dr
    out[..., 1:-1] = (f[..., 2:] - f[..., :-2]) / (2.0 * dr)
    out[..., 0] = (-3.0 * f[..., 0] + 4.0 * f[..., 1] - f[..., 2]) / (2.0 * dr)
    out[..., -1] = (3.0 * f[..., -1] - 4.0 * f[..., -2] + f[..., -3]) / (2.0 * dr)
    return out / g.nodes


def velocities_r(w: np.ndarray, g: RGrid, n_modes: int):
    """u = -P_N L_r A(w), v = P_N dx A(w) on the r lattice.

    The potential is built by the same two-sweep integration that the
    tridiagonal solve performs in a: L_r u = w integrated outward from
    the faces (trapezoid in the r dr measure), the additive constant
    fixed by integral u r dr = 0, then A accumulated inward.
    """
    if w.shape[1] != g.n_r:
        raise SpectralConfigError("field does not match the r grid")
    dr = g.dr
    r_faces = g.faces[1:-1]
    w_face = 0.5 * (w[:, :-1] + w[:, 1:])
    steps = dr * r_faces[None, :] * w_face  # u_{i} - u_{i-1}
    u = np.concatenate(
        [np.zeros((w.shape[0], 1)), np.cumsum(steps, axis=1)], axis=1
    )
    weights = g.nodes * dr
    u = u - (u @ weights)[:, None] / weights.sum() * 1.0
    # A on faces: A_{i+1} = A_i - dr r_i u_i; A(1) = 0 by compatibility.
    a_faces = np.concatenate(
        [np.zeros((w.shape[0], 1)), np.cumsum(-dr * g.nodes[None, :] * u, axis=1)],
        axis=1,
    )
    u = project_modes(u, n_modes)
    a_faces = project_modes(a_faces, n_modes)
    v_faces = diff_x(a_faces)
    v = 0.5 * (v_faces[:, :-1] + v_faces[:, 1:])
    return u, v, v_faces


def transport_rhs_r(w: np.ndarray, u, v, v_faces, g: RGrid) -> np.ndarray:
    """-(u dx w + v L_r w) with the radial advection in flux form for
    the r dr measure: (1/r) d/dr (v w) - (w/r) d/dr v."""
    dr = g.dr
    x_term = dealiased_product(u, diff_x(w))
    w_face = np.zeros_like(v_faces)
    w_face[:, 1:-1] = 0.5 * (w[:, :-1] + w[:, 1:])
    flux = dealiased_product(v_faces, w_face)
    flux[:, 0] = 0.0
    flux[:, -1] = 0.0
    inv_r = 1.0 / g.nodes[None, :]
    div_v = (v_faces[:, 1:] - v_faces[:, :-1]) / dr * inv_r
    a_term = (flux[:, 1:] - flux[:, :-1]) / dr * inv_r - dealiased_product(w, div_v)
    return -(x_term + a_term)


def step_rk4_r(w: np.ndarray, dt: float, g: RGrid, n_modes: int) -> np.ndarray:
    def f(w_):
        u, v, vf = velocities_r(w_, g, n_modes)
        return transport_rhs_r(w_, u, v, vf, g)

    k1 = f(w)
    k2 = f(w + 0.5 * dt * k1)
    k3 = f(w + 0.5 * dt * k2)
    k4 = f(w + dt * k3)
    return w + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def hs_norm_r(w: np.ndarray, s: int, g: RGrid) -> float:
    """H^s norm with L_r stencils and the r dr measure (for the norm
    equivalence check against the area-coordinate implementation)."""
    total = 0.0
    da_pow = np.asarray(w, dtype=float)
    for a2 in range(s + 1):
        if a2 > 0:
            da_pow = lr_op(da_pow, g)
        cur = da_pow
        for a1 in range(s + 1 - a2):
            if a1 > 0:
                cur = diff_x(cur)
            total += float(np.mean(integrate_rdr(cur**2, g)))
    return float(np.sqrt(max(total, 0.0)))
