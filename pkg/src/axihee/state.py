"""Flow states and the transport step shared by both vorticity systems.

A state carries the transported scalar w (the rescaled vorticity
omega/r) together with velocities recomputed from it through the
Biot-Savart law; velocities are never advanced independently, so the
divergence constraint and the cancellation identities hold at every
Runge-Kutta stage.

The tendency -(u dw/dx + v dw/da) is evaluated with the x-advection in
advective form (spectral derivative, dealiased product) and the
a-advection in the equivalent conservative form

    d/da(v w) - w dv/da

built from face fluxes of the staggered velocity. Both forms agree to
second order; the flux form makes the total vorticity integral and the
advective energy identity exact in the discrete quadrature, not just
O(h^2).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .domain import Domain
from .errors import CflError
from .greens import VelocityFields, velocity_fields
from .radial import diff_a
from .spectral import dealiased_product, diff_x

VelocitySolver = Callable[[np.ndarray], VelocityFields]


@dataclass(frozen=True)
class FlowState:
    """Snapshot of the hydrostatic vorticity system."""

    domain: Domain
    t: float
    w: np.ndarray
    u: np.ndarray
    v: np.ndarray
    v_faces: np.ndarray
    n_modes: int

    def min_slope(self) -> float:
        """min over the lattice of d w / d a (the sign-condition quantity)."""
        return float(diff_a(self.w, self.domain.grid).min())

    def max_slope(self) -> float:
        return float(diff_a(self.w, self.domain.grid).max())


def hydro_velocity_solver(dom: Domain, n_modes: int) -> VelocitySolver:
    return lambda w: velocity_fields(w, dom, n_modes)


def flow_state(
    w: np.ndarray,
    dom: Domain,
    n_modes: int,
    t: float = 0.0,
    solver: VelocitySolver | None = None,
) -> FlowState:
    w = dom.check_field(w)
    vel = (solver or hydro_velocity_solver(dom, n_modes))(w)
    return FlowState(
        domain=dom, t=t, w=w, u=vel.u, v=vel.v, v_faces=vel.v_faces, n_modes=n_modes
    )


def transport_rhs(w: np.ndarray, vel: VelocityFields, dom: Domain) -> np.ndarray:
    """Tendency of dw/dt + u dw/dx + v dw/da = 0."""
    h = dom.grid.h
    x_term = dealiased_product(vel.u, diff_x(w))

    w_face = np.zeros_like(vel.v_faces)
    w_face[:, 1:-1] = 0.5 * (w[:, :-1] + w[:, 1:])
    flux = dealiased_product(vel.v_faces, w_face)
    flux[:, 0] = 0.0
    flux[:, -1] = 0.0
    div_v = (vel.v_faces[:, 1:] - vel.v_faces[:, :-1]) / h
    a_term = (flux[:, 1:] - flux[:, :-1]) / h - dealiased_product(w, div_v)

    return -(x_term + a_term)


def rhs(state: FlowState) -> np.ndarray:
    """Tendency of the projected hydrostatic vorticity system."""
    vel = VelocityFields(
        u=state.u, v=state.v, v_faces=state.v_faces, n_modes=state.n_modes
    )
    return transport_rhs(state.w, vel, state.domain)


def admissible_dt(vel: VelocityFields, dom: Domain, cfl_max: float) -> float:
    """Largest step allowed by dt * max(|u|/dx, |v|/h) <= cfl_max."""
    speed = max(
        float(np.max(np.abs(vel.u))) * dom.nx,
        float(np.max(np.abs(vel.v_faces))) / dom.grid.h,
    )
    if speed == 0.0:
        return np.inf
    return cfl_max / speed


def step_rk4(
    state: FlowState,
    dt: float,
    cfl_max: float | None = None,
    solver: VelocitySolver | None = None,
) -> FlowState:
    """Classical four-stage explicit step; velocities recomputed from w
    at every stage. Raises CflError carrying the admissible step when
    the CFL bound is violated."""
    dom = state.domain
    solver = solver or hydro_velocity_solver(dom, state.n_modes)

    vel0 = VelocityFields(
        u=state.u, v=state.v, v_faces=state.v_faces, n_modes=state.n_modes
    )
    if cfl_max is not None:
        dt_adm = admissible_dt(vel0, dom, cfl_max)
        if dt > dt_adm:
            raise CflError(dt, dt_adm)

    w = state.w
    k1 = transport_rhs(w, vel0, dom)
    k2 = transport_rhs(w + 0.5 * dt * k1, solver(w + 0.5 * dt * k1), dom)
    k3 = transport_rhs(w + 0.5 * dt * k2, solver(w + 0.5 * dt * k2), dom)
    k4 = transport_rhs(w + dt * k3, solver(w + dt * k3), dom)
    w_new = w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    vel = solver(w_new)
    return replace(
        state, t=state.t + dt, w=w_new, u=vel.u, v=vel.v, v_faces=vel.v_faces
    )
