"""The epsilon-rescaled axisymmetric Euler system in vorticity form,
and the hydrostatic-limit gap functional.

The transported scalar here is w_eps = (1/r) dr u - (eps^2/r^2) dx v,
advected by velocities recovered from the mode-wise elliptic solve in
``greens.EpsStreamSolver``. The transport step, monitors and record
keeping are shared verbatim with the hydrostatic solver so that every
difference between a rescaled run and a hydro run is attributable to
epsilon alone; at eps = 0 the two integrators coincide to round-off.

``limit_gap`` is the squared L^2 distance controlled in the
hydrostatic limit:

    integral { |u_e - u|^2 + eps^2 |(v_e - v)/r|^2 + |w_e - w|^2 } da dx,

whose growth from identical initial data is bounded by eps^4 t e^{Ct}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain, integrate_xa, make_domain
from .errors import DimensionError
from .greens import EpsStreamSolver, VelocityFields
from .hydro import SolverConfig, Trajectory, integrate
from .initial_data import make_initial
from .state import FlowState, flow_state, transport_rhs


@dataclass(frozen=True)
class EpsFlowState(FlowState):
    eps: float = 0.0


def eps_flow_state(
    w: np.ndarray,
    eps: float,
    dom: Domain,
    n_modes: int,
    t: float = 0.0,
    solver: EpsStreamSolver | None = None,
) -> EpsFlowState:
    solver = solver or EpsStreamSolver(dom, eps, n_modes)
    vel = solver.velocities(dom.check_field(w))
    return EpsFlowState(
        domain=dom, t=t, w=w, u=vel.u, v=vel.v, v_faces=vel.v_faces,
        n_modes=n_modes, eps=eps,
    )


def eps_rhs(state: EpsFlowState) -> np.ndarray:
    """Tendency of the rescaled vorticity transport (same advective
    structure as the hydrostatic system)."""
    vel = VelocityFields(
        u=state.u, v=state.v, v_faces=state.v_faces, n_modes=state.n_modes
    )
    return transport_rhs(state.w, vel, state.domain)


def run_eps(config: SolverConfig, eps: float, w0: np.ndarray | None = None) -> Trajectory:
    """Integrate the rescaled system; identical orchestration to the
    hydro run, with the per-mode elliptic velocity solve."""
    dom = make_domain(config.nx, config.n_a)
    if w0 is None:
        w0 = make_initial(config.initial_data, dom).w0
    solver = EpsStreamSolver(dom, eps, config.resolved_modes())
    traj = integrate(w0, dom, config, solver.velocities)
    traj.states = [
        EpsFlowState(
            domain=s.domain, t=s.t, w=s.w, u=s.u, v=s.v, v_faces=s.v_faces,
            n_modes=s.n_modes, eps=eps,
        )
        for s in traj.states
    ]
    return traj


def limit_gap(eps_state: FlowState, hydro_state: FlowState, eps: float) -> float:
    """Squared L^2 distance between a rescaled state and a hydrostatic
    state at the same time, with the eps^2-weighted radial term."""
    dom = eps_state.domain
    if (dom.nx, dom.n_a) != (hydro_state.domain.nx, hydro_state.domain.n_a):
        raise DimensionError("limit_gap needs matching grids")
    if abs(eps_state.t - hydro_state.t) > 1e-12:
        raise DimensionError(
            f"limit_gap needs matching times, got {eps_state.t} vs {hydro_state.t}"
        )
    two_a = 2.0 * dom.grid.nodes[None, :]
    du = eps_state.u - hydro_state.u
    dv = eps_state.v - hydro_state.v
    dw = eps_state.w - hydro_state.w
    return float(integrate_xa(du**2 + eps**2 * dv**2 / two_a + dw**2, dom))


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x); nan with fewer
    than two samples."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    if lx.size < 2:
        return float("nan")
    return float(np.polyfit(lx, ly, 1)[0])
