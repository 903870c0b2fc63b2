"""Time integration of the projected hydrostatic vorticity system.

A run transports w with RK4, recomputing velocities from the potential
at every stage, and watches three monitors:

* the sign condition min da w >= sigma (advisory abort, never a
  projection: the dynamics is left untouched and the breach time is
  reported),
* the CFL bound (abort, or step shrinking in adaptive mode),
* NaN/overflow detection.

Snapshots and scalar diagnostics are recorded on a fixed step cadence;
an x-independent initial profile is an exact fixed point of the whole
pipeline, which pins the integrator against drift bugs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagnostics import DiagnosticsRecord, record_for
from .domain import Domain, make_domain
from .errors import CflError, PreconditionError
from .initial_data import make_initial
from .spectral import diff_x
from .state import (
    FlowState,
    VelocitySolver,
    admissible_dt,
    flow_state,
    hydro_velocity_solver,
    step_rk4,
)
from .state import rhs  # re-exported: the hydrostatic tendency  # noqa: F401

# Minimum admissible fraction of the configured dt before an adaptive
# run gives up on the CFL condition.
_ADAPTIVE_DT_FLOOR = 1e-4


@dataclass(frozen=True)
class SolverConfig:
    nx: int = 128
    n_a: int = 64
    n_modes: int | None = None  # defaults to nx // 3
    dt: float = 1e-3
    t_end: float = 0.5
    cfl_max: float = 0.5
    sigma_min: float = 0.1
    monitor_sign: bool = True
    adaptive_dt: bool = False
    cadence: int = 10
    initial_data: str = "shear_perturbed(4, 0.1, 1, 1)"

    def __post_init__(self):
        if self.dt <= 0 or self.t_end <= 0:
            raise PreconditionError("dt and t_end must be positive")
        if not 0 < self.cfl_max <= 1:
            raise PreconditionError("cfl_max must lie in (0, 1]")
        if self.monitor_sign and self.sigma_min <= 0:
            raise PreconditionError("sigma_min must be positive when monitoring")

    def resolved_modes(self) -> int:
        return self.n_modes if self.n_modes is not None else self.nx // 3


@dataclass
class Trajectory:
    domain: Domain
    n_modes: int
    times: list[float] = field(default_factory=list)
    states: list[FlowState] = field(default_factory=list)
    records: list[DiagnosticsRecord] = field(default_factory=list)
    status: str = "completed"
    t_stop: float | None = None
    message: str = ""

    @property
    def final(self) -> FlowState:
        return self.states[-1]

    def csv_rows(self) -> list[str]:
        return [r.csv_row() for r in self.records]


def integrate(
    w0: np.ndarray,
    dom: Domain,
    config: SolverConfig,
    solver: VelocitySolver,
) -> Trajectory:
    """Shared RK4 driver for the hydrostatic and rescaled systems."""
    n_modes = config.resolved_modes()
    state = flow_state(w0, dom, n_modes, t=0.0, solver=solver)
    sigma = config.sigma_min

    if config.monitor_sign and state.min_slope() < 2.0 * sigma:
        raise PreconditionError(
            f"initial slope min da w = {state.min_slope():.4g} is below "
            f"2 sigma = {2 * sigma:.4g}; sign-monitored runs need margin"
        )

    traj = Trajectory(domain=dom, n_modes=n_modes)

    def record(st: FlowState, dt_used: float):
        traj.times.append(st.t)
        traj.states.append(st)
        traj.records.append(record_for(st, sigma, dt_used))

    record(state, config.dt)
    step = 0
    while state.t < config.t_end - 1e-12:
        dt = min(config.dt, config.t_end - state.t)
        if config.adaptive_dt:
            from .greens import VelocityFields

            vel = VelocityFields(state.u, state.v, state.v_faces, n_modes)
            cap = 0.9 * admissible_dt(vel, dom, config.cfl_max)
            if cap < config.dt * _ADAPTIVE_DT_FLOOR:
                traj.status = "cfl_abort"
                traj.t_stop = state.t
                traj.message = f"admissible dt collapsed to {cap:.3e}"
                break
            dt = min(dt, cap)
        try:
            state = step_rk4(state, dt, cfl_max=config.cfl_max, solver=solver)
        except CflError as exc:
            traj.status = "cfl_abort"
            traj.t_stop = state.t
            traj.message = str(exc)
            break
        step += 1
        if not np.isfinite(state.w).all():
            traj.status = "nan_abort"
            traj.t_stop = state.t
            traj.message = "non-finite vorticity"
            break
        done = state.t >= config.t_end - 1e-12
        if config.monitor_sign and state.min_slope() < sigma:
            record(state, dt)
            traj.status = "sign_breach"
            traj.t_stop = state.t
            traj.message = (
                f"min da w = {state.min_slope():.4g} fell below sigma = {sigma:.4g} "
                f"at t = {state.t:.6g}"
            )
            break
        if step % config.cadence == 0 or done:
            record(state, dt)
    return traj


def run(config: SolverConfig, w0: np.ndarray | None = None) -> Trajectory:
    """Integrate the hydrostatic system described by ``config``."""
    dom = make_domain(config.nx, config.n_a)
    if w0 is None:
        w0 = make_initial(config.initial_data, dom).w0
    solver = hydro_velocity_solver(dom, config.resolved_modes())
    return integrate(w0, dom, config, solver)


def recover_pressure(state: FlowState) -> np.ndarray:
    """p(x) = -2 integral_0^{1/2} u^2 da, gauged to zero x-mean.

    The free additive function of time in the pressure is fixed by the
    zero-mean convention; dp/dx is gauge-independent.
    """
    dom = state.domain
    p = -2.0 * (state.u**2 @ dom.grid.weights)
    return p - p.mean()


def pressure_gradient_inf(state: FlowState) -> float:
    return float(np.max(np.abs(diff_x(recover_pressure(state)))))
