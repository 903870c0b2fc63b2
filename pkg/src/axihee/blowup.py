"""Singularity-formation experiments.

Initial velocities of the form u0 = -amp sin(2 pi x) a^2 satisfy, at
the stagnation slice x = 0, the three-clause hypothesis under which
smooth solutions of the hydrostatic system cannot persist forever: u0
constant along the slice, the mixed slope dx da u0 vanishing at one
radial endpoint, and dx da^2 u0 strictly negative inside. The run
transports w0 = da u0 with the sign monitor off (such data violate the
sign condition by design) and tracks the three norms whose joint
boundedness a smooth continuation would require: |u|_inf, |dx u|_inf,
|dx p|_inf.

Breakdown is declared by resolution exhaustion, not norm size: when
the fraction of x-spectral energy of w carried by the top third of
modes exceeds a threshold, the grid no longer represents the solution
and the time is reported as T*. The threshold 0.1 never trips on the
smooth well-posedness test case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import Domain, make_domain
from .errors import CflError, PreconditionError
from .hydro import SolverConfig, pressure_gradient_inf
from .radial import diff_a, extrapolate_boundary
from .spectral import diff_x, mode_energy
from .state import admissible_dt, flow_state, hydro_velocity_solver, step_rk4
from .greens import VelocityFields

TAIL_GUARD_THRESHOLD = 0.1
CONSTANCY_TOL = 1e-8
NEGATIVITY_TOL = 1e-8


@dataclass(frozen=True)
class HypothesisReport:
    passed: bool
    constancy_deviation: float  # clause 1: max |u0(x^, .) - mean|
    endpoint_mixed_slopes: tuple[float, float]  # clause 2: dx da u0 at a = 0, 1/2
    max_interior_curvature: float  # clause 3: max of dx da^2 u0, must be < -tol

    @property
    def clauses(self) -> tuple[bool, bool, bool]:
        lo, hi = self.endpoint_mixed_slopes
        return (
            self.constancy_deviation <= CONSTANCY_TOL,
            min(abs(lo), abs(hi)) <= CONSTANCY_TOL,
            self.max_interior_curvature < -NEGATIVITY_TOL,
        )


def validate_blowup_hypothesis(u0: np.ndarray, x_hat: int, dom: Domain) -> HypothesisReport:
    """Check the three blowup clauses at the x node with index x_hat."""
    u0 = dom.check_field(u0)
    if not 0 <= x_hat < dom.nx:
        raise PreconditionError(f"x_hat index {x_hat} outside 0..{dom.nx - 1}")
    row = u0[x_hat]
    constancy = float(np.max(np.abs(row - row.mean())))
    mixed = diff_a(diff_x(u0), dom.grid)
    lo, hi = extrapolate_boundary(mixed[x_hat], dom.grid)
    curv = diff_a(mixed, dom.grid)[x_hat]
    report = HypothesisReport(
        passed=False,
        constancy_deviation=constancy,
        endpoint_mixed_slopes=(float(lo), float(hi)),
        max_interior_curvature=float(curv.max()),
    )
    return HypothesisReport(
        passed=all(report.clauses),
        constancy_deviation=report.constancy_deviation,
        endpoint_mixed_slopes=report.endpoint_mixed_slopes,
        max_interior_curvature=report.max_interior_curvature,
    )


def tail_fraction(w: np.ndarray, dom: Domain) -> float:
    """Fraction of x-spectral energy in the top third of modes."""
    energy = mode_energy(w)
    k_max = dom.nx // 2
    cut = (2 * k_max) // 3
    total = float(energy.sum())
    if total == 0.0:
        return 0.0
    return float(energy[cut + 1 :].sum()) / total


@dataclass
class BlowupReport:
    nx: int
    na: int
    dt: float
    times: list[float] = field(default_factory=list)
    u_inf: list[float] = field(default_factory=list)
    dxu_inf: list[float] = field(default_factory=list)
    dxp_inf: list[float] = field(default_factory=list)
    tail_frac: list[float] = field(default_factory=list)
    t_star: float | None = None
    growth_factor: float = 1.0  # max |dx u|_inf over the run / initial
    status: str = "completed"
    message: str = ""

    def to_json(self) -> dict:
        return {
            "t_star": self.t_star,
            "indicators": [
                {
                    "t": t, "u_inf": a, "dxu_inf": b, "dxp_inf": c, "tail_frac": d,
                }
                for t, a, b, c, d in zip(
                    self.times, self.u_inf, self.dxu_inf, self.dxp_inf, self.tail_frac
                )
            ],
            "nx": self.nx,
            "na": self.na,
            "dt": self.dt,
            "status": self.status,
            "growth_factor": self.growth_factor,
        }


def run_blowup_experiment(
    config: SolverConfig, u0: np.ndarray, require_hypothesis: bool = True
) -> BlowupReport:
    """Integrate from w0 = da u0 with the sign monitor off, recording
    the three blowup indicators each step until the spectral-tail guard
    trips (T*), the time horizon is reached, or the solution leaves the
    representable range."""
    dom = make_domain(config.nx, config.n_a)
    u0 = dom.check_field(u0)
    if require_hypothesis:
        x_nodes = np.argsort(np.max(np.abs(u0 - u0.mean(axis=1, keepdims=True)), axis=1))
        report = validate_blowup_hypothesis(u0, int(x_nodes[0]), dom)
        if not report.passed:
            raise PreconditionError(
                f"initial data fail the blowup hypothesis: clauses {report.clauses}"
            )
    w0 = diff_a(u0, dom.grid)
    n_modes = config.resolved_modes()
    solver = hydro_velocity_solver(dom, n_modes)
    state = flow_state(w0, dom, n_modes, solver=solver)
    rep = BlowupReport(nx=dom.nx, na=dom.n_a, dt=config.dt)

    def record(st) -> float:
        rep.times.append(st.t)
        rep.u_inf.append(float(np.max(np.abs(st.u))))
        rep.dxu_inf.append(float(np.max(np.abs(diff_x(st.u)))))
        rep.dxp_inf.append(pressure_gradient_inf(st))
        frac = tail_fraction(st.w, dom)
        rep.tail_frac.append(frac)
        return frac

    record(state)
    while state.t < config.t_end - 1e-12:
        vel = VelocityFields(state.u, state.v, state.v_faces, n_modes)
        cap = 0.9 * admissible_dt(vel, dom, config.cfl_max)
        dt = min(config.dt, cap, config.t_end - state.t)
        if dt <= 0 or not np.isfinite(dt):
            rep.status = "cfl_abort"
            rep.message = f"admissible dt collapsed at t={state.t:.6g}"
            break
        try:
            state = step_rk4(state, dt, cfl_max=None, solver=solver)
        except CflError as exc:  # pragma: no cover - guarded by cap above
            rep.status = "cfl_abort"
            rep.message = str(exc)
            break
        if not np.isfinite(state.w).all():
            rep.status = "nan_abort"
            rep.message = (
                f"non-finite vorticity at t={state.t:.6g} before the tail guard "
                "tripped; raise the resolution or shorten the horizon"
            )
            break
        frac = record(state)
        if frac >= TAIL_GUARD_THRESHOLD:
            rep.t_star = state.t
            rep.status = "blowup_detected"
            break
    if rep.dxu_inf and rep.dxu_inf[0] > 0:
        rep.growth_factor = max(rep.dxu_inf) / rep.dxu_inf[0]
    return rep
