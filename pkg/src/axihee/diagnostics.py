"""Norms, energies and structural residuals for flow states.

The anisotropic Sobolev scale used throughout measures x-derivatives
spectrally and radial derivatives with diff_a (= the operator
(1/r) d/dr in physical radius), against the measure da dx = r dr dx:

    |w|_{H^s}^2 = sum_{|alpha| <= s} |dx^{a1} da^{a2} w|_{L^2(da dx)}^2.

The weighted variant divides the top pure-x term by the slope da w,
which is positive exactly under the sign condition da w >= sigma; it is
the energy whose growth the a priori estimate controls.

The structural residuals (incompressibility, compatibility, boundary
values of v, nonlinear cancellation) are identities of the staggered
velocity construction and should sit at round-off for any state whose
velocities came from the Biot-Savart solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain, inner_xa, l2_norm
from .errors import DimensionError, PreconditionError, SignConditionError, StencilError
from .radial import diff_a
from .spectral import diff_x
from .state import FlowState

RESIDUAL_FLOOR = 1e-14


def _derivative_table(w: np.ndarray, s: int, dom: Domain) -> dict[tuple[int, int], np.ndarray]:
    if dom.n_a < s + 2:
        raise StencilError(f"hs_norm with s={s} needs n_a >= {s + 2}")
    table = {}
    da_pow = np.asarray(w, dtype=float)
    for a2 in range(s + 1):
        if a2 > 0:
            da_pow = diff_a(da_pow, dom.grid)
        cur = da_pow
        for a1 in range(s + 1 - a2):
            if a1 > 0:
                cur = diff_x(cur)
            table[(a1, a2)] = cur
    return table


def hs_norm(w: np.ndarray, s: int, dom: Domain) -> float:
    """Anisotropic H^s norm of w over T x (0, 1/2)."""
    if s < 0:
        raise PreconditionError(f"s must be >= 0, got {s}")
    table = _derivative_table(w, s, dom)
    total = sum(inner_xa(f, f, dom) for f in table.values())
    return float(np.sqrt(max(total, 0.0)))


def weighted_energy(w: np.ndarray, s: int, sigma: float, dom: Domain) -> float:
    """H^s energy with the top pure-x term weighted by 1/(da w).

    Well-defined only under the sign condition min da w >= sigma > 0.
    """
    slope = diff_a(dom.check_field(w), dom.grid)
    if sigma <= 0 or slope.min() < sigma:
        raise SignConditionError(
            f"weighted energy needs min da w >= sigma > 0 "
            f"(min slope {slope.min():.4g}, sigma {sigma:.4g})"
        )
    table = _derivative_table(w, s, dom)
    top = table.pop((s, 0))
    total = inner_xa(top / np.sqrt(slope), top / np.sqrt(slope), dom)
    total += sum(inner_xa(f, f, dom) for f in table.values())
    return float(np.sqrt(max(total, 0.0)))


def cancellation_residual(state: FlowState, k: int) -> float:
    """Normalized |integral dx^k v dx^k w da dx|; ~1e-14 for states with
    Biot-Savart-consistent velocities."""
    if k > 3:
        raise PreconditionError(f"cancellation_residual supports k <= 3, got {k}")
    vk = diff_x(state.v, order=k) if k else state.v
    wk = diff_x(state.w, order=k) if k else state.w
    dom = state.domain
    raw = abs(inner_xa(vk, wk, dom))
    return raw / (l2_norm(vk, dom) * l2_norm(wk, dom) + RESIDUAL_FLOOR)


def incompressibility_residual(state: FlowState) -> float:
    """max |dx u + da v| using the face divergence of v."""
    h = state.domain.grid.h
    div = diff_x(state.u) + (state.v_faces[:, 1:] - state.v_faces[:, :-1]) / h
    return float(np.max(np.abs(div)))


def compatibility_residual(state: FlowState) -> float:
    """max over x of |integral u da| (the conserved mean is gauged to 0)."""
    return float(np.max(np.abs(state.u @ state.domain.grid.weights)))


def v_boundary_magnitude(state: FlowState) -> float:
    """Largest |v| on the two radial boundaries."""
    return float(
        max(np.max(np.abs(state.v_faces[:, 0])), np.max(np.abs(state.v_faces[:, -1])))
    )


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    l2: float
    hs4: float
    whs4: float  # nan when the sign condition fails
    min_daw: float
    max_daw: float
    mean_u_drift: float
    cancel: tuple[float, float, float, float]
    dt: float

    CSV_HEADER = "t,l2,hs4,whs4,min_daw,max_daw,mean_u_drift,cancel0,cancel1,cancel2,cancel3,dt"

    def csv_row(self) -> str:
        vals = [
            self.t, self.l2, self.hs4, self.whs4, self.min_daw, self.max_daw,
            self.mean_u_drift, *self.cancel, self.dt,
        ]
        return ",".join(f"{v:.17g}" for v in vals)


def record_for(state: FlowState, sigma: float, dt: float) -> DiagnosticsRecord:
    dom = state.domain
    slope = diff_a(state.w, dom.grid)
    min_daw = float(slope.min())
    try:
        whs4 = weighted_energy(state.w, 4, sigma, dom) if min_daw >= sigma > 0 else float("nan")
    except SignConditionError:
        whs4 = float("nan")
    return DiagnosticsRecord(
        t=state.t,
        l2=l2_norm(state.w, dom),
        hs4=hs_norm(state.w, 4, dom),
        whs4=whs4,
        min_daw=min_daw,
        max_daw=float(slope.max()),
        mean_u_drift=compatibility_residual(state),
        cancel=tuple(cancellation_residual(state, k) for k in range(4)),
        dt=dt,
    )


@dataclass(frozen=True)
class L2Comparison:
    times: np.ndarray
    gaps: np.ndarray
    initial_gap: float
    sup_gap: float
    sup_ratio: float  # sup_t gap(t) / gap(0), inf convention guarded
    interp_constant: float  # fitted C in |d|_{H^1} <= C |d|_{H^4}^{1/4} |d|_{L^2}^{3/4}


def l2_compare(traj1, traj2) -> L2Comparison:
    """L^2 gap series between two trajectories on matching grids/times.

    Also fits the constant of the interpolation inequality
    |d|_{H^1} <= C |d|_{H^4}^{1/4} |d|_{L^2}^{3/4} over the snapshots.
    """
    if traj1.domain.nx != traj2.domain.nx or traj1.domain.n_a != traj2.domain.n_a:
        raise DimensionError("trajectories live on different grids")
    t1 = np.asarray(traj1.times)
    t2 = np.asarray(traj2.times)
    n = min(len(t1), len(t2))
    if n == 0 or np.max(np.abs(t1[:n] - t2[:n])) > 1e-12:
        raise DimensionError("trajectory snapshot times do not match")
    dom = traj1.domain
    gaps = np.array(
        [l2_norm(traj1.states[i].w - traj2.states[i].w, dom) for i in range(n)]
    )
    g0 = float(gaps[0])
    sup_gap = float(gaps.max())
    sup_ratio = sup_gap / g0 if g0 > 0 else (0.0 if sup_gap == 0 else float("inf"))

    c_interp = 0.0
    for i in range(n):
        d = traj1.states[i].w - traj2.states[i].w
        lo, hi = l2_norm(d, dom), hs_norm(d, 4, dom)
        denom = hi ** 0.25 * lo ** 0.75
        if denom > 1e-14:
            c_interp = max(c_interp, hs_norm(d, 1, dom) / denom)
    return L2Comparison(
        times=t1[:n], gaps=gaps, initial_gap=g0, sup_gap=sup_gap,
        sup_ratio=sup_ratio, interp_constant=c_interp,
    )


@dataclass(frozen=True)
class PoleCheckReport:
    """max over x of |da^i phi| on the three samples nearest the axis."""

    orders: tuple[int, ...]
    bounds: tuple[float, ...]
    phi_axis: float  # |phi| at the a = 0 face (zero iff compatibility)


def pole_check(state: FlowState, m_max: int) -> PoleCheckReport:
    """Boundedness report for stream-function derivatives at the axis.

    phi(x, a) = -integral_a^{1/2} u da~ vanishes at the wall by
    construction and at the axis by the compatibility condition; its
    da-derivatives near a = 0 stay bounded under grid refinement
    exactly when the velocity field is smooth at the axis.

    phi is accumulated on cell faces (exact telescoping, so the axis
    value is the compatibility integral itself) and each derivative is
    a central staggered difference, alternating faces and cells; no
    one-sided stencils pollute the reported near-axis samples.
    """
    dom = state.domain
    scale = float(np.max(np.abs(state.u))) + 1e-30
    if compatibility_residual(state) > 1e-10 * max(scale, 1.0):
        raise PreconditionError("pole_check requires the compatibility condition")
    h = dom.grid.h
    phi_faces = -np.concatenate(
        [np.cumsum((h * state.u)[:, ::-1], axis=1)[:, ::-1], np.zeros((dom.nx, 1))],
        axis=1,
    )
    phi_axis = float(np.max(np.abs(phi_faces[:, 0])))
    orders, bounds = [], []
    cur = phi_faces
    for i in range(1, m_max + 2):
        cur = (cur[:, 1:] - cur[:, :-1]) / h
        if cur.shape[1] < 3:
            break
        orders.append(i)
        bounds.append(float(np.max(np.abs(cur[:, :3]))))
    return PoleCheckReport(orders=tuple(orders), bounds=tuple(bounds), phi_axis=phi_axis)
