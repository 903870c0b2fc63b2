"""Relative entropy machinery for the hydrostatic limit.

Given a hydrostatic reference state whose slope da w stays above a
positive sigma, the profile a -> w(x, a) is strictly increasing, so it
can be inverted: R(x, .) maps a vorticity value back to the radial
location carrying it. Through R one tabulates

    G(x, wt) = (u(x, R(wt)) - kappa) / (da w)(x, R(wt)),

and integrating G twice in the vorticity variable produces a strongly
convex function F with d^2F/dw^2 = G >= 1, provided kappa is chosen as
min u - max da w. Outside the tabulated range F continues as the
quadratic matching value, slope and curvature at the edge.

The functional

    L = 1/2 int { |u_e-u|^2 + eps^2 |(v_e-v)/r|^2 } da dx
      +     int { F(w_e) - F(w) - F'(w) (w_e-w) } da dx

is the relative entropy between a rescaled state and the hydrostatic
reference; ``entropy_budget`` evaluates every term of its exact time
derivative (I1..I5, X, Y, Z, R) and checks the budget against a
centered finite difference of L itself. The Bregman part enters
unhalved: differentiating it in time produces the full curvature terms
I3..I5 and X, and only the full X combines with Y into the reducible
Z = X + Y = kappa int (v_e-v)(w_e-w), whose square-cancellation is the
mechanism that closes the Gronwall bound L(t) <= (L(0)+eps^4 t) e^{Ct}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain, integrate_xa
from .errors import DimensionError, SignConditionError
from .greens import velocity_fields
from .radial import diff_a
from .spectral import diff_x
from .state import FlowState, transport_rhs
from .state import VelocityFields


@dataclass(frozen=True)
class ConvexEntropy:
    """Per-x tables of the strongly convex entropy function.

    w_table rows are the (strictly increasing) vorticity values at the
    radial nodes; f/df/g rows hold F, F' and F'' = G at those values.
    Between nodes G is linear (so F is the exact piecewise cubic);
    beyond the edges F extends quadratically with curvature frozen at
    the edge value.
    """

    kappa: float
    a_nodes: np.ndarray
    w_table: np.ndarray  # (nx, n_a)
    g_table: np.ndarray
    df_table: np.ndarray
    f_table: np.ndarray

    def _eval(self, queries: np.ndarray, rows: np.ndarray | None = None):
        """Evaluate (F, F', F'') row-wise at ``queries``.

        queries[i, :] is evaluated against table row rows[i] (identity
        by default). Shapes: queries (R, M) -> three (R, M) arrays.
        """
        q = np.atleast_2d(np.asarray(queries, dtype=float))
        row_idx = np.arange(q.shape[0]) if rows is None else np.asarray(rows)
        fq = np.empty_like(q)
        dfq = np.empty_like(q)
        gq = np.empty_like(q)
        for out_i, i in enumerate(row_idx):
            wt, gt = self.w_table[i], self.g_table[i]
            ft, dft = self.f_table[i], self.df_table[i]
            qi = q[out_i]
            j = np.clip(np.searchsorted(wt, qi) - 1, 0, wt.size - 2)
            t = qi - wt[j]
            dw = wt[j + 1] - wt[j]
            slope = (gt[j + 1] - gt[j]) / dw
            g = gt[j] + slope * t
            df = dft[j] + gt[j] * t + 0.5 * slope * t**2
            f = ft[j] + dft[j] * t + 0.5 * gt[j] * t**2 + slope * t**3 / 6.0

            below = qi < wt[0]
            if below.any():
                tb = qi[below] - wt[0]
                g[below] = gt[0]
                df[below] = gt[0] * tb
                f[below] = 0.5 * gt[0] * tb**2
            above = qi > wt[-1]
            if above.any():
                ta = qi[above] - wt[-1]
                g[above] = gt[-1]
                df[above] = dft[-1] + gt[-1] * ta
                f[above] = ft[-1] + dft[-1] * ta + 0.5 * gt[-1] * ta**2
            fq[out_i], dfq[out_i], gq[out_i] = f, df, g
        return fq, dfq, gq

    def eval_f(self, queries):
        return self._eval(queries)[0]

    def eval_df(self, queries):
        return self._eval(queries)[1]

    def eval_d2f(self, queries):
        return self._eval(queries)[2]

    def radius_of(self, x_index: int, w_values) -> np.ndarray:
        """Monotone linear interpolation of the inverse profile R."""
        return np.interp(w_values, self.w_table[x_index], self.a_nodes)


def build_convex_F(state: FlowState, sigma: float) -> ConvexEntropy:
    """Tabulate the convex entropy of a sign-condition state."""
    dom = state.domain
    slope = diff_a(state.w, dom.grid)
    if sigma <= 0 or slope.min() < sigma:
        raise SignConditionError(
            f"convex entropy needs min da w >= sigma > 0 "
            f"(min slope {slope.min():.4g}, sigma {sigma:.4g})"
        )
    kappa = float(state.u.min() - slope.max())
    w_table = state.w.copy()
    g_table = (state.u - kappa) / slope

    dw = np.diff(w_table, axis=1)
    df_table = np.zeros_like(w_table)
    df_table[:, 1:] = np.cumsum(0.5 * (g_table[:, :-1] + g_table[:, 1:]) * dw, axis=1)
    f_steps = (
        df_table[:, :-1] * dw
        + 0.5 * g_table[:, :-1] * dw**2
        + (g_table[:, 1:] - g_table[:, :-1]) * dw**2 / 6.0
    )
    f_table = np.zeros_like(w_table)
    f_table[:, 1:] = np.cumsum(f_steps, axis=1)
    return ConvexEntropy(
        kappa=kappa, a_nodes=dom.grid.nodes.copy(), w_table=w_table,
        g_table=g_table, df_table=df_table, f_table=f_table,
    )


def _check_pair(eps_state: FlowState, hydro_state: FlowState) -> Domain:
    dom = eps_state.domain
    if (dom.nx, dom.n_a) != (hydro_state.domain.nx, hydro_state.domain.n_a):
        raise DimensionError("relative entropy needs matching grids")
    if abs(eps_state.t - hydro_state.t) > 1e-12:
        raise DimensionError("relative entropy needs matching times")
    return dom


def relative_entropy(
    eps_state, hydro_state: FlowState, entropy: ConvexEntropy
) -> tuple[float, float, float]:
    """(kinetic part, convex part, total); total >= 0 always."""
    dom = _check_pair(eps_state, hydro_state)
    eps = getattr(eps_state, "eps", 0.0)
    two_a = 2.0 * dom.grid.nodes[None, :]
    du = eps_state.u - hydro_state.u
    dv = eps_state.v - hydro_state.v
    l_k = 0.5 * integrate_xa(du**2 + eps**2 * dv**2 / two_a, dom)
    f_e = entropy.eval_f(eps_state.w)
    f_h, df_h, _ = entropy._eval(hydro_state.w)
    bregman = f_e - f_h - df_h * (eps_state.w - hydro_state.w)
    l_c = integrate_xa(bregman, dom)
    return float(l_k), float(l_c), float(l_k + l_c)


@dataclass(frozen=True)
class EntropyBudget:
    t: float
    I1: float
    I2: float
    I3: float
    I4: float
    I5: float
    X: float
    Y: float
    Z_direct: float
    Z_reduced: float
    Z_eps_form: float
    R_term: float
    dLdt_fd: float
    residual: float

    CSV_HEADER = "t,I1,I2,I3,I4,I5,X,Y,Z_direct,Z_reduced,R,dLdt_fd,residual"

    def csv_row(self) -> str:
        vals = [
            self.t, self.I1, self.I2, self.I3, self.I4, self.I5, self.X, self.Y,
            self.Z_direct, self.Z_reduced, self.R_term, self.dLdt_fd, self.residual,
        ]
        return ",".join(f"{v:.17g}" for v in vals)

    def budget_sum(self) -> float:
        return self.I1 + self.I2 + self.I3 + self.I4 + self.I5 + self.Z_direct + self.R_term


def _fixed_value_x_derivative(entropy: ConvexEntropy, queries: np.ndarray, which: int) -> np.ndarray:
    """d/dx of F (which=0) or F' (which=1) at frozen vorticity values.

    queries has field shape (nx, n_a); entry (i, j) asks for the x
    partial of the table family at x_i, holding the query value fixed.
    Evaluated spectrally: every table row is evaluated at the whole
    query column, differentiated along x, and the diagonal extracted.
    """
    nx, n_a = queries.shape
    out = np.empty_like(queries)
    rows = np.arange(nx)
    for j in range(n_a):
        col = np.broadcast_to(queries[:, j], (nx, nx))  # (table row, query)
        vals = entropy._eval(col, rows=rows)[which]
        out[:, j] = np.diagonal(diff_x(vals))
    return out


def entropy_budget(
    eps_triple: tuple,
    hydro_triple: tuple[FlowState, FlowState, FlowState],
    sigma: float,
) -> EntropyBudget:
    """Evaluate the entropy budget at the center of a three-snapshot
    probe (t - dt, t, t + dt) of both trajectories."""
    se_m, se, se_p = eps_triple
    sh_m, sh, sh_p = hydro_triple
    dom = _check_pair(se, sh)
    dt_m = sh.t - sh_m.t
    dt_p = sh_p.t - sh.t
    if abs(dt_p - dt_m) > 1e-10 or dt_p <= 0:
        raise DimensionError("entropy_budget needs a symmetric time probe")
    delta = dt_p
    eps = getattr(se, "eps", 0.0)

    ent_m = build_convex_F(sh_m, sigma)
    ent = build_convex_F(sh, sigma)
    ent_p = build_convex_F(sh_p, sigma)

    two_a = 2.0 * dom.grid.nodes[None, :]
    root_two_a = np.sqrt(two_a)
    du = se.u - sh.u
    dv = se.v - sh.v
    dw = se.w - sh.w
    dvr = dv / root_two_a
    vr_h = sh.v / root_two_a
    slope_h = diff_a(sh.w, dom.grid)

    i1 = -0.5 * integrate_xa(diff_x(sh.u) * (du**2 + eps**2 * dvr**2), dom)
    i2 = -(eps**2) * integrate_xa(diff_x(vr_h) * du * dvr, dom) - (
        eps**2
    ) * integrate_xa(root_two_a * diff_a(vr_h, dom.grid) * dvr**2, dom)

    _, _, g_at_w = ent._eval(sh.w)
    i3 = -integrate_xa(diff_x(sh.w) * g_at_w * du * dw, dom)

    f_e_p, _, _ = ent_p._eval(se.w)
    f_e_m, _, _ = ent_m._eval(se.w)
    f_h_p, df_h_p, _ = ent_p._eval(sh.w)
    f_h_m, df_h_m, _ = ent_m._eval(sh.w)
    dt_f_e = (f_e_p - f_e_m) / (2.0 * delta)
    dt_f_h = (f_h_p - f_h_m) / (2.0 * delta)
    dt_df_h = (df_h_p - df_h_m) / (2.0 * delta)
    i4 = integrate_xa(dt_f_e - dt_f_h - dt_df_h * dw, dom)

    dx_f_e = _fixed_value_x_derivative(ent, se.w, which=0)
    dx_f_h = _fixed_value_x_derivative(ent, sh.w, which=0)
    dx_df_h = _fixed_value_x_derivative(ent, sh.w, which=1)
    i5 = integrate_xa(se.u * (dx_f_e - dx_f_h - dx_df_h * dw), dom)

    x_term = -integrate_xa(g_at_w * slope_h * dv * dw, dom)
    y_term = integrate_xa(sh.u * dv * dw, dom)
    z_direct = x_term + y_term
    z_reduced = ent.kappa * integrate_xa(dv * dw, dom)
    z_eps_form = -ent.kappa * eps**2 * integrate_xa(diff_x(vr_h) * dvr, dom)

    # dt(v/r) through the hydrostatic tendency: dt v = dx A(dt w).
    vel_h = VelocityFields(u=sh.u, v=sh.v, v_faces=sh.v_faces, n_modes=sh.n_modes)
    w_dot = transport_rhs(sh.w, vel_h, dom)
    v_dot = velocity_fields(w_dot, dom, sh.n_modes).v
    advect_vr = v_dot / root_two_a + sh.v * diff_a(vr_h, dom.grid)
    r_term = -(eps**2) * integrate_xa(advect_vr * dvr, dom)

    l_p = relative_entropy(se_p, sh_p, ent_p)[2]
    l_m = relative_entropy(se_m, sh_m, ent_m)[2]
    dldt_fd = (l_p - l_m) / (2.0 * delta)

    budget = i1 + i2 + i3 + i4 + i5 + z_direct + r_term
    return EntropyBudget(
        t=sh.t, I1=i1, I2=i2, I3=i3, I4=i4, I5=i5, X=x_term, Y=y_term,
        Z_direct=z_direct, Z_reduced=z_reduced, Z_eps_form=z_eps_form,
        R_term=r_term, dLdt_fd=dldt_fd, residual=abs(dldt_fd - budget),
    )


def budget_series(eps_traj, hydro_traj, sigma: float, n_probes: int = 10) -> list[EntropyBudget]:
    """Budgets at ``n_probes`` interior snapshots, probe width = one
    snapshot interval. Probes whose neighbors are unevenly spaced (the
    final snapshot may sit off-cadence) are skipped."""
    n = min(len(eps_traj.times), len(hydro_traj.times))
    if n < 3:
        raise DimensionError("need at least 3 snapshots for the probe")
    times = np.asarray(hydro_traj.times[:n])
    symmetric = [
        i for i in range(1, n - 1)
        if abs((times[i + 1] - times[i]) - (times[i] - times[i - 1])) <= 1e-10
    ]
    if not symmetric:
        raise DimensionError("no symmetric probe stencils in the trajectories")
    pick = np.unique(np.linspace(0, len(symmetric) - 1, min(n_probes, len(symmetric))).astype(int))
    out = []
    for j in pick:
        i = symmetric[j]
        out.append(
            entropy_budget(
                (eps_traj.states[i - 1], eps_traj.states[i], eps_traj.states[i + 1]),
                (hydro_traj.states[i - 1], hydro_traj.states[i], hydro_traj.states[i + 1]),
                sigma,
            )
        )
    return out
