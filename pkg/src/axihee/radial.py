"""Radial grids and calculus in the cross-sectional area coordinate.

All radial work happens in the area coordinate a = r^2/2 on (0, 1/2).
Under this change of variable the operator (1/r) d/dr becomes d/da and
the natural measure r dr becomes the flat measure da, so a uniform
cell-centered grid in a realizes the weighted radial calculus exactly:

    integral_0^1 f r dr  =  integral_0^{1/2} f da  ~  sum_j h f(a_j).

Cell centers a_j = (j + 1/2) h never touch the coordinate singularity
at r = 0, and midpoint weights sum to exactly 1/2 (the measure of the
unit disk cross-section up to 2*pi).

Besides the grid itself this module provides the discrete derivative
``diff_a`` (2nd-order centered, one-sided at the ends), quadratic
extrapolation to the domain endpoints, and executable versions of the
calculus facts the rest of the code leans on: the fundamental theorem
of calculus, integration by parts, and the Poincare inequality with
constant mu([0,1])^2 = 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, GridError, PreconditionError, StencilError


@dataclass(frozen=True)
class RadialGrid:
    """Cell-centered grid in the area coordinate a in (0, 1/2).

    Attributes
    ----------
    n_a:
        number of cells.
    h:
        cell width, (1/2)/n_a.
    nodes:
        cell centers a_j = (j+1/2) h.
    weights:
        midpoint quadrature weights (all equal to h).
    r_nodes:
        physical radii sqrt(2 a_j), strictly increasing in (0, 1).
    faces:
        cell interfaces a = j h, j = 0..n_a; used by the staggered
        Dirichlet solver.
    """

    n_a: int
    h: float
    nodes: np.ndarray
    weights: np.ndarray
    r_nodes: np.ndarray
    faces: np.ndarray = field(repr=False, default=None)


def make_grid(n_a: int) -> RadialGrid:
    """Build the cell-centered radial grid with ``n_a`` cells."""
    if n_a < 2:
        raise GridError(f"need at least 2 radial cells, got n_a={n_a}")
    h = 0.5 / n_a
    nodes = (np.arange(n_a) + 0.5) * h
    weights = np.full(n_a, h)
    faces = np.arange(n_a + 1) * h
    return RadialGrid(
        n_a=n_a,
        h=h,
        nodes=nodes,
        weights=weights,
        r_nodes=np.sqrt(2.0 * nodes),
        faces=faces,
    )


def _check_aligned(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != grid.n_a:
        raise DimensionError(
            f"last axis has {f.shape[-1]} samples, grid has {grid.n_a} cells"
        )
    return f


def integrate_radial(f: np.ndarray, grid: RadialGrid) -> float | np.ndarray:
    """Midpoint approximation of integral f da = integral f r dr.

    Exact for integrands affine in a. Operates on the last axis, so a
    stack of radial profiles integrates row-wise.
    """
    f = _check_aligned(f, grid)
    return f @ grid.weights


def diff_a(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Discrete d/da on cell centers (the operator (1/r) d/dr in r).

    Second-order centered differences in the interior, second-order
    one-sided 3-point stencils at the first and last cell.
    """
    f = _check_aligned(f, grid)
    if grid.n_a < 3:
        raise StencilError("diff_a needs n_a >= 3")
    h = grid.h
    out = np.empty_like(f)
    out[..., 1:-1] = (f[..., 2:] - f[..., :-2]) / (2.0 * h)
    out[..., 0] = (-3.0 * f[..., 0] + 4.0 * f[..., 1] - f[..., 2]) / (2.0 * h)
    out[..., -1] = (3.0 * f[..., -1] - 4.0 * f[..., -2] + f[..., -3]) / (2.0 * h)
    return out


def extrapolate_boundary(f: np.ndarray, grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    """Quadratic extrapolation of cell values to a = 0 and a = 1/2.

    Returns (value at a=0, value at a=1/2); exact for polynomials of
    degree <= 2 sampled on the three nearest cells.
    """
    f = _check_aligned(f, grid)
    if grid.n_a < 3:
        raise StencilError("boundary extrapolation needs n_a >= 3")
    lo = (15.0 * f[..., 0] - 10.0 * f[..., 1] + 3.0 * f[..., 2]) / 8.0
    hi = (15.0 * f[..., -1] - 10.0 * f[..., -2] + 3.0 * f[..., -3]) / 8.0
    return lo, hi


def verify_ftc(f: np.ndarray, grid: RadialGrid, a_lo: int, a_hi: int) -> float:
    """Residual of the discrete fundamental theorem of calculus.

    Compares f(a_hi) - f(a_lo) against the trapezoid integral of
    diff_a f between the two nodes. Zero for affine f; O(h^2) for
    smooth f.
    """
    f = _check_aligned(f, grid)
    if f.ndim != 1:
        raise DimensionError("verify_ftc expects a single radial profile")
    if not 0 <= a_lo < a_hi < grid.n_a:
        raise IndexError(f"need 0 <= a_lo < a_hi < n_a, got ({a_lo}, {a_hi})")
    df = diff_a(f, grid)
    seg = df[a_lo : a_hi + 1]
    integral = grid.h * (seg.sum() - 0.5 * (seg[0] + seg[-1]))
    return abs(f[a_hi] - f[a_lo] - integral)


def verify_ibp(f: np.ndarray, g: np.ndarray, grid: RadialGrid) -> float:
    """Residual of the discrete integration-by-parts identity.

    integral f (diff_a g) da + integral g (diff_a f) da = [f g] at the
    endpoints, endpoint products obtained by quadratic extrapolation.
    """
    f = _check_aligned(f, grid)
    g = _check_aligned(g, grid)
    lhs = integrate_radial(f * diff_a(g, grid), grid) + integrate_radial(
        g * diff_a(f, grid), grid
    )
    fg_lo, fg_hi = extrapolate_boundary(f * g, grid)
    return float(abs(lhs - (fg_hi - fg_lo)))


def poincare_ratio(f: np.ndarray, grid: RadialGrid) -> float:
    """Rayleigh quotient integral f^2 da / integral (diff_a f)^2 da.

    Requires f to vanish somewhere on [0, 1/2]: either a cell value or
    an extrapolated endpoint value of size O(h)*max|f|. The continuum
    bound is mu([0,1])^2 = 1/4; the discrete ratio obeys it up to a
    10% discretization slack.

    Returns 0 for f identically zero (0/0 convention).
    """
    f = _check_aligned(f, grid)
    if f.ndim != 1:
        raise DimensionError("poincare_ratio expects a single radial profile")
    scale = float(np.max(np.abs(f)))
    if scale == 0.0:
        return 0.0
    lo, hi = extrapolate_boundary(f, grid)
    smallest = min(float(np.min(np.abs(f))), abs(float(lo)), abs(float(hi)))
    # A smooth profile with a zero in [0, 1/2] has some sampled or
    # extrapolated value within O(h) of zero.
    if smallest > grid.h * scale:
        raise PreconditionError(
            "poincare_ratio requires a profile vanishing somewhere on [0, 1/2]"
        )
    num = float(integrate_radial(f * f, grid))
    den = float(integrate_radial(diff_a(f, grid) ** 2, grid))
    if den == 0.0:
        return 0.0
    return num / den
