"""Dirichlet solver and velocity reconstruction (hydrostatic Biot-Savart).

The potential A(w) solves, per x,

    -d^2/da^2 A = w   on (0, 1/2),      A(0) = A(1/2) = 0,

which in the physical radius is -((1/r) d/dr)^2 A = w with A vanishing
at the axis and the wall. Two independent realizations are provided:

* ``apply_A_kernel`` integrates the explicit Green's kernel
      K(a, at) = -1/2 ( |a - at| - a - at + 4 a at ),
  with the kink cell handled by the analytic cell integral of |a - at|.
  O(n_a^2) per x node; retained purely as an oracle.

* ``apply_A_tridiag`` solves the three-point system on the interior
  cell faces (Thomas/banded elimination, O(n_a)); this is the
  production path.

The staggered layout is deliberate: the potential lives on cell faces
with the Dirichlet values pinned exactly, the horizontal velocity
u = -dA/da is the face difference at cell centers, and the vertical
flux v = dA/dx is spectral in x. This makes four structural identities
hold to round-off rather than to O(h^2):

    d/dx u + (face difference of v) = 0          (incompressibility)
    sum_j h u_j = -(A(1/2) - A(0)) = 0            (compatibility)
    v = 0 at a = 0 and a = 1/2                    (boundary condition)
    integral dx^k v dx^k w da dx = 0              (nonlinear cancellation)

``eps_biot_savart`` generalizes the solve to the rescaled system: per
Fourier mode k the potential obeys

    d^2/da^2 phi - eps^2 (2 pi k)^2 / (2a) phi = w_k,

the singular coefficient being evaluated on interior faces only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded, solve_banded

from .domain import Domain
from .errors import PreconditionError, SpectralConfigError
from .spectral import diff_x, project_modes


@dataclass(frozen=True)
class DirichletPotential:
    """A(w) sampled on cell faces and averaged onto cell centers."""

    faces: np.ndarray  # (nx, n_a + 1), boundary columns identically 0
    cells: np.ndarray  # (nx, n_a)

    @property
    def boundary_values(self) -> tuple[np.ndarray, np.ndarray]:
        return self.faces[:, 0], self.faces[:, -1]


@dataclass(frozen=True)
class VelocityFields:
    """Velocities derived from one potential.

    u and v are cell fields; v_faces carries v on cell faces with the
    boundary rows exactly zero. All three share the mode cutoff N.
    """

    u: np.ndarray
    v: np.ndarray
    v_faces: np.ndarray
    n_modes: int


def _face_average(w: np.ndarray) -> np.ndarray:
    """Cell field -> interior-face field, second order."""
    return 0.5 * (w[:, :-1] + w[:, 1:])


def _assemble(interior: np.ndarray, dom: Domain) -> DirichletPotential:
    faces = np.zeros((dom.nx, dom.n_a + 1))
    faces[:, 1:-1] = interior
    cells = 0.5 * (faces[:, :-1] + faces[:, 1:])
    return DirichletPotential(faces=faces, cells=cells)


def apply_A_tridiag(w: np.ndarray, dom: Domain) -> DirichletPotential:
    """Solve -A'' = w on interior faces with pinned Dirichlet values."""
    w = dom.check_field(w)
    h = dom.grid.h
    n = dom.n_a - 1  # interior faces
    ab = np.zeros((3, n))
    ab[0, 1:] = -1.0 / h**2
    ab[1, :] = 2.0 / h**2
    ab[2, :-1] = -1.0 / h**2
    rhs = _face_average(w).T  # (n, nx)
    interior = solve_banded((1, 1), ab, rhs).T
    return _assemble(interior, dom)


def apply_A_kernel(w: np.ndarray, dom: Domain) -> DirichletPotential:
    """Quadrature of the explicit kernel; independent oracle for the
    tridiagonal path."""
    w = dom.check_field(w)
    g = dom.grid
    h = g.h

    def kernel_matrix(targets: np.ndarray) -> np.ndarray:
        t = targets[:, None]
        s = g.nodes[None, :]
        return -0.5 * (np.abs(t - s) - t - s + 4.0 * t * s)

    # Midpoint sum is exact per cell (kernel affine in the source
    # variable) except in the cell containing the kink at at = a.
    m_faces = h * kernel_matrix(g.faces)
    m_cells = h * kernel_matrix(g.nodes)
    m_cells[np.arange(g.n_a), np.arange(g.n_a)] -= 0.5 * (h / 2.0) ** 2

    faces = w @ m_faces.T
    cells = w @ m_cells.T
    faces[:, 0] = 0.0
    faces[:, -1] = 0.0
    return DirichletPotential(faces=faces, cells=cells)


def laplacian_residual(
    pot: DirichletPotential, w_interior_faces: np.ndarray, dom: Domain
) -> float:
    """max |(-second face difference of A) - w| at interior faces.

    ``w_interior_faces`` should hold the source sampled on the interior
    faces (shape (nx, n_a - 1)); against exact face samples the
    residual measures the cell-to-face averaging error, O(h^2).
    """
    h = dom.grid.h
    f = pot.faces
    lap = -(f[:, 2:] - 2.0 * f[:, 1:-1] + f[:, :-2]) / h**2
    return float(np.max(np.abs(lap - w_interior_faces)))


def _velocities(phi_faces: np.ndarray, dom: Domain, n_modes: int) -> VelocityFields:
    h = dom.grid.h
    phi = project_modes(phi_faces, n_modes)
    u = -(phi[:, 1:] - phi[:, :-1]) / h
    v_faces = diff_x(phi)
    v = 0.5 * (v_faces[:, :-1] + v_faces[:, 1:])
    return VelocityFields(u=u, v=v, v_faces=v_faces, n_modes=n_modes)


def check_mode_cutoff(n_modes: int, dom: Domain) -> None:
    if n_modes < 1:
        raise SpectralConfigError(f"mode cutoff must be >= 1, got {n_modes}")
    if 3 * n_modes > dom.nx:
        raise SpectralConfigError(
            f"mode cutoff N={n_modes} exceeds the dealiasing headroom nx/3={dom.nx / 3:.1f}"
        )


def velocity_fields(w: np.ndarray, dom: Domain, n_modes: int) -> VelocityFields:
    """u = -P_N dA/da, v = P_N dA/dx from the tridiagonal potential."""
    check_mode_cutoff(n_modes, dom)
    pot = apply_A_tridiag(w, dom)
    return _velocities(pot.faces, dom, n_modes)


def biot_savart(w: np.ndarray, dom: Domain, n_modes: int) -> tuple[np.ndarray, np.ndarray]:
    vel = velocity_fields(w, dom, n_modes)
    return vel.u, vel.v


class EpsStreamSolver:
    """Per-mode elliptic solver for the rescaled Biot-Savart law.

    For each retained Fourier mode k the interior-face system

        (-d^2/da^2 + eps^2 (2 pi k)^2 / (2 a)) phi_k = w_k

    is symmetric positive definite; the Cholesky factors are computed
    once and reused across right-hand sides (the matrices depend only
    on the grid, eps and N, not on time).
    """

    def __init__(self, dom: Domain, eps: float, n_modes: int):
        if eps < 0:
            raise PreconditionError(f"eps must be >= 0, got {eps}")
        check_mode_cutoff(n_modes, dom)
        self.dom = dom
        self.eps = float(eps)
        self.n_modes = n_modes
        h = dom.grid.h
        a_int = dom.grid.faces[1:-1]  # interior faces, strictly positive
        n = dom.n_a - 1
        self._factors = []
        for k in range(n_modes + 1):
            ab = np.zeros((2, n))
            ab[0, 1:] = -1.0 / h**2
            ab[1, :] = 2.0 / h**2 + (self.eps * 2.0 * np.pi * k) ** 2 / (2.0 * a_int)
            self._factors.append(cholesky_banded(ab, lower=False))

    def potential_faces(self, w: np.ndarray) -> np.ndarray:
        """Faces of the generalized potential (reduces to A at eps=0)."""
        w = self.dom.check_field(w)
        rhs_spec = np.fft.rfft(_face_average(w), axis=0)  # (nbins, n-1)
        out_spec = np.zeros_like(rhs_spec)
        for k in range(self.n_modes + 1):
            b = np.column_stack([rhs_spec[k].real, rhs_spec[k].imag])
            sol = cho_solve_banded((self._factors[k], False), b)
            out_spec[k] = sol[:, 0] + 1j * sol[:, 1]
        interior = np.fft.irfft(out_spec, n=self.dom.nx, axis=0)
        faces = np.zeros((self.dom.nx, self.dom.n_a + 1))
        faces[:, 1:-1] = interior
        return faces

    def velocities(self, w: np.ndarray) -> VelocityFields:
        return _velocities(self.potential_faces(w), self.dom, self.n_modes)


def eps_biot_savart(
    w: np.ndarray, eps: float, dom: Domain, n_modes: int
) -> tuple[np.ndarray, np.ndarray]:
    vel = EpsStreamSolver(dom, eps, n_modes).velocities(w)
    return vel.u, vel.v
