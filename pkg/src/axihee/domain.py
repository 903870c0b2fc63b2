"""Tensor-product domain T x (0, 1/2): periodic x nodes times a radial grid.

Fields are plain float arrays of shape (nx, n_a), x-major. The x grid
is uniform with nodes x_i = i/nx and no duplicated endpoint; x-integrals
are the exact trapezoid rule on the periodic grid, i.e. plain means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SpectralConfigError
from .radial import RadialGrid, make_grid


@dataclass(frozen=True)
class Domain:
    nx: int
    grid: RadialGrid

    def __post_init__(self):
        if self.nx < 8 or self.nx % 2 != 0:
            raise SpectralConfigError(f"nx must be even and >= 8, got {self.nx}")

    @property
    def n_a(self) -> int:
        return self.grid.n_a

    @property
    def x_nodes(self) -> np.ndarray:
        return np.arange(self.nx) / self.nx

    def check_field(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.nx, self.grid.n_a):
            raise DimensionError(
                f"field shape {f.shape} does not match domain ({self.nx}, {self.grid.n_a})"
            )
        return f


def make_domain(nx: int, n_a: int) -> Domain:
    return Domain(nx=nx, grid=make_grid(n_a))


def integrate_xa(f: np.ndarray, dom: Domain) -> float:
    """integral over T x (0,1/2) of f da dx (= f r dr dx)."""
    f = dom.check_field(f)
    return float(f.mean(axis=0) @ dom.grid.weights)


def inner_xa(f: np.ndarray, g: np.ndarray, dom: Domain) -> float:
    """L^2(da dx) inner product."""
    return integrate_xa(np.asarray(f) * np.asarray(g), dom)


def l2_norm(f: np.ndarray, dom: Domain) -> float:
    return float(np.sqrt(max(integrate_xa(np.asarray(f) ** 2, dom), 0.0)))
