"""Real Fourier machinery on the periodic horizontal coordinate x in R/Z.

Functions are expanded against the orthonormal basis

    1,  sqrt(2) cos(2 k pi x),  sqrt(2) sin(2 k pi x),   k = 1, 2, ...

and the mode-k pair (a_k, b_k) holds the projections of f onto the two
basis functions. On the uniform grid x_i = i/nx the trapezoid rule is
exact for band-limited data, so the coefficients are computed through
the real FFT. The Nyquist bin k = nx/2 is kept (stored unnormalized as
F_{nx/2}/nx so that nodal Parseval is exact) but every operator here
leaves it at zero for band-limited inputs.

``project_modes`` is the sharp truncation to modes k <= N used by the
Galerkin-regularized velocity law; ``diff_x`` is exact per-mode
differentiation; ``dealiased_product`` multiplies on a 3/2-padded grid
and truncates, which is alias-free in the retained band for any two
grid-representable factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpectralConfigError

_SQRT2 = np.sqrt(2.0)


def _check_nx(f: np.ndarray) -> int:
    nx = f.shape[0]
    if nx % 2 != 0:
        raise SpectralConfigError(f"x resolution must be even, got {nx}")
    return nx


@dataclass(frozen=True)
class SpectralCoeffs:
    """Cosine/sine coefficients per radial node (or for a single row).

    a0 has shape (...) of the trailing axes; ak and bk carry modes
    k = 1..nx/2 along their first axis. bk at the Nyquist mode is
    identically zero.
    """

    nx: int
    a0: np.ndarray
    ak: np.ndarray
    bk: np.ndarray


def to_modes(f: np.ndarray) -> SpectralCoeffs:
    """Expand nodal samples (x along the first axis) in the real basis."""
    f = np.asarray(f, dtype=float)
    nx = _check_nx(f)
    spec = np.fft.rfft(f, axis=0)
    a0 = spec[0].real / nx
    ak = _SQRT2 * spec[1:].real / nx
    bk = -_SQRT2 * spec[1:].imag / nx
    # Nyquist bin: store F/nx directly so nodal Parseval is exact.
    ak[-1] = spec[-1].real / nx
    bk[-1] = 0.0
    return SpectralCoeffs(nx=nx, a0=a0, ak=ak, bk=bk)


def to_nodes(c: SpectralCoeffs) -> np.ndarray:
    """Invert ``to_modes``; exact round trip for arbitrary nodal data."""
    nmodes = c.nx // 2
    spec_shape = (nmodes + 1,) + np.shape(c.a0)
    spec = np.zeros(spec_shape, dtype=complex)
    spec[0] = c.a0 * c.nx
    spec[1:-1] = (np.asarray(c.ak)[:-1] - 1j * np.asarray(c.bk)[:-1]) * (c.nx / _SQRT2)
    spec[-1] = np.asarray(c.ak)[-1] * c.nx
    return np.fft.irfft(spec, n=c.nx, axis=0)


def parseval_residual(f: np.ndarray) -> float:
    """|nodal L^2(dx) energy - coefficient energy| for the transform pair."""
    f = np.asarray(f, dtype=float)
    c = to_modes(f)
    nodal = float(np.mean(f * f, axis=0).sum())
    modal = float(
        np.sum(np.asarray(c.a0) ** 2) + np.sum(c.ak**2) + np.sum(c.bk**2)
    )
    return abs(nodal - modal)


def project_modes(f: np.ndarray, n_modes: int) -> np.ndarray:
    """Sharp Fourier truncation: zero every mode with k > n_modes."""
    if n_modes < 0:
        raise SpectralConfigError(f"mode cutoff must be >= 0, got {n_modes}")
    f = np.asarray(f, dtype=float)
    nx = _check_nx(f)
    if n_modes >= nx // 2:
        return f.copy()
    spec = np.fft.rfft(f, axis=0)
    spec[n_modes + 1 :] = 0.0
    return np.fft.irfft(spec, n=nx, axis=0)


def diff_x(f: np.ndarray, order: int = 1) -> np.ndarray:
    """Spectral d/dx (repeated ``order`` times); Nyquist bin zeroed."""
    f = np.asarray(f, dtype=float)
    nx = _check_nx(f)
    spec = np.fft.rfft(f, axis=0)
    k = np.arange(nx // 2 + 1)
    mult = (2j * np.pi * k) ** order
    mult[-1] = 0.0
    shape = (nx // 2 + 1,) + (1,) * (f.ndim - 1)
    spec *= mult.reshape(shape)
    return np.fft.irfft(spec, n=nx, axis=0)


def dealiased_product(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Pointwise product evaluated alias-free via 3/2 zero padding.

    The factors are transformed, padded to a 3nx/2 grid, multiplied
    there, and truncated back with the Nyquist bin dropped. Exact for
    factors of combined bandwidth <= nx/2; for arbitrary factors the
    retained band is free of aliasing.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise SpectralConfigError("dealiased_product needs matching shapes")
    nx = _check_nx(f)
    m = (3 * nx) // 2
    pad_bins = m // 2 + 1

    def _pad(arr):
        spec = np.fft.rfft(arr, axis=0)
        wide = np.zeros((pad_bins,) + arr.shape[1:], dtype=complex)
        wide[: nx // 2 + 1] = spec
        return np.fft.irfft(wide * (m / nx), n=m, axis=0)

    prod = _pad(f) * _pad(g)
    spec = np.fft.rfft(prod, axis=0)[: nx // 2 + 1] * (nx / m)
    spec[-1] = 0.0
    return np.fft.irfft(spec, n=nx, axis=0)


def mode_energy(f: np.ndarray) -> np.ndarray:
    """Per-mode x-spectral energy a_k^2 + b_k^2 (k = 0..nx/2), summed
    over any trailing axes."""
    c = to_modes(np.asarray(f, dtype=float))
    e0 = np.atleast_1d(np.asarray(c.a0) ** 2).sum()
    tail = (c.ak**2 + c.bk**2).reshape(c.ak.shape[0], -1).sum(axis=1)
    return np.concatenate([[e0], tail])
