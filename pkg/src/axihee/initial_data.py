"""Named initial-data generators.

Every experiment in the package is reproducible from a one-line
descriptor such as ``shear_perturbed(4, 0.1, 1, 1)``. Generators
produce the transported scalar w0 directly, or a horizontal velocity
u0 from which w0 = diff_a(u0) is derived (the blowup family works with
u0 because its hypothesis is stated on the velocity).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .domain import Domain
from .errors import ConfigError
from .radial import diff_a
from .spectral import project_modes


@dataclass(frozen=True)
class InitialData:
    w0: np.ndarray
    u0: np.ndarray | None = None  # only when the generator is velocity-based


def _meshes(dom: Domain):
    return np.meshgrid(dom.x_nodes, dom.grid.nodes, indexing="ij")


def shear(dom: Domain, c: float = 4.0) -> InitialData:
    """Pure shear w0 = c a; an exact steady state."""
    _, A = _meshes(dom)
    return InitialData(w0=c * A)


def shear_perturbed(
    dom: Domain, c: float = 4.0, amp: float = 0.1, kx: int = 1, ka: int = 1
) -> InitialData:
    """w0 = c a + amp sin(2 pi kx x) sin(2 pi ka a); the standard smooth
    well-posedness test case."""
    X, A = _meshes(dom)
    return InitialData(
        w0=c * A + amp * np.sin(2 * np.pi * kx * X) * np.sin(2 * np.pi * ka * A)
    )


def blowup_quadratic(dom: Domain, amp: float = 1.0) -> InitialData:
    """u0 = -amp sin(2 pi x) a^2, the singularity-forming family."""
    X, A = _meshes(dom)
    u0 = -amp * np.sin(2 * np.pi * X) * A**2
    return InitialData(w0=diff_a(u0, dom.grid), u0=u0)


def parabolic_shear(dom: Domain, c: float = 1.0) -> InitialData:
    """u0 = c a^2, x-independent; steady control for the blowup lab."""
    _, A = _meshes(dom)
    u0 = c * A**2
    return InitialData(w0=diff_a(u0, dom.grid), u0=u0)


def spectral_shear(
    dom: Domain, c: float = 4.0, amp: float = 0.15, decay: float = 3.0,
    k_max: int = 40,
) -> InitialData:
    """Shear plus a broadband perturbation with algebraic mode decay
    k^-decay; borderline-regular data that makes the velocity-cutoff
    convergence study observable."""
    X, A = _meshes(dom)
    w = c * A
    for k in range(1, min(int(k_max), dom.nx // 2 - 1) + 1):
        w = w + amp * k ** -float(decay) * (
            np.cos(2 * np.pi * k * X) + np.sin(2 * np.pi * k * X)
        ) * np.sin(2 * np.pi * A)
    return InitialData(w0=w)


def random_band_limited(
    dom: Domain, seed: int = 0, kx_max: int = 4, ka_max: int = 3,
    amp: float = 0.3, slope: float = 4.0,
) -> InitialData:
    """Sheared profile plus a seeded random band-limited perturbation."""
    rng = np.random.default_rng(seed)
    X, A = _meshes(dom)
    w = slope * A
    for kx in range(1, kx_max + 1):
        for ka in range(1, ka_max + 1):
            cx, sx = rng.standard_normal(2) * amp / (kx_max * ka_max)
            phase = cx * np.cos(2 * np.pi * kx * X) + sx * np.sin(2 * np.pi * kx * X)
            w = w + phase * np.sin(2 * np.pi * ka * A)
    return InitialData(w0=project_modes(w, max(kx_max, 1)))


_GENERATORS = {
    "shear": shear,
    "shear_perturbed": shear_perturbed,
    "spectral_shear": spectral_shear,
    "blowup_quadratic": blowup_quadratic,
    "parabolic_shear": parabolic_shear,
    "random_band_limited": random_band_limited,
}

_DESCRIPTOR_RE = re.compile(r"^\s*([a-zA-Z_][a-zA-Z0-9_]*)\s*(?:\((.*)\))?\s*$")


def make_initial(descriptor: str, dom: Domain) -> InitialData:
    """Build initial data from a descriptor ``name(arg, ...)`` or a
    snapshot path ``snapshot:<file>``."""
    if descriptor.startswith("snapshot:"):
        from .io import read_snapshot

        w0, meta = read_snapshot(descriptor[len("snapshot:") :])
        if meta["nx"] != dom.nx or meta["na"] != dom.n_a:
            raise ConfigError(
                f"snapshot grid ({meta['nx']}, {meta['na']}) does not match "
                f"configured grid ({dom.nx}, {dom.n_a})"
            )
        return InitialData(w0=w0)
    m = _DESCRIPTOR_RE.match(descriptor)
    if not m:
        raise ConfigError(f"malformed initial-data descriptor: {descriptor!r}")
    name, argstr = m.group(1), m.group(2)
    if name not in _GENERATORS:
        raise ConfigError(
            f"unknown initial-data generator {name!r}; "
            f"known: {sorted(_GENERATORS)}"
        )
    args = []
    if argstr and argstr.strip():
        for tok in argstr.split(","):
            tok = tok.strip()
            try:
                args.append(int(tok))
            except ValueError:
                try:
                    args.append(float(tok))
                except ValueError as exc:
                    raise ConfigError(
                        f"bad argument {tok!r} in descriptor {descriptor!r}"
                    ) from exc
    try:
        return _GENERATORS[name](dom, *args)
    except TypeError as exc:
        raise ConfigError(f"bad arguments for generator {name!r}: {exc}") from exc
