"""Exception types shared across the package."""


class AxiheeError(Exception):
    """Base class for all package errors."""


class GridError(AxiheeError, ValueError):
    """Invalid grid construction parameters."""


class DimensionError(AxiheeError, ValueError):
    """Array shape does not match the grid it claims to live on."""


class StencilError(AxiheeError, ValueError):
    """Grid too coarse for the requested finite-difference stencil."""


class SpectralConfigError(AxiheeError, ValueError):
    """Invalid x-resolution / mode-count combination."""


class PreconditionError(AxiheeError, ValueError):
    """An operation's mathematical precondition does not hold."""


class SignConditionError(PreconditionError):
    """The monitored slope min(diff_a w) fell below the required floor sigma."""


class CflError(AxiheeError, RuntimeError):
    """Requested time step violates the CFL bound.

    Carries the largest admissible step in ``admissible_dt``.
    """

    def __init__(self, dt: float, admissible_dt: float):
        super().__init__(
            f"dt={dt:.3e} violates the CFL bound; admissible dt <= {admissible_dt:.3e}"
        )
        self.dt = dt
        self.admissible_dt = admissible_dt


class ConfigError(AxiheeError, ValueError):
    """Scenario configuration file is invalid."""
