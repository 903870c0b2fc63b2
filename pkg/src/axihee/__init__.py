"""axihee: a numerical laboratory for axisymmetric hydrostatic Euler flow.

The package integrates the vorticity form of the axisymmetric
hydrostatic Euler equations (and its epsilon-rescaled parent system) in
a periodic narrow tube, working throughout in the cross-sectional area
coordinate a = r^2/2 where the radial operator (1/r) d/dr flattens to
d/da and the measure r dr to da.
"""

from .domain import Domain, make_domain
from .radial import RadialGrid, make_grid

__all__ = ["Domain", "make_domain", "RadialGrid", "make_grid"]
__version__ = "0.1.0"
