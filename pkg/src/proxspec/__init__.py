"""Spectral toolkit for onset-of-superconductivity fields at a metal interface.

Layering, bottom up: `eigen1d` (generic 1D weighted-form eigensolver),
`halfline` (Robin harmonic family, universal constants), `interface`
(transmission family across the material jump), `refined` (curvature-
perturbed model), `fields` (critical spectral parameter and onset-field
formulas), `geometry` (boundary curvature), `cli` (command-line front end).
"""

__version__ = "0.1.0"

# Bumped whenever a numerical kernel changes in a way that can shift results;
# cache entries are keyed on it.
SOLVER_VERSION = "1"

from .halfline import (  # noqa: E402,F401
    RobinParams,
    UniversalConstants,
    eta0,
    ell_of,
    theta_of,
    universal_constants,
)
from .interface import (  # noqa: E402,F401
    TransmissionParams,
    minimize_over_xi,
    mu1,
)
from .fields import (  # noqa: E402,F401
    alpha_of,
    hc3_degennes,
    hc3_leading,
    hc3_two_term,
)
from .geometry import ClosedCurve, curvature_profile  # noqa: E402,F401
from .refined import RefinedParams, expansion_check, mu1_refined  # noqa: E402,F401
