"""Point interactions for the one-dimensional Dirac equation.

Scattering amplitudes, bound states, charge densities and phase shifts of
electrons and positrons in delta-like impurities, in closed form for a single
electrostatic or mass-spike impurity and by exact transfer matrices for
arbitrary arrays.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DegenerateBasisError,
    DiracDeltaError,
    DomainError,
    InconsistencyError,
    TransmissionPoleError,
)
from .point_interaction import PointInteraction, Species, matching_matrix, transform  # noqa: E402
from .states import BoundState, DensityProfile, Incidence, ScatteringResult  # noqa: E402
from .transfer_solver import ImpurityArray, find_bound_states, s_matrix  # noqa: E402

__all__ = [
    "__version__",
    "ConfigError",
    "DegenerateBasisError",
    "DiracDeltaError",
    "DomainError",
    "InconsistencyError",
    "TransmissionPoleError",
    "PointInteraction",
    "Species",
    "matching_matrix",
    "transform",
    "BoundState",
    "DensityProfile",
    "Incidence",
    "ScatteringResult",
    "ImpurityArray",
    "find_bound_states",
    "s_matrix",
]
