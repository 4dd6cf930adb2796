"""Steady-state transmission of two dipole-dipole coupled atoms in a driven cavity.

Three layers cross-check each other: analytic dressed states
(:mod:`ddicav.dressed`), semiclassical mean field (:mod:`ddicav.lowexc`,
:mod:`ddicav.saturation`, :mod:`ddicav.meanfield`) and the exact quantum
master equation (:mod:`ddicav.oracle`).
"""

__version__ = "0.1.0"

from .errors import (ConfigError, DdicavError, DegenerateNullSpaceError,  # noqa: E402
                     MarginalStabilityError, NonConvergenceError, NumericalError,
                     RootPolishError, SingularParameterError)
from .params import (ComplexDetunings, DdiGeometry, SystemParams,  # noqa: E402
                     complex_detunings, ddi_strength)

__all__ = [
    "ComplexDetunings", "ConfigError", "DdiGeometry", "DdicavError",
    "DegenerateNullSpaceError", "MarginalStabilityError", "NonConvergenceError",
    "NumericalError", "RootPolishError", "SingularParameterError", "SystemParams",
    "complex_detunings", "ddi_strength",
]
