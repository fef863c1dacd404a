"""Linearized wave-kinetic collision operator on a logarithmic grid.

Modules
-------
specfun      digamma and the symbol rho0 with an independent quadrature route
spectral     log grid, FFT conventions, multipliers, frozen semigroup, Duhamel
kinetic_ops  direct singular-kernel quadrature of the collision operators
norms        weighted sup, Mellin/Sobolev, Gagliardo and N_{R,sigma} norms
evolve       time stepping, smoothing sweep, scaling and appendix checks
cli          the ``wavekin`` command
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    ContractError,
    DomainError,
    NumericalAbort,
    QuadratureError,
    UnsupportedOrderError,
    WavekinError,
)
from .specfun import digamma, rho0, rho0_via_integral  # noqa: E402
from .spectral import Field, RadialFunction, UniformLogGrid, forward, inverse  # noqa: E402
from .forcing import ForcingSpec  # noqa: E402
from .norms import WeightSpec, Window  # noqa: E402
from .evolve import ExperimentConfig, evolve  # noqa: E402

__all__ = [
    "__version__",
    "WavekinError",
    "ConfigError",
    "ContractError",
    "DomainError",
    "UnsupportedOrderError",
    "NumericalAbort",
    "QuadratureError",
    "digamma",
    "rho0",
    "rho0_via_integral",
    "UniformLogGrid",
    "Field",
    "RadialFunction",
    "forward",
    "inverse",
    "ForcingSpec",
    "WeightSpec",
    "Window",
    "ExperimentConfig",
    "evolve",
]
