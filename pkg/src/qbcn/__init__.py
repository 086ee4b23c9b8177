"""High-precision q-series, BC_n interpolation functions and Jackson integral checks."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateZError,
    DivergentSeriesError,
    DomainError,
    NonGenericError,
    PoleError,
    QBCNError,
    UnconvergedError,
    ZeroArgumentError,
)
from .qnum import PrecisionContext, e_factorial, e_symbol, qpoch_inf, qpoch_int, theta
from .indexsets import ParameterSet, enumerate_indices
from .interp import InterpolationBasis, e_interp
from .bcjackson import LatticeTruncation, regularized_integral

__all__ = [
    "__version__",
    "QBCNError",
    "ZeroArgumentError",
    "PoleError",
    "DomainError",
    "DivergentSeriesError",
    "NonGenericError",
    "DegenerateZError",
    "UnconvergedError",
    "ConfigError",
    "PrecisionContext",
    "qpoch_inf",
    "qpoch_int",
    "theta",
    "e_symbol",
    "e_factorial",
    "ParameterSet",
    "enumerate_indices",
    "InterpolationBasis",
    "e_interp",
    "LatticeTruncation",
    "regularized_integral",
]
