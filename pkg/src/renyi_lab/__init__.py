"""Quantum Renyi divergences, Thompson geometry and symmetry checks on block algebras."""

from .algebra import (
    AlgebraSpec,
    DensityElement,
    Element,
    PositiveElement,
    random_density,
    random_hermitian,
    random_positive,
    trace,
)
from .divergence import (
    DivergenceKind,
    alpha_limit,
    belavkin_staszewski,
    d_value,
    q_value,
    umegaki,
)
from .errors import (
    CrossCheckFailure,
    DomainError,
    InvalidInput,
    NumericalFailure,
    ParameterError,
    RenyiLabError,
)
from .geometry import geometric_mean, point_reflection, thompson_distance
from .report import WitnessReport
from .symmetry import JordanIso, LogAffineMap, StandardFormMap

__all__ = [
    "AlgebraSpec",
    "CrossCheckFailure",
    "DensityElement",
    "DivergenceKind",
    "DomainError",
    "Element",
    "InvalidInput",
    "JordanIso",
    "LogAffineMap",
    "NumericalFailure",
    "ParameterError",
    "PositiveElement",
    "RenyiLabError",
    "StandardFormMap",
    "WitnessReport",
    "alpha_limit",
    "belavkin_staszewski",
    "d_value",
    "geometric_mean",
    "point_reflection",
    "q_value",
    "random_density",
    "random_hermitian",
    "random_positive",
    "thompson_distance",
    "trace",
    "umegaki",
]

__version__ = "0.1.0"
