"""Spectral geometry of Arens-Michael algebras on three concrete model algebras."""

from .algebra import Character, EntireModel, FunctionModel, MatrixModel, Poly
from .seminorms import (
    ScaledOperatorNorm,
    SeminormChart,
    SubsetMax,
    WeightedL1,
    dominates,
    join,
    meet,
    scale_chart,
    subset_chart,
    weight_chart,
)
from .suites import SuiteConfig, SuiteReport, run

__version__ = "0.1.0"

__all__ = [
    "Character",
    "EntireModel",
    "FunctionModel",
    "MatrixModel",
    "Poly",
    "ScaledOperatorNorm",
    "SeminormChart",
    "SubsetMax",
    "WeightedL1",
    "dominates",
    "join",
    "meet",
    "scale_chart",
    "subset_chart",
    "weight_chart",
    "SuiteConfig",
    "SuiteReport",
    "run",
]
