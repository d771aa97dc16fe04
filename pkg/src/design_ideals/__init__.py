"""Vanishing ideals of combinatorial designs: constructions, generator families and gamma_1/gamma_2."""

from .designs import Design, DesignError, DesignParams, strength
from .gamma import ZeroSetReport, gamma1, gamma2_lower_linearization, gamma2_upper, zero_set_check
from .poly import GeneratorSet, MultilinearPoly

__version__ = "0.1.0"

__all__ = [
    "Design", "DesignError", "DesignParams", "GeneratorSet", "MultilinearPoly", "ZeroSetReport",
    "gamma1", "gamma2_lower_linearization", "gamma2_upper", "strength", "zero_set_check",
]
