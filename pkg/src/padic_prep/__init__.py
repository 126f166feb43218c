"""Truncated l-adic power series near the origin of Z_l^n.

Weierstrass division and preparation, the diagonal Frobenius action and the
normalization of its eigen-generators, linearization of prime Frobenius-stable
ideals, characters of Z_l^n, and Koszul/Tor computations over exact fields.
"""

from .coeff import CoefficientContext, PadicScalar, scalar_exp, scalar_log
from .errors import PadicPrepError
from .series import MultiSeries, change_coords, series_invert, substitute
from .weierstrass import weierstrass_divide, weierstrass_prepare
from .frobenius import FrobeniusAction, apply_phi, homogenize_eigen, trivialize_unit
from .ideal import IdealPresentation
from .linearize import EvaluationMap, linearize_phi_ideal, verify_evaluation
from .characters import Character, char_from_line, eval_ideal_at_char, frobenius_on_char

__version__ = "0.1.0"

__all__ = [
    "Character",
    "CoefficientContext",
    "EvaluationMap",
    "FrobeniusAction",
    "IdealPresentation",
    "MultiSeries",
    "PadicPrepError",
    "PadicScalar",
    "apply_phi",
    "change_coords",
    "char_from_line",
    "eval_ideal_at_char",
    "frobenius_on_char",
    "homogenize_eigen",
    "linearize_phi_ideal",
    "scalar_exp",
    "scalar_log",
    "series_invert",
    "substitute",
    "trivialize_unit",
    "verify_evaluation",
    "weierstrass_divide",
    "weierstrass_prepare",
]
