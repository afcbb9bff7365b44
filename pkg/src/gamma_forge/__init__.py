"""Exact divided power algebras of free modules and polynomial laws."""
from .errors import GammaForgeError
from .scalars import QQ, ZZ, IntegersMod, Poly, Scalar, parse_ring
from .multiindex import BasisLabels, MultiIndex, dp_coeff_multi
from .gamma import (
    FreeModuleSpec,
    GammaElement,
    ModuleVector,
    dp_generator,
    g_mul,
    gamma_n,
    map_linear,
    quotient_by_basis_span,
)
from .dpaxioms import DpStructure, check_axioms, gamma_augmentation, gamma_oracle, rational_canonical
from .polylaw import PolyLaw, coeff_of, divided_differential, eval_at, factor_homogeneous
from .basechange import Extension, TensorElement, parse_extension, theta_forward, theta_inverse

__all__ = [
    "GammaForgeError",
    "QQ",
    "ZZ",
    "IntegersMod",
    "Poly",
    "Scalar",
    "parse_ring",
    "BasisLabels",
    "MultiIndex",
    "dp_coeff_multi",
    "FreeModuleSpec",
    "GammaElement",
    "ModuleVector",
    "dp_generator",
    "g_mul",
    "gamma_n",
    "map_linear",
    "quotient_by_basis_span",
    "DpStructure",
    "check_axioms",
    "gamma_augmentation",
    "gamma_oracle",
    "rational_canonical",
    "PolyLaw",
    "coeff_of",
    "divided_differential",
    "eval_at",
    "factor_homogeneous",
    "Extension",
    "TensorElement",
    "parse_extension",
    "theta_forward",
    "theta_inverse",
]
