"""Exact computations for the loop super-Virasoro conformal superalgebra.

Polynomials are exact over the rationals (:mod:`loopsv.poly`); the bracket,
its modules, submodules and derivations are built on top of them.
"""

from .core import bracket, check_jacobi, check_skew, verify_axioms
from .derivations import DerivationSpec, ad, check_derivation, extend_from_seed, inner_generator
from .expr import parse_element, parse_poly, print_canonical
from .modules import (
    FamilyTag, ModuleSpec, Pattern, act, check_module_axioms, classify_rank2, make_module,
)
from .poly import Poly
from .submodules import (
    canonicalize, close_under_actions, expected_graded_submodule, irreducibility_probe, reduce,
)

__all__ = [
    "DerivationSpec", "FamilyTag", "ModuleSpec", "Pattern", "Poly", "act", "ad", "bracket",
    "canonicalize", "check_derivation", "check_jacobi", "check_module_axioms", "check_skew",
    "classify_rank2", "close_under_actions", "expected_graded_submodule", "extend_from_seed",
    "inner_generator", "irreducibility_probe", "make_module", "parse_element", "parse_poly",
    "print_canonical", "reduce", "verify_axioms",
]
__version__ = "0.1.0"
