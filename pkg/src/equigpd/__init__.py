"""Finite groupoids with involution and their projective model structure.

Decision procedures, constructions and the two counterexamples (function
extensionality and univalence) computed on explicit finite tables.
"""
from .budget import Budget, BudgetExceeded, current_budget, use_budget
from .core import (
    EquivariantFunctor,
    FiniteGroupoid,
    Functor,
    InvolutiveGroupoid,
    validate,
    validate_functor,
)
from .homotopy import is_rhe, rhe_witness
from .modelstructure import is_acyclic_cofibration, is_fibration, path_object
from .ttfc import dependent_product, pullback
from .universe import classify, funext_demo, realize_subuniverse, univalence_check

__version__ = "0.1.0"

__all__ = [
    "Budget", "BudgetExceeded", "current_budget", "use_budget",
    "EquivariantFunctor", "FiniteGroupoid", "Functor", "InvolutiveGroupoid",
    "validate", "validate_functor", "is_rhe", "rhe_witness",
    "is_acyclic_cofibration", "is_fibration", "path_object",
    "dependent_product", "pullback",
    "classify", "funext_demo", "realize_subuniverse", "univalence_check",
]
