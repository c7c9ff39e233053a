"""Satisfiability of equality and freshness constraints over
non-permutative nominal abstract syntax."""

from .decider import SolveOptions, SolveResult, decide, extract_witness
from .kernel import (
    AlphaTree,
    Name,
    Permutation,
    Signature,
    alpha_eq,
    canonicalize,
    make_signature,
    perm_apply,
    realize,
)
from .schematic import Eq, Fresh, Problem, satisfies, satisfies_all

__all__ = [
    "AlphaTree",
    "Eq",
    "Fresh",
    "Name",
    "Permutation",
    "Problem",
    "Signature",
    "SolveOptions",
    "SolveResult",
    "alpha_eq",
    "canonicalize",
    "decide",
    "extract_witness",
    "make_signature",
    "perm_apply",
    "realize",
    "satisfies",
    "satisfies_all",
]

__version__ = "0.1.0"
