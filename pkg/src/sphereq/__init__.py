"""Spherical equations over the metabelian groups Z_p^n x| Z_p^*.

Solvers, reductions from subset sum / SIS / ISIS, the acyclic graph word
problem, spherical hash families and exact or seeded experiments.
"""
from .algebra import (
    GroupElement,
    GroupParams,
    conjugate,
    inverse,
    make_params,
    multiply,
    product_of_conjugates,
    vec_lincomb,
)
from .equations import (
    CiseInstance,
    SolveReport,
    SphericalInstance,
    Status,
    VariableConstraint,
    homogenize,
    solve_auto,
    solve_bruteforce,
    solve_generic,
    solve_nonzero_combination,
    verify,
)

__all__ = [
    "CiseInstance",
    "GroupElement",
    "GroupParams",
    "SolveReport",
    "SphericalInstance",
    "Status",
    "VariableConstraint",
    "conjugate",
    "homogenize",
    "inverse",
    "make_params",
    "multiply",
    "product_of_conjugates",
    "solve_auto",
    "solve_bruteforce",
    "solve_generic",
    "solve_nonzero_combination",
    "vec_lincomb",
    "verify",
]

__version__ = "0.1.0"
