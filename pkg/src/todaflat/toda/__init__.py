from .problem import (
    TodaProblem,
    TodaSolution,
    ConstantSolution,
    constant_solution,
    jacobian_apply,
    make_problem,
    real_locus_q2bar,
    residual,
    symmetry_reduce,
)
from .newton import NewtonFailure, newton_solve

__all__ = [
    "TodaProblem",
    "TodaSolution",
    "ConstantSolution",
    "constant_solution",
    "jacobian_apply",
    "make_problem",
    "real_locus_q2bar",
    "residual",
    "symmetry_reduce",
    "NewtonFailure",
    "newton_solve",
]
