"""Exact Pareto-set computation for multiobjective integer linear programs.

The solver works over the standard form

    min  (c1 x, ..., ck x)
    s.t. A x = b,  x in Z^n, x >= 0

with all data integral, and computes the *entire* set of Pareto-optimal
solutions by building a partial Groebner basis of the toric ideal of A
under the partial order induced by the objective matrix, then partially
reducing a feasible point by its maximal chains.

Everything is exact: arbitrary-precision integers throughout, rational
arithmetic inside LLL.
"""

from moip.model import MoipInstance, ValidationReport, objective_image, validate_instance
from moip.orders import OrderVariant, PartialOrderSpec, Verdict, compare, maximal_chains, setlm, triplet_set
from moip.lattice import Binomial, TermOrder, buchberger_total, kernel_basis, lll_reduce, set_of_generators
from moip.engine import (
    DirectedPair,
    PGroebnerBasis,
    check_criterion,
    pbuchberger,
    prem,
    preduce,
    reduce_basis,
    svectors,
)
from moip.solver import (
    Infeasible,
    LimitExceeded,
    ParetoSet,
    UnboundedRegion,
    fiber_skeleton,
    initial_feasible,
    oracle_pareto,
    solve,
    solve_conti_traverso,
    solve_corank1,
)

__all__ = [
    "Binomial",
    "DirectedPair",
    "Infeasible",
    "LimitExceeded",
    "MoipInstance",
    "OrderVariant",
    "ParetoSet",
    "PartialOrderSpec",
    "PGroebnerBasis",
    "TermOrder",
    "ValidationReport",
    "Verdict",
    "buchberger_total",
    "check_criterion",
    "compare",
    "fiber_skeleton",
    "initial_feasible",
    "kernel_basis",
    "lll_reduce",
    "maximal_chains",
    "objective_image",
    "oracle_pareto",
    "pbuchberger",
    "prem",
    "preduce",
    "reduce_basis",
    "set_of_generators",
    "setlm",
    "solve",
    "solve_conti_traverso",
    "solve_corank1",
    "svectors",
    "triplet_set",
    "validate_instance",
]

__version__ = "0.1.0"
