from .field import QQ, Field, FieldElem, is_prime, to_python
from .graded import (
    GeneratorDegrees,
    TruncatedGradedModule,
    direct_sum,
    free_module,
    minimal_generator_degrees,
    submodule,
)
from .linalg import (
    EchelonBasis,
    SolutionSet,
    express_in_basis,
    nullspace,
    rank,
    row_basis,
    rref,
    select_complement,
    solve_linear,
)
from .poly import GradedPoly, dim_S, monomial_index, monomials


def homog_component(f: GradedPoly, d: int) -> GradedPoly:
    return f.homog_component(d)
