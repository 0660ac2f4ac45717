"""Index calculus in Jacobians of C_ab curves over small finite fields.

Library layout:
    fields      exact arithmetic in F_{p^k} and residue field extensions
    poly        univariate polynomial algebra, factorization, resultants
    curve       curve validation, places, point counts, zeta, factor base
    ideals      ideal class group oracle (group law, reduction, BSGS)
    relations   relation collection and the parameter planner
    intlinalg   integer rank, Smith normal form, coordinate solving
    descent     Hafner-McCurley smoothing and special-Q descent logs
    pipeline    group structure driver and precomputation bundle
    bench       empirical smoothness harness
    cli         command line interface
"""

from .curve import (
    CurveModel,
    Divisor,
    FactorBase,
    Place,
    build_factor_base,
    class_number_bounds,
    count_points,
    validate_curve,
    zeta_from_counts,
)
from .descent import DescentSchedule, SearchOptions, discrete_log
from .errors import CabjacError
from .fields import FiniteField
from .ideals import IdealClass, JacobianGroup
from .intlinalg import (
    RelationMatrix,
    group_coordinates,
    integer_rank,
    smith_normal_form,
    solve_cyclic_dlog,
)
from .pipeline import GroupStructure, group_structure
from .poly import Poly
from .relations import (
    FunctionPhi,
    ParameterPlan,
    collect_relations,
    decompose_divisor,
    norm_of_phi,
    plan_parameters,
)

__version__ = "0.1.0"
