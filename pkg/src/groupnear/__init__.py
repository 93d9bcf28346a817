"""Nearest matrices and critical-point censuses over classical matrix groups.

The distance is always the (real) Frobenius metric.  Closed-form solvers
cover the orthogonal, special orthogonal, and unitary groups; a polynomial
elimination pipeline covers the determinant-one groups; a multistart solver
gives census lower bounds for everything with a Lie algebra, symplectic
included; and lattice-polytope volumes bound critical counts on tori.
"""

from .critsearch import (
    CensusResult,
    CriticalPoint,
    GroupSpec,
    critical_point_from,
    critical_residual,
    lie_basis,
    membership_violation,
    multistart_census,
    random_group_element,
    symplectic_form,
)
from .errors import (
    ConditioningError,
    ConvergenceError,
    DegeneracyError,
    GroupnearError,
    InputError,
    SingularityError,
    UnsupportedError,
)
from .matcore import (
    EigenDecomposition,
    det,
    det_mantissa_exp,
    frobenius_norm,
    herm_eig,
    inverse,
    matrix_from_json,
    matrix_to_json,
    random_general,
    solve,
    sym_eig,
)
from .orthonear import (
    enumerate_orthogonal_critical,
    enumerate_unitary_critical,
    gperp_decompose,
    nearest_orthogonal,
    nearest_special_orthogonal,
    nearest_unitary,
)
from .polyres import (
    UniPoly,
    chain_degree,
    chain_value,
    distinct_root_count,
    kernel_lift,
    poly_roots,
    resultant,
    resultant_chain,
    sylvester,
)
from .slnear import (
    SLSolution,
    nearest_sl,
    sl_critical_points,
    sl_ed_degree,
    smallest_c_check,
)
from .torused import (
    WeightSet,
    bkk_bound,
    bkk_tightness_experiment,
    torus_critical_count_rank1,
    validate_weightset,
    weightset_from_json,
    weightset_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "CensusResult",
    "ConditioningError",
    "ConvergenceError",
    "CriticalPoint",
    "DegeneracyError",
    "EigenDecomposition",
    "GroupSpec",
    "GroupnearError",
    "InputError",
    "SLSolution",
    "SingularityError",
    "UniPoly",
    "UnsupportedError",
    "WeightSet",
    "bkk_bound",
    "bkk_tightness_experiment",
    "chain_degree",
    "chain_value",
    "critical_point_from",
    "critical_residual",
    "det",
    "det_mantissa_exp",
    "distinct_root_count",
    "enumerate_orthogonal_critical",
    "enumerate_unitary_critical",
    "frobenius_norm",
    "gperp_decompose",
    "herm_eig",
    "inverse",
    "kernel_lift",
    "lie_basis",
    "matrix_from_json",
    "matrix_to_json",
    "membership_violation",
    "multistart_census",
    "nearest_orthogonal",
    "nearest_sl",
    "nearest_special_orthogonal",
    "nearest_unitary",
    "poly_roots",
    "random_general",
    "random_group_element",
    "resultant",
    "resultant_chain",
    "sl_critical_points",
    "sl_ed_degree",
    "smallest_c_check",
    "solve",
    "sylvester",
    "sym_eig",
    "symplectic_form",
    "torus_critical_count_rank1",
    "validate_weightset",
    "weightset_from_json",
    "weightset_to_json",
]
