"""Second Hankel determinant bounds for the bi-univalent class defined by
subordination to the second-kind Chebyshev generating function, plus the
numeric machinery used to audit them."""

from .errors import DomainError
from .chebyshev import g_coefficients, t_poly, u_poly
from .power_series import (
    TruncatedSeries,
    caratheodory_from_schwarz,
    compose,
    multiply,
    revert,
    schwarz_from_caratheodory,
)
from .caratheodory import RelaxationPoint, p2_from, p3_from, q_side, sample
from .class_coefficients import (
    ClassParams,
    CoefficientTriple,
    a3_closed,
    a4_closed,
    a4_printed,
    fekete_szego_classical_bound,
    fekete_szego_functional,
    hankel2,
    hankel2_expansion,
    q_side_solve,
    solve_p_side,
)
from .hankel_bounds import (
    BoundBreakdown,
    FCoefficients,
    QuarticProfile,
    c_printed,
    classify_case,
    corollary_bound,
    delta_printed,
    f_coefficients,
    f_value,
    h_value,
    hessian_discriminant,
    quartic_profile,
    theorem_bound,
)
from .verification import (
    AuditReport,
    cross_check,
    empirical_functional_max,
    maximize_f_on_square,
    maximize_h_on_tau,
    region_map,
)

__version__ = "0.1.0"
