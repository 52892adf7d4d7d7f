"""modlab: a numerical laboratory for the p-modulus of curve families,
vector-valued L^p and Sobolev norms, the Sobolev-Reshetnyak comparison, and
the Radon-Nikodym dichotomy witness."""

from .errors import (
    CapacityError,
    DegenerateCurveError,
    DomainError,
    ModlabError,
    ScheduleError,
)
from .geometry import (
    CurveFamily,
    Grid,
    Polyline,
    ScalarField,
    arclength_parametrize,
    cell_lengths,
    curve_integral,
    length,
    load_family,
    load_polyline_csv,
    restrict,
    save_family,
    save_polyline_csv,
)
from .modulus import (
    ModulusProblem,
    ModulusResult,
    analytic_parallel_segments,
    assemble_problem,
    chebyshev_modulus_bound,
    fuglede_schedule,
    solve_modulus,
)
from .report import CheckRecord, Report, Series, write_report
from .reshetnyak import (
    UpperBoundField,
    ac_bound_check,
    norm_equivalence_check,
    r_norm,
    sampled_upper_gradient,
    upper_gradient_star,
)
from .rnp_lab import (
    SinFamilyField,
    dichotomy_report,
    difference_quotient,
    lipschitz_certificate,
    noncauchy_gap,
    sin_family,
)
from .sobolev import (
    GradientField,
    TestFunction,
    finite_diff_gradient,
    ftc_along_curve_check,
    gradient_length,
    w_norm,
    weak_derivative_check,
)
from .vectorvalues import (
    DualFunctional,
    NormTag,
    VectorField,
    bochner_integral,
    dual_ball_extreme_points,
    lp_norm,
    sampled_dual_functionals,
    scalar_lp_norm,
    scalarize,
    value_norm,
)

__version__ = "0.1.0"
