"""Tropical (max-plus) Nevanlinna theory for continuous piecewise-linear functions."""

from .errors import (
    BreakpointBudgetExceeded,
    InvalidParameters,
    InvalidSpec,
    NotASolution,
    PreconditionViolated,
    TropicalError,
    WindowExceeded,
)
from .pl_core import (
    BreakpointEvent,
    FinitePL,
    TropicalPL,
    breakpoints_in,
    constant,
    eval_at,
    linear,
    negate,
    one_sided_slopes,
    positive_part,
    reflect,
    shift,
    tropical_max,
    tropical_minus,
    tropical_plus,
    tropical_scale,
)
from .nevanlinna import (
    GrowthEstimate,
    NevanlinnaSample,
    characteristic,
    characteristic_value,
    count_poles,
    counting,
    estimate_growth,
    pole_floor,
    proximity,
    root_floor,
    sweep,
    verify_jensen,
    verify_poisson_jensen,
)
from .report import VerificationReport
from .special_functions import (
    PeriodicSpec,
    UltraDiscreteSolution,
    build_periodic,
    casoratian_2x2,
    delta_fixture,
    make_exponential,
    make_pi,
    make_trig_solution,
    solve_first_order,
    solve_second_order,
)
from .diff_poly import DifferenceLaurentPolynomial, eval_poly, poly_product, poly_stats

__version__ = "0.1.0"
