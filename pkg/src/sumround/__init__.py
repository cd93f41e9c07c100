"""Sum-preserving optimal rounding of real vectors to integers."""
from .applications import (
    ApportionmentProblem,
    DecimalVector,
    apportion,
    decimal_round,
    parse_decimal,
)
from .convex import RelaxedSolution, SeparableObjective, marginal_costs, round_separable
from .core import (
    DEFAULT_SNAP_TOLERANCE,
    ComponentDecomposition,
    ErrorReport,
    IntegerAllocation,
    RoundingProblem,
    decompose,
    decompose_values,
    error_report,
    lq_error,
    oric_order,
    oric_round,
    oric_round_ceiling_init,
    relative_error_product,
    relative_error_sum,
    round_to_target,
    shortfall,
    snap_and_validate,
)
from .errors import *  # noqa: F401,F403
from .methods import (
    BiasReport,
    ExactDistribution,
    FractionalOutcome,
    exact_distribution,
    feasible_threshold,
    fractional_round,
    monte_carlo_report,
    randomized_round,
)
from .oracle import (
    OracleResult,
    brute_force_best_relative,
    brute_force_optima,
    brute_force_separable,
    enumerate_feasible,
)

__version__ = "0.1.0"
