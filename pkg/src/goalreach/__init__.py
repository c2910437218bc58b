"""Maximum-probability purchasing of deferred term insurance and pure
endowments, with closed-form value functions, optimal strategies, and an
independent Monte Carlo / residual verification harness."""

from .actuarial import (
    INFINITE,
    CoverageWindow,
    ForceParams,
    Premium,
    annuity_deferred_endowment,
    annuity_endowment,
    apv_deferred_term,
    apv_pure_endowment,
    premium_rate_pure_endow,
    premium_rate_term,
    premium_single_pure_endow,
    premium_single_term,
)
from .det_endow import (
    EndowScenario,
    EndowThresholds,
    action_continuous_endow,
    action_single_endow,
    solve_w0_endow,
    thresholds_continuous_endow,
    thresholds_single_endow,
    value_continuous_endow,
    value_single_endow,
)
from .det_life import (
    DetLifeScenario,
    LifeThresholds,
    PurchaseAction,
    action_continuous,
    action_single,
    solve_w0_life,
    thresholds_continuous,
    thresholds_single,
    value_continuous,
    value_single,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateAnnuityError,
    GoalreachError,
    InfeasibleScenarioError,
    SchemaError,
)
from .mc import (
    ComparisonRecord,
    MCEstimate,
    SimConfig,
    compare_report,
    simulate_det_continuous,
    simulate_det_single,
    simulate_stoch,
)
from .numerics import (
    PiecewiseValue,
    ResidualReport,
    RootResult,
    Segment,
    bisect,
    continuity_check,
    investment_foc,
    residual_det,
    residual_hjb,
)
from .stoch import (
    StochAction,
    StochScenario,
    StochSolution,
    action_stoch,
    breakpoints,
    coefficients,
    criticals,
    exponents,
    foc_check,
    solve,
    value_stoch,
)

__version__ = "0.1.0"
