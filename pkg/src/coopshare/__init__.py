"""Cooperative uplink transmission: energy costs, incentives, cell simulation."""

from .cell_sim import (
    Outcome,
    Scheme,
    SimConfig,
    SimMetrics,
    SlotEvent,
    metrics_summary,
    run_simulation,
)
from .channel import (
    ChannelParams,
    LinkGain,
    energy_for_rate,
    from_decibels,
    path_gain,
    rate_for_energy,
)
from .economics import (
    CostBreakdown,
    EconParams,
    Mode,
    PaymentWindow,
    breakdown_for_split,
    helper_utility,
    payment_window,
    unit_energy_cost,
)
from .full_coop import (
    BenchmarkOutcome,
    Endpoint,
    SplitDecision,
    benchmark_decision,
    choose_mode_complete,
    optimal_relay_rate,
    pair_cost,
    select_relay,
)
from .partial_coop import (
    AlgorithmConfig,
    InfeasibleWindow,
    PriceSearchResult,
    PricingDecision,
    UncertaintyModel,
    acceptance_probability,
    association_probability,
    choose_mode_incomplete,
    dichotomous_min,
    expected_cost,
    optimize_joint,
    optimize_price,
    surplus_ratio,
)
from .scenario import Scenario, load_scenario, parse_scenario, scenario_text
from .stochastic import (
    CellGeometry,
    MtState,
    RngSeed,
    Role,
    Stream,
    helper_count_mean,
    sample_cell,
    sample_poisson,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig",
    "BenchmarkOutcome",
    "CellGeometry",
    "ChannelParams",
    "CostBreakdown",
    "EconParams",
    "Endpoint",
    "InfeasibleWindow",
    "LinkGain",
    "Mode",
    "MtState",
    "Outcome",
    "PaymentWindow",
    "PriceSearchResult",
    "PricingDecision",
    "RngSeed",
    "Role",
    "Scenario",
    "Scheme",
    "SimConfig",
    "SimMetrics",
    "SlotEvent",
    "SplitDecision",
    "Stream",
    "UncertaintyModel",
    "acceptance_probability",
    "association_probability",
    "benchmark_decision",
    "breakdown_for_split",
    "choose_mode_complete",
    "choose_mode_incomplete",
    "dichotomous_min",
    "energy_for_rate",
    "expected_cost",
    "from_decibels",
    "helper_count_mean",
    "helper_utility",
    "load_scenario",
    "metrics_summary",
    "optimal_relay_rate",
    "optimize_joint",
    "optimize_price",
    "pair_cost",
    "parse_scenario",
    "path_gain",
    "payment_window",
    "rate_for_energy",
    "run_simulation",
    "sample_cell",
    "sample_poisson",
    "scenario_text",
    "select_relay",
    "surplus_ratio",
    "unit_energy_cost",
    "__version__",
]
