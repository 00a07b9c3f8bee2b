"""Two-period price competition between a dominant firm and an entrant whose
platform choice (shared chain, compatible chain, or incompatible chain)
shapes network effects and switching costs.

Closed-form equilibria live in closed_form; oracle and sim provide two
independent numerical routes to the same objects for verification.
"""

from .closed_form import (
    AdoptionDecision,
    AdoptionSensitivity,
    BracketError,
    CornerEquilibriumError,
    EquilibriumOutcome,
    ThresholdReport,
    adoption_decision,
    adoption_sensitivity,
    compatible_equilibrium,
    equilibrium,
    incompatible_equilibrium,
    quality_threshold,
    same_chain_equilibrium,
    subsidy_threshold,
)
from .model import (
    Choice,
    InvalidParamsError,
    ModelParams,
    Scenario,
    UserChoice,
    ValidationReport,
    require_valid,
    user_utility,
    validate_params,
)
from .oracle import (
    OracleResult,
    PriceGrid,
    StageDemand,
    one_stage_nash,
    oracle_equilibrium,
    period2_monopoly_price,
    stage_demand,
    two_stage_nash,
)
from .sim import SimOutcome, SimRun, UserPopulation, simulate_game, simulate_period
from .sweep import SweepRecord, SweepSpec, render_profit_svg, run_sweep, write_sweep_csv
from .verify import QuantityCheck, VerificationReport, draw_params, run_verification

__version__ = "0.1.0"

__all__ = [
    "AdoptionDecision",
    "AdoptionSensitivity",
    "BracketError",
    "Choice",
    "CornerEquilibriumError",
    "EquilibriumOutcome",
    "InvalidParamsError",
    "ModelParams",
    "OracleResult",
    "PriceGrid",
    "QuantityCheck",
    "Scenario",
    "SimOutcome",
    "SimRun",
    "StageDemand",
    "SweepRecord",
    "SweepSpec",
    "ThresholdReport",
    "UserChoice",
    "UserPopulation",
    "ValidationReport",
    "VerificationReport",
    "adoption_decision",
    "adoption_sensitivity",
    "compatible_equilibrium",
    "draw_params",
    "equilibrium",
    "incompatible_equilibrium",
    "one_stage_nash",
    "oracle_equilibrium",
    "period2_monopoly_price",
    "quality_threshold",
    "render_profit_svg",
    "run_sweep",
    "run_verification",
    "same_chain_equilibrium",
    "simulate_game",
    "simulate_period",
    "stage_demand",
    "subsidy_threshold",
    "two_stage_nash",
    "user_utility",
    "validate_params",
    "write_sweep_csv",
    "__version__",
]
