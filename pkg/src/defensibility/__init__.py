"""Defensibility of systems of discrete valuable assets.

Residual value and defensibility under optimizing, mismatched-valuation and
stochastic attacks, an exhaustive-search defense oracle, executable checks of
the analytical results, and cross-system comparison for budget allocation.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .assets import (
    Asset,
    AssetSystem,
    DuplicateIdError,
    EmptySystemError,
    InvalidValueError,
    PartialAttackerValuesError,
    ValidationError,
    build_system,
    skewness,
    value_at_rank,
)
from .datasets import load_builtin
from .defense import (
    DefenseAllocation,
    DefenseError,
    OracleCapExceeded,
    optimal_defense_bruteforce,
    predictive_defense,
    reflexive_defense,
)
from .evaluation import (
    ComparisonReport,
    EvaluationGrid,
    ModelViolation,
    SystemScenario,
    average_defensibility,
    compare_systems,
    defensibility,
    evaluation_grid,
    residual_value,
)
from .dataio import Scenario, load_dataset, load_scenarios
from .properties import (
    PropositionCheckResult,
    PropositionId,
    check_geometric_threshold,
    check_proposition,
    geometric_threshold_p9,
    geometric_threshold_p10,
    randomized_property_suite,
)
from .threats import (
    AttackOutcome,
    ThreatError,
    ThreatKind,
    ThreatModel,
    attack_outcome,
    optimal_attack,
    survival,
    uniform_random_probabilities,
)
