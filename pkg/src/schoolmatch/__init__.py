"""School choice simulator: immediate acceptance vs. deferred acceptance
under strategic preference misreporting."""

from .geninst import GenConfig, build_instance, dump_instance, load_instance
from .harness import (
    AggregateRow,
    SweepConfig,
    run_sweep,
    run_trial,
    run_trials,
    write_csv,
)
from .mechanisms import boston, boston_with_rounds, deferred_acceptance
from .metrics import MetricsRecord, em_higher, em_selected, em_top3
from .model import (
    Instance,
    Matching,
    PreferenceList,
    Profile,
    SchoolPriority,
    rank_of,
    validate_matching,
)
from .oracle import exhaustive_best_response, find_blocking_pairs, witness_instance
from .strategies import AlterationPlan, Strategy, build_plan

__all__ = [
    "AggregateRow",
    "AlterationPlan",
    "GenConfig",
    "Instance",
    "Matching",
    "MetricsRecord",
    "PreferenceList",
    "Profile",
    "SchoolPriority",
    "Strategy",
    "SweepConfig",
    "boston",
    "boston_with_rounds",
    "build_instance",
    "build_plan",
    "deferred_acceptance",
    "dump_instance",
    "em_higher",
    "em_selected",
    "em_top3",
    "exhaustive_best_response",
    "find_blocking_pairs",
    "load_instance",
    "rank_of",
    "run_sweep",
    "run_trial",
    "run_trials",
    "validate_matching",
    "write_csv",
]
