"""Multi-robot coordinated view planning toolkit."""

from ._core import (
    PlanResult,
    Scenario,
    detect_first_conflict,
    generate_bottleneck,
    generate_clutter,
    generate_corridor,
    load_scenario,
    objective,
    plan,
    save_scenario,
    scenario_from_json,
    validate,
)

__all__ = [
    "PlanResult",
    "Scenario",
    "detect_first_conflict",
    "generate_bottleneck",
    "generate_clutter",
    "generate_corridor",
    "load_scenario",
    "objective",
    "plan",
    "save_scenario",
    "scenario_from_json",
    "validate",
]

__version__ = "0.1.0"
