"""Adaptive haptic shared-control simulation suite."""

from _hscsim import (  # noqa: F401
    __version__,
    compare,
    discretize,
    intent_torque,
    list_scenarios,
    lstsq,
    pointwise_target,
    run,
    run_csv,
    scenario_json,
    stage_cost,
)

__all__ = [
    "__version__",
    "compare",
    "discretize",
    "intent_torque",
    "list_scenarios",
    "lstsq",
    "pointwise_target",
    "run",
    "run_csv",
    "scenario_json",
    "stage_cost",
]
