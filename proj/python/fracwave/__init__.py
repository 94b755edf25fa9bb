"""Wave-driven dynamic brittle fracture: DG elastic waves + phase-field cracks."""

from ._fracwave import (
    ConvergenceRow,
    ConvergenceStudy,
    Field,
    PhaseState,
    PilotResult,
    RunConfig,
    Simulation,
    SpallComparison,
    SpallResult,
    SpeedEstimate,
    StepInfo,
    apply_override,
    config_keys,
    convergence_study,
    estimate_front_speed,
    load_config,
    parse_config,
    preset_config,
    preset_names,
    run_pilot,
    serialize_config,
    spall_comparison,
)

__all__ = [
    "ConvergenceRow",
    "ConvergenceStudy",
    "Field",
    "PhaseState",
    "PilotResult",
    "RunConfig",
    "Simulation",
    "SpallComparison",
    "SpallResult",
    "SpeedEstimate",
    "StepInfo",
    "apply_override",
    "config_keys",
    "convergence_study",
    "estimate_front_speed",
    "load_config",
    "parse_config",
    "preset_config",
    "preset_names",
    "run_pilot",
    "serialize_config",
    "spall_comparison",
]
