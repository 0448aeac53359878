"""Boat crossing simulation: dialogue-negotiated collision avoidance."""

from .frechet import discrete_frechet
from .harness import (
    BoatExperimentConfig,
    run_boat_experiment,
    write_boat_encounters_csv,
    write_boat_summary_csv,
    write_trajectory_csv,
)
from .metrics import (
    ComfortMetrics,
    TrajectoryLosses,
    comfort_metrics,
    decimate_positions,
    global_trajectory_losses,
)
from .physics import BoatState, PhysicsParams, step_physics
from .world import (
    EAST,
    MODES,
    NOMINAL,
    OBJECTIVE,
    SUBJECTIVE,
    WEST,
    BoatAgent,
    BoatTrialResult,
    Encounter,
    Telemetry,
    Trajectory,
    World,
    WorldConfig,
    activation_radius,
    init_parade,
    resolve_encounter,
    run_boat_trial,
)

__all__ = [
    "BoatAgent",
    "BoatExperimentConfig",
    "BoatState",
    "BoatTrialResult",
    "ComfortMetrics",
    "EAST",
    "Encounter",
    "MODES",
    "NOMINAL",
    "OBJECTIVE",
    "PhysicsParams",
    "SUBJECTIVE",
    "Telemetry",
    "Trajectory",
    "TrajectoryLosses",
    "WEST",
    "World",
    "WorldConfig",
    "activation_radius",
    "comfort_metrics",
    "decimate_positions",
    "discrete_frechet",
    "global_trajectory_losses",
    "init_parade",
    "resolve_encounter",
    "run_boat_experiment",
    "run_boat_trial",
    "step_physics",
    "write_boat_encounters_csv",
    "write_boat_summary_csv",
    "write_trajectory_csv",
]
