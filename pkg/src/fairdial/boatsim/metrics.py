"""Trajectory comparison and ride-comfort measures.

Trajectory distortion compares the same agent's path across simulation
modes with the discrete Fréchet distance on decimated position traces:
against the objective world (how far negotiation bent the path from the
referee's world) and against the subjective world (what refusing to yield
would have changed).  Comfort reduces to areas under absolute lateral
acceleration, yaw rate and lateral jerk, trimmed so the standing-start
acceleration phase and the post-arrival freeze do not pollute the score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .frechet import discrete_frechet
from .world import BoatTrialResult, Telemetry, Trajectory

DEFAULT_STRIDE = 20  # ticks between Fréchet samples: 1 s at the 20 Hz tick


@dataclass(frozen=True)
class ComfortMetrics:
    lat_acc_auc: float
    yaw_rate_auc: float
    lat_jerk_auc: float


def comfort_metrics(telemetry: Telemetry, trajectory: Trajectory,
                    top_speed: float = 30.0,
                    trim_fraction: float = 0.95) -> ComfortMetrics:
    """Absolute-value AUCs of the comfort series over the cruise window.

    The window opens once the boat first reaches ``trim_fraction`` of top
    speed and closes at arrival, so launch acceleration and terminal
    braking stay out of the integral.
    """
    if len(telemetry.ts) != len(trajectory.ts):
        raise InputError("telemetry and trajectory must be aligned")
    cruising = np.nonzero(trajectory.speeds >= trim_fraction * top_speed)[0]
    start = int(cruising[0]) if len(cruising) else len(trajectory.ts)
    end = min(telemetry.arrival_index, len(telemetry.ts))
    if end - start < 2:
        return ComfortMetrics(0.0, 0.0, 0.0)
    ts = telemetry.ts[start:end]
    return ComfortMetrics(
        lat_acc_auc=float(np.trapezoid(np.abs(telemetry.lat_acc[start:end]), ts)),
        yaw_rate_auc=float(np.trapezoid(np.abs(telemetry.yaw_rate[start:end]), ts)),
        lat_jerk_auc=float(np.trapezoid(np.abs(telemetry.lat_jerk[start:end]), ts)),
    )


def decimate_positions(trajectory: Trajectory, stride: int = DEFAULT_STRIDE):
    """Position samples every ``stride`` ticks, always keeping the endpoint."""
    if stride < 1:
        raise InputError("stride must be positive")
    pos = trajectory.positions
    idx = np.arange(0, len(pos), stride)
    if idx[-1] != len(pos) - 1:
        idx = np.append(idx, len(pos) - 1)
    return pos[idx]


@dataclass(frozen=True)
class TrajectoryLosses:
    """Per-agent and mean Fréchet distortions across the three modes."""

    omega: tuple  # nominal vs objective
    omega_p: tuple  # nominal vs subjective
    gap: tuple  # subjective vs objective (or nominal vs subjective, literal)

    @property
    def mean_omega(self) -> float:
        return float(np.mean(self.omega))

    @property
    def mean_omega_p(self) -> float:
        return float(np.mean(self.omega_p))

    @property
    def mean_gap(self) -> float:
        return float(np.mean(self.gap))


def global_trajectory_losses(nominal: BoatTrialResult,
                             subjective: BoatTrialResult,
                             objective: BoatTrialResult,
                             stride: int = DEFAULT_STRIDE,
                             literal_gap: bool = False) -> TrajectoryLosses:
    """Fréchet distortion per agent across the three worlds of one trial.

    ``literal_gap`` switches the subjectivity gap to the nominal-versus-
    subjective comparison instead of the default subjective-versus-
    objective reading.
    """
    n = len(nominal.trajectories)
    if not (len(subjective.trajectories) == len(objective.trajectories) == n):
        raise InputError("trials must cover the same agents")
    omega = []
    omega_p = []
    gap = []
    for i in range(n):
        j_n = decimate_positions(nominal.trajectories[i], stride)
        j_s = decimate_positions(subjective.trajectories[i], stride)
        j_o = decimate_positions(objective.trajectories[i], stride)
        omega.append(discrete_frechet(j_n, j_o))
        omega_p.append(discrete_frechet(j_n, j_s))
        gap.append(
            discrete_frechet(j_n, j_s) if literal_gap else discrete_frechet(j_s, j_o)
        )
    return TrajectoryLosses(omega=tuple(omega), omega_p=tuple(omega_p),
                            gap=tuple(gap))
