"""Two-column boat crossing with dialogue-negotiated right of way.

Two columns of boats steam toward each other through a shared channel.
The first time any pair closes within sensor range they settle precedence:
by a privacy-aware dialogue in the nominal and subjective modes, or by the
full-information referee (at zero privacy cost) in objective mode.  The
loser of a pair yields by treating the winner as a repulsive potential
field; the more privacy the pair spent, the closer the field activates,
so expensive negotiations produce later, sharper evasions.

Mode differences: in subjective mode a loser whose dialogue was cut off by
the budget refuses to yield and sails straight on (the winner keeps only a
short-range collision reflex); objective mode replaces dialogues with the
referee.  All modes share one physical world per trial seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .._util import derive_seed
from ..culture import (
    FeatureDescription,
    OP,
    PR,
    builtin_boat_culture,
    expand,
    sample_boat_agent,
)
from ..dialogue import BUDGET_FORCED, STRATEGIES, run_dispute
from ..errors import InputError, SimulationFault
from ..fairness import objective_outcome
from .physics import PhysicsParams, step_arrays

WEST = "west"
EAST = "east"

NOMINAL = "nominal"
SUBJECTIVE = "subjective"
OBJECTIVE = "objective"
MODES = (NOMINAL, SUBJECTIVE, OBJECTIVE)

_FINITE_CHECK_EVERY = 400  # ticks between non-finite state sweeps


@dataclass(frozen=True)
class WorldConfig:
    arena_length: float = 20000.0  # m, along the crossing axis
    arena_width: float = 2000.0  # m
    n_agents: int = 16
    tick: float = 0.05  # s
    r_max: float = 1000.0  # m, sensor/encounter radius
    r_crit: float = 100.0  # m, collision-reflex radius
    physics: PhysicsParams = PhysicsParams()
    k_repulsion: float = 800.0  # field gain against a unit goal pull
    # fraction of the repulsion redirected to the boat's starboard side;
    # head-on approaches are symmetric, so a purely radial field would
    # just stall both boats until the collision reflex
    starboard_bias: float = 0.7
    goal_weight: float = 1.0
    heading_gain: float = 1.2  # yaw command per radian of heading error
    goal_tolerance: float = 60.0  # m, arrival radius
    max_time: float = 1500.0  # s
    min_start_gap: float = 1005.0  # m, longitudinal gap floor within a column
    extra_start_gap: float = 250.0  # m, uniform jitter on top of the floor
    y_band: float = 200.0  # m, start/goal offset band around the centreline
    distance_floor: float = 5.0  # m, clamp for the 1/d field magnitude

    def __post_init__(self):
        if self.n_agents < 2 or self.n_agents % 2:
            raise InputError("n_agents must be even and at least 2")
        if not 0 < self.r_crit < self.r_max:
            raise InputError("need 0 < r_crit < r_max")


@dataclass(frozen=True)
class BoatAgent:
    agent_id: int
    side: str
    start: tuple
    goal: tuple
    description: FeatureDescription


@dataclass(frozen=True)
class World:
    config: WorldConfig
    agents: tuple
    seed: int


def init_parade(seed: int, config: WorldConfig | None = None) -> World:
    """Lay out the two columns and draw every agent's private description."""
    cfg = config or WorldConfig()
    rng = random.Random(derive_seed(seed, "parade"))
    half = cfg.n_agents // 2
    mid = cfg.arena_width / 2.0
    agents = []

    def column_positions():
        xs = [0.0]
        for _ in range(half - 1):
            xs.append(xs[-1] + cfg.min_start_gap + rng.uniform(0, cfg.extra_start_gap))
        return xs

    west_xs = column_positions()
    east_xs = [cfg.arena_length - x for x in column_positions()]
    for i in range(cfg.n_agents):
        side = WEST if i < half else EAST
        x = west_xs[i] if side == WEST else east_xs[i - half]
        y = mid + rng.uniform(-cfg.y_band, cfg.y_band)
        goal_x = cfg.arena_length if side == WEST else 0.0
        goal_y = mid + rng.uniform(-cfg.y_band, cfg.y_band)
        agents.append(
            BoatAgent(
                agent_id=i,
                side=side,
                start=(x, y),
                goal=(goal_x, goal_y),
                description=sample_boat_agent(derive_seed(seed, "agent", i)),
            )
        )
    return World(config=cfg, agents=tuple(agents), seed=seed)


def activation_radius(z, g, r_max: float = 1000.0, r_crit: float = 100.0) -> float:
    """Distance at which a pair's repulsive field switches on.

    ``z`` is the pair's combined privacy spend, bounded by the combined
    budget 2g: a free agreement activates at the sensor radius, a
    budget-saturating one only at the collision-reflex radius.
    """
    if z < 0:
        raise InputError("spend cannot be negative")
    if z == 0:
        return r_max
    if g is None or g <= 0 or z > 2 * g:
        raise InputError(f"spend {z} outside [0, 2g] for budget {g}")
    return r_max - (z / (2.0 * g)) * (r_max - r_crit)


@dataclass
class Encounter:
    """One pair's settled precedence and its field parameters."""

    first: int
    second: int
    pr_agent: int
    op_agent: int
    winner: int
    loser: int
    termination: str
    z: int
    r_act: float
    t_trigger: float
    yielding: bool
    t_field_on: float | None = None


@dataclass(frozen=True)
class Trajectory:
    """One agent's sampled kinematic history (parallel arrays)."""

    ts: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    headings: np.ndarray
    speeds: np.ndarray

    def __len__(self):
        return len(self.ts)

    @property
    def positions(self) -> np.ndarray:
        return np.column_stack([self.xs, self.ys])


@dataclass(frozen=True)
class Telemetry:
    """Comfort-relevant series aligned with a Trajectory."""

    ts: np.ndarray
    lat_acc: np.ndarray
    yaw_rate: np.ndarray
    lat_jerk: np.ndarray
    arrival_index: int  # first sample at the goal, len(ts) if never arrived


@dataclass(frozen=True)
class BoatTrialResult:
    mode: str
    strategy: str | None
    g: int | None
    trajectories: tuple
    telemetry: tuple
    encounters: tuple


def _orient_pair(agents, i, j):
    """Proponent is the west-side agent; same-side ties go to the lower id."""
    a, b = agents[i], agents[j]
    if a.side != b.side:
        return (i, j) if a.side == WEST else (j, i)
    return (i, j) if i < j else (j, i)


def resolve_encounter(world: World, i: int, j: int, strategy, g, mode: str,
                      xc, t: float) -> Encounter:
    """Settle right of way for a pair that just came into sensor range."""
    cfg = world.config
    pr_agent, op_agent = _orient_pair(world.agents, i, j)
    d_pr = world.agents[pr_agent].description
    d_op = world.agents[op_agent].description
    if mode == OBJECTIVE:
        winner_role = objective_outcome(d_pr, d_op, xc)
        z = 0
        termination = "objective"
    else:
        rng = None
        if strategy == "random":
            rng = random.Random(
                derive_seed(world.seed, "dlg", pr_agent, op_agent, strategy, g)
            )
        res = run_dispute(d_pr, d_op, xc, strategy, g, rng=rng)
        winner_role = res.winner
        z = res.spent[PR] + res.spent[OP]
        termination = res.termination
    winner = pr_agent if winner_role == PR else op_agent
    loser = op_agent if winner_role == PR else pr_agent
    yielding = not (mode == SUBJECTIVE and termination == BUDGET_FORCED)
    return Encounter(
        first=min(i, j),
        second=max(i, j),
        pr_agent=pr_agent,
        op_agent=op_agent,
        winner=winner,
        loser=loser,
        termination=termination,
        z=z,
        r_act=activation_radius(z, g, cfg.r_max, cfg.r_crit),
        t_trigger=t,
        yielding=yielding,
    )


def run_boat_trial(world: World, strategy, g, mode: str) -> BoatTrialResult:
    """Simulate one full crossing and return per-agent histories."""
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}")
    if mode != OBJECTIVE:
        if strategy not in STRATEGIES:
            raise InputError(f"unknown strategy {strategy!r}")
        if g is None or g < 0:
            raise InputError("dialogue modes need a non-negative budget")
    cfg = world.config
    n = cfg.n_agents
    xc = expand(builtin_boat_culture())
    dt = cfg.tick
    max_ticks = int(round(cfg.max_time / dt)) + 1

    xs = np.array([a.start[0] for a in world.agents])
    ys = np.array([a.start[1] for a in world.agents])
    goal_x = np.array([a.goal[0] for a in world.agents])
    goal_y = np.array([a.goal[1] for a in world.agents])
    headings = np.arctan2(goal_y - ys, goal_x - xs)
    speeds = np.zeros(n)
    yaw_rates = np.zeros(n)
    arrived = np.zeros(n, dtype=bool)
    arrival_tick = np.full(n, -1, dtype=int)

    rec = {
        name: np.empty((max_ticks, n))
        for name in ("x", "y", "heading", "speed", "yaw", "lat")
    }

    encounters = {}
    met = np.zeros((n, n), dtype=bool)
    avoid_perm = np.zeros((n, n), dtype=bool)  # [agent, repulsor]
    pending = []  # engaged pairs whose field is not yet active
    # active-field encounters as parallel arrays for the per-tick reflex scan
    act = {"first": [], "second": [], "winner": [], "loser": [], "yielding": []}
    act_arrays = None
    prev_d = None
    eps = 1e-9
    ticks_done = 0

    for tick in range(max_ticks):
        t = tick * dt
        rec["x"][tick] = xs
        rec["y"][tick] = ys
        rec["heading"][tick] = headings
        rec["speed"][tick] = speeds
        rec["yaw"][tick] = yaw_rates
        rec["lat"][tick] = speeds * yaw_rates
        ticks_done = tick + 1
        if arrived.all():
            break

        dx = xs[:, None] - xs[None, :]
        dy = ys[:, None] - ys[None, :]
        d = np.hypot(dx, dy)
        np.fill_diagonal(d, np.inf)
        if arrived.any():
            # moored boats neither trigger encounters nor exert fields
            d[arrived, :] = np.inf
            d[:, arrived] = np.inf

        if prev_d is not None:
            hits = np.argwhere(
                ~met & (prev_d > cfg.r_max) & (d <= cfg.r_max)
            )
            for i, j in hits:
                if i >= j:
                    continue
                i, j = int(i), int(j)
                met[i, j] = met[j, i] = True
                enc = resolve_encounter(world, i, j, strategy, g, mode, xc, t)
                encounters[i, j] = enc
                pending.append(enc)

        if pending:
            still = []
            for enc in pending:
                if d[enc.first, enc.second] <= enc.r_act:
                    enc.t_field_on = t
                    if enc.yielding:
                        avoid_perm[enc.loser, enc.winner] = True
                    act["first"].append(enc.first)
                    act["second"].append(enc.second)
                    act["winner"].append(enc.winner)
                    act["loser"].append(enc.loser)
                    act["yielding"].append(enc.yielding)
                    act_arrays = None
                else:
                    still.append(enc)
            pending = still

        avoid = avoid_perm.copy()
        if act["first"]:
            if act_arrays is None:
                act_arrays = {k: np.array(v) for k, v in act.items()}
            dvals = d[act_arrays["first"], act_arrays["second"]]
            crit = dvals < cfg.r_crit
            if crit.any():
                # collision reflex: the winner diverts too; a non-yielding
                # loser keeps ignoring its opponent outright
                avoid[act_arrays["winner"][crit], act_arrays["loser"][crit]] = True
                both = crit & act_arrays["yielding"]
                avoid[act_arrays["loser"][both], act_arrays["winner"][both]] = True

        gx = goal_x - xs
        gy = goal_y - ys
        gd = np.hypot(gx, gy)
        gd_safe = np.maximum(gd, eps)
        des_x = cfg.goal_weight * gx / gd_safe
        des_y = cfg.goal_weight * gy / gd_safe
        if avoid.any():
            d_clamped = np.maximum(d, cfg.distance_floor)
            mag = cfg.k_repulsion * np.clip(1.0 / d_clamped - 1.0 / cfg.r_max, 0.0, None)
            mag *= avoid
            inv = 1.0 / d_clamped
            ux = dx * inv
            uy = dy * inv
            beta = cfg.starboard_bias
            des_x += (mag * (ux - beta * uy)).sum(axis=1)
            des_y += (mag * (uy + beta * ux)).sum(axis=1)

        target = np.arctan2(des_y, des_x)
        err = np.pi - np.mod(np.pi - (target - headings), 2.0 * np.pi)
        yaw_cmd = np.clip(
            cfg.heading_gain * err,
            -cfg.physics.yaw_rate_max,
            cfg.physics.yaw_rate_max,
        )
        throttle = np.where(arrived, 0.0, 1.0)
        yaw_cmd = np.where(arrived, 0.0, yaw_cmd)

        step_arrays(xs, ys, headings, speeds, yaw_rates, throttle, yaw_cmd,
                    cfg.physics, dt)
        speeds[arrived] = 0.0
        yaw_rates[arrived] = 0.0

        newly = (~arrived) & (np.hypot(goal_x - xs, goal_y - ys) <= cfg.goal_tolerance)
        if newly.any():
            arrived |= newly
            arrival_tick[newly] = tick + 1
            speeds[newly] = 0.0
            yaw_rates[newly] = 0.0
        prev_d = d

        if tick % _FINITE_CHECK_EVERY == 0 and not (
            np.isfinite(xs).all() and np.isfinite(ys).all()
        ):
            raise SimulationFault(
                f"non-finite state at t={t:.2f}s (seed {world.seed}, mode {mode})"
            )

    T = ticks_done
    if not (np.isfinite(rec["x"][:T]).all() and np.isfinite(rec["y"][:T]).all()):
        raise SimulationFault(f"non-finite trajectory (seed {world.seed}, mode {mode})")

    ts = np.arange(T) * dt
    trajectories = []
    telemetry = []
    for i in range(n):
        lat = rec["lat"][:T, i].copy()
        jerk = np.empty_like(lat)
        if T > 1:
            jerk[1:] = np.diff(lat) / dt
            jerk[0] = 0.0
        else:
            jerk[:] = 0.0
        trajectories.append(
            Trajectory(
                ts=ts.copy(),
                xs=rec["x"][:T, i].copy(),
                ys=rec["y"][:T, i].copy(),
                headings=rec["heading"][:T, i].copy(),
                speeds=rec["speed"][:T, i].copy(),
            )
        )
        telemetry.append(
            Telemetry(
                ts=ts.copy(),
                lat_acc=lat,
                yaw_rate=rec["yaw"][:T, i].copy(),
                lat_jerk=jerk,
                arrival_index=int(arrival_tick[i]) if arrival_tick[i] >= 0 else T,
            )
        )
    ordered = tuple(encounters[key] for key in sorted(encounters))
    return BoatTrialResult(
        mode=mode,
        strategy=None if mode == OBJECTIVE else strategy,
        g=None if mode == OBJECTIVE else g,
        trajectories=tuple(trajectories),
        telemetry=tuple(telemetry),
        encounters=ordered,
    )
