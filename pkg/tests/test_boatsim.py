"""Boat dynamics, parade setup, encounters and the trial harness."""

import math

import numpy as np
import pytest

from fairdial.boatsim.harness import (
    BoatExperimentConfig,
    modes_for,
    run_boat_experiment,
    write_boat_encounters_csv,
    write_boat_summary_csv,
    write_trajectory_csv,
)
from fairdial.boatsim.metrics import (
    comfort_metrics,
    decimate_positions,
    global_trajectory_losses,
)
from fairdial.boatsim.physics import (
    BoatState,
    PhysicsParams,
    step_arrays,
    step_physics,
    wrap_angle,
)
from fairdial.boatsim.world import (
    BoatAgent,
    BoatTrialResult,
    Telemetry,
    Trajectory,
    World,
    WorldConfig,
    _orient_pair,
    activation_radius,
    init_parade,
    run_boat_trial,
)
from fairdial.culture import FeatureDescription, sample_boat_agent
from fairdial.errors import InputError

TINY_WORLD = WorldConfig(arena_length=3000.0, n_agents=2, max_time=300.0)


# ------------------------------------------------------------------ physics

def test_step_physics_frozen_numbers():
    params = PhysicsParams()
    assert params.thrust_max == pytest.approx(15000.0)
    state = BoatState(x=0.0, y=0.0, heading=0.0, speed=10.0, yaw_rate=0.0, t=0.0)
    nxt = step_physics(state, (1.0, 0.2), params, 0.05)
    assert nxt.x == pytest.approx(0.5066662708333849, rel=1e-12)
    assert nxt.y == pytest.approx(0.0006333331684028896, rel=1e-12)
    assert nxt.heading == pytest.approx(0.00125, rel=1e-12)
    assert nxt.speed == pytest.approx(10.133333333333333, rel=1e-12)
    assert nxt.yaw_rate == pytest.approx(0.025, rel=1e-12)
    assert nxt.t == pytest.approx(0.05)


def test_speed_saturates_and_decays():
    params = PhysicsParams()
    at_top = BoatState(0, 0, 0, 30.0, 0.0, 0.0)
    assert step_physics(at_top, (1.0, 0.0), params, 0.05).speed == 30.0
    coasting = step_physics(at_top, (0.0, 0.0), params, 0.05)
    assert coasting.speed < 30.0
    stopped = BoatState(0, 0, 0, 0.0, 0.0, 0.0)
    assert step_physics(stopped, (0.0, 0.0), params, 0.05).speed == 0.0


def test_yaw_rate_is_clamped():
    params = PhysicsParams()
    state = BoatState(0, 0, 0, 10.0, 0.0, 0.0)
    for _ in range(200):
        state = step_physics(state, (1.0, 5.0), params, 0.05)
    assert state.yaw_rate <= params.yaw_rate_max + 1e-12


def test_step_physics_validation():
    params = PhysicsParams()
    state = BoatState(0, 0, 0, 10.0, 0.0, 0.0)
    with pytest.raises(InputError):
        step_physics(state, (1.5, 0.0), params, 0.05)
    with pytest.raises(InputError):
        step_physics(state, (-0.1, 0.0), params, 0.05)
    with pytest.raises(InputError):
        step_physics(state, (1.0, 0.0), params, 0.0)


def test_wrap_angle_range():
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)  # range is (-pi, pi]
    assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert wrap_angle(2 * math.pi) == pytest.approx(0.0)
    for k in range(-8, 9):
        a = 0.3 + k * 2 * math.pi
        assert wrap_angle(a) == pytest.approx(0.3, abs=1e-9)


def test_step_arrays_matches_scalar_stepper():
    rng = np.random.default_rng(0)
    params = PhysicsParams()
    n = 40
    xs = rng.uniform(-100, 100, n)
    ys = rng.uniform(-100, 100, n)
    headings = rng.uniform(-np.pi, np.pi, n)
    speeds = rng.uniform(0, 30, n)
    yaw_rates = rng.uniform(-0.4, 0.4, n)
    throttle = rng.uniform(0, 1, n)
    yaw_cmd = rng.uniform(-1, 1, n)
    expected = [
        step_physics(
            BoatState(xs[i], ys[i], headings[i], speeds[i], yaw_rates[i], 0.0),
            (throttle[i], yaw_cmd[i]), params, 0.05,
        )
        for i in range(n)
    ]
    step_arrays(xs, ys, headings, speeds, yaw_rates, throttle, yaw_cmd,
                params, 0.05)
    for i, e in enumerate(expected):
        assert xs[i] == pytest.approx(e.x, rel=1e-12)
        assert ys[i] == pytest.approx(e.y, rel=1e-12)
        assert headings[i] == pytest.approx(e.heading, rel=1e-12)
        assert speeds[i] == pytest.approx(e.speed, rel=1e-12)
        assert yaw_rates[i] == pytest.approx(e.yaw_rate, rel=1e-12)


# ------------------------------------------------------------------ radius

def test_activation_radius_endpoints_and_midpoint():
    assert activation_radius(0, 30) == 1000.0
    assert activation_radius(60, 30) == 100.0
    assert activation_radius(30, 30) == 550.0
    assert activation_radius(0, None) == 1000.0  # free rulings need no budget
    assert activation_radius(10, 10, r_max=500.0, r_crit=50.0) == 275.0


def test_activation_radius_validation():
    with pytest.raises(InputError):
        activation_radius(-1, 30)
    with pytest.raises(InputError):
        activation_radius(61, 30)
    with pytest.raises(InputError):
        activation_radius(5, None)
    with pytest.raises(InputError):
        activation_radius(5, 0)


# ------------------------------------------------------------------ parade

def test_world_config_validation():
    with pytest.raises(InputError):
        WorldConfig(n_agents=5)
    with pytest.raises(InputError):
        WorldConfig(n_agents=0)
    with pytest.raises(InputError):
        WorldConfig(r_crit=1000.0, r_max=1000.0)


def test_init_parade_layout():
    cfg = WorldConfig()
    world = init_parade(3, cfg)
    assert len(world.agents) == 16
    west = [a for a in world.agents if a.side == "west"]
    east = [a for a in world.agents if a.side == "east"]
    assert len(west) == len(east) == 8
    for a in west:
        assert a.goal[0] == cfg.arena_length and a.start[0] < cfg.arena_length / 2
    for a in east:
        assert a.goal[0] == 0.0 and a.start[0] > cfg.arena_length / 2
    for agents in (west, east):
        xs = sorted(a.start[0] for a in agents)
        gaps = [b - a for a, b in zip(xs, xs[1:])]
        assert all(g >= cfg.min_start_gap for g in gaps)
        assert all(g <= cfg.min_start_gap + cfg.extra_start_gap for g in gaps)
    mid = cfg.arena_width / 2
    for a in world.agents:
        assert abs(a.start[1] - mid) <= cfg.y_band
        assert abs(a.goal[1] - mid) <= cfg.y_band
        assert len(a.description) == 13


def test_init_parade_deterministic():
    a = init_parade(5)
    b = init_parade(5)
    assert a == b
    assert init_parade(6) != a


# --------------------------------------------------------------- encounters

def _mk_agent(agent_id, side):
    return BoatAgent(agent_id=agent_id, side=side, start=(0, 0), goal=(1, 1),
                     description=sample_boat_agent(agent_id))


def test_pair_orientation_rules():
    agents = (
        _mk_agent(0, "west"), _mk_agent(1, "east"),
        _mk_agent(2, "east"), _mk_agent(3, "west"),
    )
    assert _orient_pair(agents, 0, 1) == (0, 1)  # west agent proposes
    assert _orient_pair(agents, 1, 0) == (0, 1)
    assert _orient_pair(agents, 2, 3) == (3, 2)
    assert _orient_pair(agents, 1, 2) == (1, 2)  # same side: lower id proposes
    assert _orient_pair(agents, 2, 1) == (1, 2)
    assert _orient_pair(agents, 3, 0) == (0, 3)


def test_objective_trial_two_boats():
    world = init_parade(7, TINY_WORLD)
    res = run_boat_trial(world, None, None, "objective")
    assert res.mode == "objective"
    assert len(res.encounters) == 1
    enc = res.encounters[0]
    # the west boat proposes, rulings are free and fields engage at r_max
    assert enc.pr_agent == 0 and enc.op_agent == 1
    assert enc.z == 0
    assert enc.r_act == 1000.0
    assert enc.termination == "objective"
    assert enc.yielding
    assert {enc.winner, enc.loser} == {0, 1}
    t0, t1 = res.trajectories
    tel = res.telemetry
    assert all(m.arrival_index < len(t.ts) for m, t in zip(tel, res.trajectories))
    both = min(m.arrival_index for m in tel)
    d = np.hypot(t0.xs[:both] - t1.xs[:both], t0.ys[:both] - t1.ys[:both])
    assert d.min() > 100.0  # no collision-reflex breach in the referee world


def test_nominal_trial_records_spend():
    world = init_parade(7, TINY_WORLD)
    res = run_boat_trial(world, "min_cost", 30, "nominal")
    assert len(res.encounters) == 1
    enc = res.encounters[0]
    assert enc.z == 48
    assert enc.r_act == pytest.approx(280.0)
    assert enc.termination == "budget_forced"
    assert enc.yielding  # nominal mode always respects the ruling


def test_subjective_trial_ignores_forced_rulings():
    world = init_parade(7, TINY_WORLD)
    nominal = run_boat_trial(world, "min_cost", 30, "nominal")
    subjective = run_boat_trial(world, "min_cost", 30, "subjective")
    enc = subjective.encounters[0]
    assert enc.termination == "budget_forced"
    assert not enc.yielding
    # refusing to yield must change the loser's path
    loser = enc.loser
    a = nominal.trajectories[loser]
    b = subjective.trajectories[loser]
    m = min(len(a.xs), len(b.xs))
    assert not np.allclose(a.xs[:m], b.xs[:m])


def test_trials_are_deterministic():
    world = init_parade(7, TINY_WORLD)
    for mode, strategy, g in (("objective", None, None),
                              ("nominal", "random", 30),
                              ("subjective", "offensive", 20)):
        r1 = run_boat_trial(world, strategy, g, mode)
        r2 = run_boat_trial(world, strategy, g, mode)
        for a, b in zip(r1.trajectories, r2.trajectories):
            assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)
        assert len(r1.encounters) == len(r2.encounters)


def test_run_boat_trial_validation():
    world = init_parade(7, TINY_WORLD)
    with pytest.raises(InputError):
        run_boat_trial(world, "min_cost", 30, "oracle")
    with pytest.raises(InputError):
        run_boat_trial(world, "bold", 30, "nominal")
    with pytest.raises(InputError):
        run_boat_trial(world, "min_cost", None, "nominal")
    with pytest.raises(InputError):
        run_boat_trial(world, "min_cost", -1, "nominal")


# ----------------------------------------------------------------- metrics

def _flat_series(n, dt=0.05, speed=30.0):
    ts = np.arange(n) * dt
    traj = Trajectory(ts=ts, xs=ts * speed, ys=np.zeros(n),
                      headings=np.zeros(n), speeds=np.full(n, speed))
    return ts, traj


def test_comfort_metrics_on_synthetic_series():
    n = 101
    ts, traj = _flat_series(n)
    lat = np.full(n, 2.0)
    tel = Telemetry(ts=ts, lat_acc=lat, yaw_rate=np.full(n, 0.1),
                    lat_jerk=np.zeros(n), arrival_index=n)
    m = comfort_metrics(tel, traj)
    assert m.lat_acc_auc == pytest.approx(2.0 * ts[-1])
    assert m.yaw_rate_auc == pytest.approx(0.1 * ts[-1])
    assert m.lat_jerk_auc == 0.0
    # the window ends at arrival
    tel_half = Telemetry(ts=ts, lat_acc=lat, yaw_rate=np.zeros(n),
                         lat_jerk=np.zeros(n), arrival_index=51)
    assert comfort_metrics(tel_half, traj).lat_acc_auc == pytest.approx(2.0 * ts[50])


def test_comfort_metrics_skips_launch_phase():
    n = 100
    ts = np.arange(n) * 0.05
    speeds = np.concatenate([np.linspace(0, 30, 50), np.full(50, 30.0)])
    traj = Trajectory(ts=ts, xs=np.cumsum(speeds) * 0.05, ys=np.zeros(n),
                      headings=np.zeros(n), speeds=speeds)
    tel = Telemetry(ts=ts, lat_acc=np.ones(n), yaw_rate=np.zeros(n),
                    lat_jerk=np.zeros(n), arrival_index=n)
    m = comfort_metrics(tel, traj)
    # first cruise sample is where speed reaches 0.95 * 30
    start = int(np.nonzero(speeds >= 28.5)[0][0])
    assert m.lat_acc_auc == pytest.approx(ts[-1] - ts[start])
    # a boat that never cruises contributes nothing
    slow = Trajectory(ts=ts, xs=traj.xs, ys=traj.ys, headings=traj.headings,
                      speeds=np.full(n, 5.0))
    assert comfort_metrics(tel, slow).lat_acc_auc == 0.0


def test_comfort_metrics_validation():
    ts, traj = _flat_series(10)
    tel = Telemetry(ts=ts[:5], lat_acc=np.zeros(5), yaw_rate=np.zeros(5),
                    lat_jerk=np.zeros(5), arrival_index=5)
    with pytest.raises(InputError):
        comfort_metrics(tel, traj)


def test_decimate_positions():
    _, traj = _flat_series(101)
    pts = decimate_positions(traj, stride=20)
    assert len(pts) == 6
    assert pts[-1][0] == pytest.approx(traj.xs[-1])
    pts = decimate_positions(traj, stride=1000)
    assert len(pts) == 2  # first sample plus forced endpoint
    with pytest.raises(InputError):
        decimate_positions(traj, stride=0)


def _result_from(trajs):
    n = len(trajs[0].ts)
    tel = Telemetry(ts=trajs[0].ts, lat_acc=np.zeros(n), yaw_rate=np.zeros(n),
                    lat_jerk=np.zeros(n), arrival_index=n)
    return BoatTrialResult(mode="nominal", strategy="min_cost", g=30,
                           trajectories=tuple(trajs), telemetry=(tel,) * len(trajs),
                           encounters=())


def test_global_trajectory_losses():
    _, base = _flat_series(101)
    shifted = Trajectory(ts=base.ts, xs=base.xs, ys=base.ys + 7.0,
                         headings=base.headings, speeds=base.speeds)
    nominal = _result_from([base])
    subjective = _result_from([shifted])
    objective = _result_from([base])
    losses = global_trajectory_losses(nominal, subjective, objective)
    assert losses.omega == (0.0,)
    assert losses.omega_p == (7.0,)
    assert losses.gap == (7.0,)  # subjective vs objective by default
    literal = global_trajectory_losses(nominal, subjective, objective,
                                       literal_gap=True)
    assert literal.gap == (7.0,)
    assert losses.mean_omega == 0.0 and losses.mean_omega_p == 7.0
    with pytest.raises(InputError):
        global_trajectory_losses(nominal, subjective, _result_from([base, base]))


# ----------------------------------------------------------------- harness

def test_boat_experiment_tiny_run(tmp_path):
    cfg = BoatExperimentConfig(
        seed=1, strategies=("min_cost",), g=30, n_trials=2, world=TINY_WORLD)
    summaries = run_boat_experiment(cfg)
    assert len(summaries) == 2
    for s in summaries:
        assert s.strategy == "min_cost"
        assert len(s.losses.omega) == 2
        assert len(s.comfort) == 2
        assert set(s.encounters) == {"nominal", "subjective", "objective"}
        for enc in s.encounters["objective"]:
            assert enc.z == 0
    again = run_boat_experiment(cfg)
    assert [s.losses for s in again] == [s.losses for s in summaries]

    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_boat_summary_csv(summaries, p1)
    write_boat_summary_csv(summaries, p2)
    assert p1.read_bytes() == p2.read_bytes()
    header = p1.read_text(encoding="utf-8").splitlines()[0]
    assert header.split(",")[:4] == ["trial", "strategy", "agent", "omega"]
    write_boat_encounters_csv(summaries, p1)
    lines = p1.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("trial,strategy,mode,first")
    assert len(lines) > 1


def test_parallel_experiment_matches_serial():
    cfg = BoatExperimentConfig(
        seed=2, strategies=("defensive",), g=30, n_trials=2, world=TINY_WORLD)
    serial = run_boat_experiment(cfg, jobs=1)
    parallel = run_boat_experiment(cfg, jobs=2)
    assert [s.losses for s in serial] == [s.losses for s in parallel]
    assert [s.budget_forced for s in serial] == [s.budget_forced for s in parallel]


def test_trajectory_csv(tmp_path):
    world = init_parade(7, TINY_WORLD)
    res = run_boat_trial(world, "min_cost", 30, "nominal")
    path = tmp_path / "traj.csv"
    write_trajectory_csv([(0, res)], path, stride=200)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ("trial,mode,strategy,agent,t,x,y,heading,"
                        "speed,lat_acc,yaw_rate,lat_jerk")
    assert len(lines) > 10


def test_modes_for():
    assert modes_for("all") == ("nominal", "subjective", "objective")
    assert modes_for("nominal") == ("nominal",)
    with pytest.raises(InputError):
        modes_for("both")


def test_experiment_config_validation():
    with pytest.raises(InputError):
        BoatExperimentConfig(strategies=("bold",))
    with pytest.raises(InputError):
        BoatExperimentConfig(n_trials=0)
    with pytest.raises(InputError):
        BoatExperimentConfig(g=-5)
