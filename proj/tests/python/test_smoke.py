"""Smoke tests for the python bindings against the C++ core."""

import math

import numpy as np
import pytest

igame = pytest.importorskip("igame")


def test_scenario_catalog_and_simulation():
    names = igame.scenario_names()
    assert "saccade" in names and "pursuit" in names
    run = igame.simulate_scenario("linear-relaxation", seed=3)
    t = np.asarray(run["t"])
    states = np.asarray(run["states"])
    assert t.shape[0] == states.shape[0]
    assert np.all(np.isfinite(states))
    again = igame.simulate_scenario("linear-relaxation", seed=3)
    assert np.array_equal(states, np.asarray(again["states"]))


def test_fit_dynamics_recovers_linear_decay():
    run = igame.simulate_scenario("autonomous", seed=0)
    traj = igame.Trajectory(float(run["t"][0]), float(run["t"][1] - run["t"][0]),
                            np.asarray(run["states"]))
    model, residual = igame.fit_dynamics(traj, degree=2, use_controls=False)
    assert residual < 1e-3
    keys = model.term_keys
    coeffs = np.asarray(model.coefficients)[0]
    recovered = dict(zip(keys, coeffs))
    assert abs(recovered["x0"] + 0.8) < 1e-3
    assert abs(recovered["1"] - 0.4) < 1e-3


def test_detection_pipeline_roundtrip():
    run = igame.simulate_scenario("linear-relaxation", seed=5)
    dt = float(run["t"][1] - run["t"][0])
    traj = igame.Trajectory(0.0, dt, np.asarray(run["states"]),
                            np.asarray(run["controls"]))
    menu = igame.builtin_menu_json("linear-relaxation")
    ranking = igame.select_interactive_model(traj, menu, holdout=0.3, degree=2,
                                             n_perturbations=6, seed=1)
    assert ranking["best_index"] == 0
    eps, residual = igame.recover_epsilon_additive(traj, np.asarray(run["pure"]))
    assert residual < 1e-9
    assert np.allclose(eps, np.asarray(run["epsilon"]), atol=1e-9)


def test_ladder_operator_commutator():
    lower, raise_ = igame.ladder_operators(1, 4)
    a, adag = lower[0], raise_[0]
    comm = a @ adag - adag @ a
    # Identity except at the truncation level.
    expected = np.eye(5)
    expected[4, 4] = -4.0
    assert np.allclose(comm, expected, atol=1e-12)


def test_evolution_preserves_norm_and_phases():
    omega = np.array([[1.0 + 0.0j]])
    psi = np.zeros(5, dtype=complex)
    psi[2] = 1.0
    out = igame.evolve(omega, [], cutoff=4, psi=psi, duration=0.7)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-10
    assert abs(out[2] - math.e ** 0j * np.exp(-2j * 0.7)) < 1e-10


def test_segmentation_finds_the_shift():
    driver = np.zeros((40, 1))
    driver[18:, 0] = 4.0
    breakpoints = igame.segment_series(driver, dt=0.1, penalty=0.5, min_len=3)
    assert list(breakpoints) == [0, 18, 39]


def test_cli_entry_point_runs_in_process(tmp_path):
    code = igame.run_cli(["simulate", "--scenario", "still-point", "--seed", "1",
                          "--out", str(tmp_path / "run")])
    assert code == 0
    assert (tmp_path / "run" / "traj.csv").exists()
    traj = igame.read_trajectory_csv(str(tmp_path / "run" / "traj.csv"))
    assert np.allclose(np.asarray(traj.states), 1.0)
    assert igame.run_cli(["simulate", "--scenario", "nope", "--out",
                          str(tmp_path / "run2")]) == 2
