"""End-to-end planners: proposed pipeline, exhaustive optimum, straight baseline."""
import numpy as np
import pytest

from cellnav import (
    Scenario,
    TooManyPaths,
    build_graph,
    compute_coverage_radius,
    enumerate_associations,
    is_feasible,
    linear_to_db,
    max_attainable_snr,
    optimize_handovers,
    plan_optimal,
    plan_proposed,
    plan_straight,
    straight_flight_threshold,
    verify_connectivity,
)
from cellnav.handover import DEFAULT_SOLVER_CONFIG
from conftest import make_scenario


def _dogleg_scenario():
    """Lightest-weight sequence loses: Dijkstra's pick is not the best path.

    At d_bar = 1805 m the two-GBS route G1-G2 has the smallest graph weight
    (6378 m vs 6690 m for G3-G4-G5), but its handover lens floats 566 m above
    the u0-uF axis and forces a dogleg, while the heavier three-GBS chain
    covers the straight 6000 m segment.
    """
    return Scenario(
        gbs=np.array(
            [
                [1200.0, 700.0],
                [4800.0, 700.0],
                [1000.0, -900.0],
                [3000.0, -900.0],
                [5000.0, -900.0],
            ]
        ),
        u0=np.array([0.0, 0.0]),
        uf=np.array([6000.0, 0.0]),
        uav_altitude=100.0,
        gbs_altitude=10.0,
        vmax=20.0,
        gamma0_db=80.0,
    )


def test_proposed_feasible_and_verified(rng):
    s = make_scenario(rng)
    rho, _ = max_attainable_snr(s)
    rho -= 1e-9
    res = plan_proposed(s, rho)
    assert res.feasible and res.method == "proposed"
    d_bar = compute_coverage_radius(s, rho)
    assert verify_connectivity(s, res.trajectory, d_bar).ok
    assert res.total_time == pytest.approx(res.path_length / s.vmax)
    assert res.sequence.is_feasible_for(s, d_bar, tol=1e-6 * float(d_bar))


def test_infeasible_returns_holding_result(small_scenario):
    s = small_scenario
    rho, _ = max_attainable_snr(s)
    for planner in (plan_proposed, plan_optimal):
        res = planner(s, rho + 1.0)
        assert not res.feasible
        assert res.total_time == np.inf and res.path_length == np.inf
        assert res.sequence is None
        assert np.allclose(res.trajectory.waypoints, s.u0)


def test_optimal_never_worse_than_proposed(rng):
    for _ in range(8):
        s = make_scenario(rng, m=5)
        rho, _ = max_attainable_snr(s)
        rho -= 1e-9
        proposed = plan_proposed(s, rho)
        optimal = plan_optimal(s, rho)
        assert optimal.total_time <= proposed.total_time + 1e-9
        d_bar = compute_coverage_radius(s, rho)
        assert verify_connectivity(s, optimal.trajectory, d_bar).ok
        assert optimal.sequence.is_feasible_for(s, d_bar, tol=1e-6 * float(d_bar))
        ids = optimal.sequence.indices
        assert len(set(ids)) == len(ids)


def test_optimal_beats_proposed_on_dogleg():
    s = _dogleg_scenario()
    rho = s.gamma0_db - linear_to_db(1805.0**2 + s.altitude_gap**2)
    assert float(compute_coverage_radius(s, rho)) == pytest.approx(1805.0)
    proposed = plan_proposed(s, rho)
    optimal = plan_optimal(s, rho)
    assert optimal.feasible and proposed.feasible
    assert proposed.sequence.indices == (0, 1)
    # Dogleg through the raised lens: 2 * sqrt(3000^2 + 566^2) meters.
    assert proposed.path_length == pytest.approx(
        2.0 * np.hypot(3000.0, 700.0 - np.sqrt(1805.0**2 - 1800.0**2)), rel=1e-9
    )
    # The optimum covers the straight segment through the lower chain.
    assert optimal.path_length == pytest.approx(6000.0, rel=1e-12)
    assert optimal.total_time < proposed.total_time - 1e-6
    assert proposed.sequence.indices != optimal.sequence.indices


def test_optimal_matches_brute_force(rng):
    for _ in range(6):
        s = make_scenario(rng, m=4)
        rho, _ = max_attainable_snr(s)
        rho -= 1e-9
        d_bar = compute_coverage_radius(s, rho)
        graph = build_graph(s, d_bar)
        if not is_feasible(graph):
            continue
        brute = min(
            optimize_handovers(s, seq, d_bar).objective
            for seq in enumerate_associations(graph)
        )
        res = plan_optimal(s, rho)
        assert res.path_length == pytest.approx(brute, rel=2e-5)
        assert res.path_length <= brute + 2e-5 * brute


def test_optimal_straight_shortcut(rng):
    # When the direct segment never leaves coverage the optimum is straight.
    s = make_scenario(rng)
    rho = straight_flight_threshold(s) - 0.5
    optimal = plan_optimal(s, rho)
    straight = plan_straight(s, rho)
    assert straight.feasible
    assert optimal.path_length == pytest.approx(
        float(np.linalg.norm(s.uf - s.u0)), rel=1e-12
    )
    assert straight.total_time == pytest.approx(optimal.total_time)


def test_straight_baseline_infeasible_when_gap(small_scenario):
    s = small_scenario
    rho_s = straight_flight_threshold(s)
    assert plan_straight(s, rho_s - 1e-6).feasible
    assert not plan_straight(s, rho_s + 1e-6).feasible


def test_optimal_path_cap(rng):
    s = make_scenario(rng, m=6)
    rho, _ = max_attainable_snr(s)
    with pytest.raises(TooManyPaths):
        plan_optimal(s, rho - 1e-9, max_paths=2)


def test_optimal_deterministic(rng):
    s = make_scenario(rng, m=5)
    rho, _ = max_attainable_snr(s)
    rho -= 1e-9
    a = plan_optimal(s, rho)
    b = plan_optimal(s, rho)
    assert a.sequence == b.sequence
    assert a.path_length == b.path_length
    assert np.array_equal(a.trajectory.waypoints, b.trajectory.waypoints)


def test_solver_cache_reuse(rng):
    s = make_scenario(rng, m=4)
    rho, _ = max_attainable_snr(s)
    rho -= 1e-9
    cache: dict = {}
    a = plan_optimal(s, rho, cfg=DEFAULT_SOLVER_CONFIG, _cache=cache)
    assert cache
    b = plan_optimal(s, rho, cfg=DEFAULT_SOLVER_CONFIG, _cache=cache)
    assert a.path_length == b.path_length
