"""Two-disk projection geometry and the fixed-sequence convex solver."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellnav import (
    AssociationSequence,
    DegenerateSequence,
    SolverConfig,
    feasible_handover_points,
    optimize_handovers,
    polyline_length,
    project_two_disks,
    sequence_graph_weight,
)
from cellnav.handover import HandoverRegion, handover_regions
from conftest import make_scenario
from oracles import nested_grid_handover_oracle

A = np.array([0.0, 0.0])
B = np.array([1.5, 0.0])
R = 1.0


def test_project_inside_point_unchanged():
    p = np.array([0.75, 0.1])
    assert np.allclose(project_two_disks(p, A, B, R), p)


def test_project_single_disk_boundary():
    # Far to the right: binding constraint is disk A; projection on its circle.
    p = np.array([3.0, 0.0])
    q = project_two_disks(p, A, B, R)
    assert np.linalg.norm(q - A) == pytest.approx(R)
    assert np.linalg.norm(q - B) <= R


def test_project_lens_corner():
    # Directly above the lens: both constraints bind at the upper corner,
    # which sits on the perpendicular bisector at height sqrt(1 - 0.75^2).
    p = np.array([0.75, 5.0])
    q = project_two_disks(p, A, B, R)
    assert q[0] == pytest.approx(0.75)
    assert q[1] == pytest.approx(np.sqrt(1.0 - 0.75**2))


def test_project_is_nearest_feasible(rng):
    region = HandoverRegion(A, B, R)
    for _ in range(200):
        p = rng.uniform(-2.0, 3.5, size=2)
        q = project_two_disks(p, A, B, R)
        assert region.contains(q, tol=1e-12)
        # No sampled feasible point may be closer than the projection.
        samples = rng.uniform(-1.0, 2.5, size=(300, 2))
        feas = samples[
            (np.linalg.norm(samples - A, axis=1) <= R)
            & (np.linalg.norm(samples - B, axis=1) <= R)
        ]
        if feas.size:
            assert np.linalg.norm(q - p) <= np.linalg.norm(feas - p, axis=1).min() + 1e-12


coords = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(px=coords, py=coords, bx=st.floats(0.0, 1.9), r=st.floats(0.05, 5.0))
def test_projection_properties(px, py, bx, r):
    """Idempotence, feasibility, and the obtuse-angle optimality condition."""
    a = np.array([0.0, 0.0])
    b = np.array([bx * r, 0.0])  # centers at most 1.9*r apart: non-empty lens
    p = np.array([px, py])
    q = project_two_disks(p, a, b, r)
    tol = 1e-9 * max(r, 1.0)
    assert np.linalg.norm(q - a) <= r + tol and np.linalg.norm(q - b) <= r + tol
    assert np.allclose(project_two_disks(q, a, b, r), q, atol=tol)
    # Optimality of a Euclidean projection onto a convex set: the vector
    # p - q makes a non-acute angle with every feasible direction; the lens
    # center (midpoint of a and b) is always feasible.
    mid = (a + b) / 2.0
    assert float(np.dot(p - q, mid - q)) <= tol * (1.0 + np.linalg.norm(p))


def test_region_rejects_empty_intersection():
    with pytest.raises(ValueError):
        HandoverRegion(A, np.array([2.5, 0.0]), R)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(eps_fractions=())
    with pytest.raises(ValueError):
        SolverConfig(eps_fractions=(1e-4, 1e-2))
    with pytest.raises(ValueError):
        SolverConfig(eps_fractions=(1e-2, 1e-3), constraint_tol_fraction=1e-6)


def test_feasible_construction(small_scenario):
    s = small_scenario
    d_bar = 1100.0
    seq = AssociationSequence((0, 1, 2))
    sol = feasible_handover_points(s, seq, d_bar)
    assert sol.points.shape == (4, 2)
    assert np.allclose(sol.points[0], s.u0) and np.allclose(sol.points[-1], s.uf)
    for region, p in zip(handover_regions(s, seq, d_bar), sol.points[1:-1]):
        assert region.contains(p, tol=1e-9)
    assert sol.objective == pytest.approx(polyline_length(sol.points))


def test_feasible_construction_rejects_consecutive_repeat(small_scenario):
    with pytest.raises(DegenerateSequence):
        feasible_handover_points(small_scenario, AssociationSequence((0, 0, 1)), 1100.0)


def test_collinear_chain_is_straight(small_scenario):
    # GBSs and endpoints all on the x-axis: the optimum is the 6000 m segment.
    s = small_scenario
    sol = optimize_handovers(s, AssociationSequence((0, 1, 2)), 1100.0)
    assert sol.objective == pytest.approx(6000.0, abs=1e-6)
    assert np.allclose(sol.points[:, 1], 0.0, atol=1e-6)


def test_single_segment_is_straight(small_scenario):
    s = small_scenario
    sol = optimize_handovers(s, AssociationSequence((1,)), 4000.0)
    assert sol.objective == pytest.approx(6000.0, abs=1e-9)


def test_optimizer_never_worse_than_construction(rng):
    checked = 0
    while checked < 30:
        s = make_scenario(rng, m=3)
        d_bar = 3000.0
        seq = AssociationSequence((0, 1, 2))
        if not seq.is_feasible_for(s, d_bar):
            continue
        checked += 1
        init = feasible_handover_points(s, seq, d_bar)
        sol = optimize_handovers(s, seq, d_bar)
        assert sol.objective <= init.objective + 1e-9
        assert init.objective <= sequence_graph_weight(s, seq) + 1e-9
        for region, p in zip(handover_regions(s, seq, d_bar), sol.points[1:-1]):
            assert region.contains(p, tol=1e-6 * d_bar)


def test_optimizer_matches_grid_oracle(rng):
    checked = 0
    while checked < 12:
        m = int(rng.integers(2, 4))
        s = make_scenario(rng, m=m)
        d_bar = 3200.0
        ids = tuple(rng.permutation(m))[: int(rng.integers(2, m + 1))]
        seq = AssociationSequence(ids)
        if not seq.is_feasible_for(s, d_bar):
            continue
        checked += 1
        sol = optimize_handovers(s, seq, d_bar)
        oracle = nested_grid_handover_oracle(s, seq.indices, d_bar)
        assert abs(sol.objective - oracle) <= 1e-3 * d_bar
        # The oracle is a feasible construction, so itself an upper bound.
        assert sol.objective <= oracle + 1e-6
