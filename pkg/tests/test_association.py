"""Association sequences: Dijkstra, exhaustive enumeration, repeat pruning."""
import numpy as np
import pytest

from cellnav import (
    AssociationSequence,
    Infeasible,
    Scenario,
    TooManyPaths,
    build_graph,
    enumerate_associations,
    prune_repeats,
    sequence_graph_weight,
    shortest_path_association,
)
from conftest import make_scenario


def _dense_scenario():
    """Three GBSs clustered so that every vertex pair is connected."""
    return Scenario(
        gbs=np.array([[400.0, 0.0], [500.0, 100.0], [600.0, 0.0]]),
        u0=np.array([0.0, 0.0]),
        uf=np.array([1000.0, 0.0]),
        uav_altitude=100.0,
        gbs_altitude=10.0,
        vmax=20.0,
        gamma0_db=80.0,
    )


def test_sequence_validation_and_serialization():
    seq = AssociationSequence((0, 9, 10, 5, 7))
    assert seq.serialize() == "1,10,11,6,8"
    assert AssociationSequence.parse("1,10,11,6,8") == seq
    assert len(seq) == 5
    with pytest.raises(ValueError):
        AssociationSequence(())


def test_feasibility_violations(small_scenario):
    s = small_scenario
    assert AssociationSequence((0, 1, 2)).is_feasible_for(s, 1000.0)
    # First GBS out of reach of u0.
    assert not AssociationSequence((1, 2)).is_feasible_for(s, 1000.0)
    # Consecutive gap 4000 > 2*1000.
    assert not AssociationSequence((0, 2)).is_feasible_for(s, 1000.0)
    assert AssociationSequence((5,)).feasibility_violations(s, 1000.0)


def test_shortest_path_small(small_scenario):
    g = build_graph(small_scenario, 1100.0)
    seq = shortest_path_association(g)
    assert seq.indices == (0, 1, 2)


def test_shortest_path_prefers_lighter_route():
    # Direct route through G1 weighs 400 + 600 = 1000; the detour through the
    # other two GBSs is heavier, so Dijkstra must pick (G1,).
    s = _dense_scenario()
    g = build_graph(s, 700.0)
    seq = shortest_path_association(g)
    best = min(
        enumerate_associations(g), key=lambda q: sequence_graph_weight(s, q)
    )
    assert sequence_graph_weight(s, seq) == pytest.approx(
        sequence_graph_weight(s, best)
    )


def test_shortest_path_matches_enumeration(rng):
    for _ in range(25):
        s = make_scenario(rng, m=int(rng.integers(3, 7)))
        g = build_graph(s, 3000.0)
        try:
            seqs = enumerate_associations(g)
        except Infeasible:
            with pytest.raises(Infeasible):
                shortest_path_association(g)
            continue
        seq = shortest_path_association(g)
        best = min(sequence_graph_weight(s, q) for q in seqs)
        assert sequence_graph_weight(s, seq) == pytest.approx(best)


def test_enumeration_complete_graph_count():
    # Complete topology over 3 GBSs with both endpoints adjacent to all of
    # them: sum over k of P(3, k) = 3 + 6 + 6 = 15 simple paths.
    g = build_graph(_dense_scenario(), 700.0)
    seqs = enumerate_associations(g)
    assert len(seqs) == 15
    assert len({q.indices for q in seqs}) == 15
    for q in seqs:
        assert len(set(q.indices)) == len(q.indices)


def test_enumeration_deterministic(rng):
    s = make_scenario(rng)
    g = build_graph(s, 3000.0)
    a = [q.indices for q in enumerate_associations(g)]
    b = [q.indices for q in enumerate_associations(build_graph(s, 3000.0))]
    assert a == b


def test_enumeration_path_cap():
    g = build_graph(_dense_scenario(), 700.0)
    with pytest.raises(TooManyPaths):
        enumerate_associations(g, max_paths=3)


def test_enumeration_infeasible(small_scenario):
    g = build_graph(small_scenario, 900.0)  # u0 cannot reach any GBS
    with pytest.raises(Infeasible):
        enumerate_associations(g)


def test_prune_repeats_examples():
    assert prune_repeats(AssociationSequence((0, 1, 0, 2))).indices == (0, 2)
    assert prune_repeats(AssociationSequence((3, 1, 4, 1, 5))).indices == (3, 1, 5)
    assert prune_repeats(AssociationSequence((2, 2, 2))).indices == (2,)
    assert prune_repeats(AssociationSequence((0, 1, 2))).indices == (0, 1, 2)


def test_prune_repeats_properties(rng):
    for _ in range(50):
        ids = tuple(int(i) for i in rng.integers(0, 6, size=int(rng.integers(1, 12))))
        pruned = prune_repeats(AssociationSequence(ids))
        assert len(set(pruned.indices)) == len(pruned.indices)
        assert len(pruned) <= len(ids)
        assert pruned.indices[0] == ids[0] and pruned.indices[-1] == ids[-1]
        # Idempotent.
        assert prune_repeats(pruned) == pruned
