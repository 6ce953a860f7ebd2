"""State synthesis, GHZ classification, verification, search, frustration."""

from __future__ import annotations

import cmath
import math
import random

import pytest

import photongraph as pg
from photongraph import Edge, ExperimentGraph, QuantumState

from fixt import double_edge, k4_ghz, layered6, w_state_target

INV_SQRT3 = 1 / math.sqrt(3)


def test_k4_ghz_state():
    state = pg.state_from_graph(k4_ghz(), normalize=True)
    assert set(state.terms) == {(0, 0, 0, 0), (1, 1, 1, 1), (2, 2, 2, 2)}
    for amp in state.terms.values():
        assert abs(amp - INV_SQRT3) <= 1e-9


def test_layered6_state_has_maverick_term():
    state = pg.state_from_graph(layered6(), normalize=True)
    expected = {(0,) * 6, (1,) * 6, (2,) * 6, (1, 2, 1, 2, 0, 0)}
    assert set(state.terms) == expected
    for amp in state.terms.values():
        assert abs(amp - 0.5) <= 1e-9


def test_destructive_double_edge_has_no_terms():
    state = pg.state_from_graph(double_edge(math.pi))
    assert state.terms == {}
    with pytest.raises(pg.FullyFrustratedError):
        pg.state_from_graph(double_edge(math.pi), normalize=True)


def test_merged_double_k4_is_six_photon_ghz():
    merged = pg.merge_graphs(k4_ghz(("a", "b", "c", "d")), k4_ghz(("e", "f", "g", "h")), [("d", "e")])
    state = pg.state_from_graph(merged, normalize=True)
    assert set(state.terms) == {(0,) * 6, (1,) * 6, (2,) * 6}
    for amp in state.terms.values():
        assert abs(amp - INV_SQRT3) <= 1e-9
    assert pg.is_ghz_like(state)


def test_is_ghz_like():
    assert pg.is_ghz_like(pg.state_from_graph(k4_ghz(), normalize=True))
    assert not pg.is_ghz_like(pg.state_from_graph(layered6(), normalize=True))
    assert pg.is_ghz_like(QuantumState({(0, 1): 1.0}))


def test_is_ghz_like_rejects_unequal_magnitudes():
    state = QuantumState({(0, 0): 0.9, (1, 1): 0.1})
    assert not pg.is_ghz_like(state)


def test_ghz_likeness_tracks_disjointness_of_all_matchings():
    # all matchings disjoint + one uniform mode per layer -> GHZ shape
    from fixt import cycle_graph, k6_factored

    base = cycle_graph(6)
    edges = [
        Edge(e.id, e.u, e.v, mode_u=k % 2, mode_v=k % 2, layer=k % 2)
        for k, e in enumerate(base.edges)
    ]
    ring = ExperimentGraph(base.vertices, edges)
    d, _ = pg.max_disjoint_pms(ring)
    assert d == len(pg.enumerate_pm(ring)) == 2
    assert pg.is_ghz_like(pg.state_from_graph(ring, normalize=True))

    k6 = k6_factored()
    d6, _ = pg.max_disjoint_pms(k6)
    assert d6 < len(pg.enumerate_pm(k6))
    assert not pg.is_ghz_like(pg.state_from_graph(k6, normalize=True))


def test_verify_target_examples():
    ghz = pg.state_from_graph(k4_ghz(), normalize=True)
    assert pg.verify_target(k4_ghz(), ghz)
    eq1 = pg.state_from_graph(layered6(), normalize=True)
    assert not pg.verify_target(k4_ghz(), eq1)
    assert pg.verify_target(layered6(), eq1)


def test_verify_target_global_phase_invariance():
    ghz = pg.state_from_graph(k4_ghz(), normalize=True)
    for theta in (0.3, 1.2, -2.5):
        rotated = QuantumState({k: a * cmath.exp(1j * theta) for k, a in ghz.terms.items()})
        assert pg.verify_target(k4_ghz(), rotated)


def test_state_invariant_under_edge_relabeling():
    g = layered6()
    relabeled = ExperimentGraph(
        g.vertices,
        [Edge(f"r{k}", e.u, e.v, e.mode_u, e.mode_v, e.amp_mag, e.amp_phase_rad) for k, e in enumerate(reversed(g.edges))],
    )
    assert pg.states_equal(pg.state_from_graph(g), pg.state_from_graph(relabeled))


def test_term_count_matches_matchings_for_generic_modes():
    rng = random.Random(77)
    for _ in range(15):
        base = pg.random_graph(8, 0.5, rng.getrandbits(32))
        edges = [
            Edge(e.id, e.u, e.v, mode_u=2 * k, mode_v=2 * k + 1)
            for k, e in enumerate(base.edges)
        ]
        g = ExperimentGraph(base.vertices, edges)
        state = pg.state_from_graph(g)
        assert len(state.terms) == len(pg.enumerate_pm(g))


def test_normalization_total_weight():
    state = pg.state_from_graph(layered6(), normalize=True)
    assert abs(state.norm_sq() - 1.0) <= 1e-9
    assert state.normalized


def test_search_finds_w_state():
    target = w_state_target()
    found = pg.search_graph_for_state(target)
    assert found is not None
    assert pg.verify_target(found, target)
    assert len(found.edges) <= 8
    # the W state needs parallel edges: some pair carries two crystals
    pair_counts: dict[tuple[str, str], int] = {}
    for e in found.edges:
        pair_counts[(e.u, e.v)] = pair_counts.get((e.u, e.v), 0) + 1
    assert max(pair_counts.values()) >= 2


def test_search_three_dim_ghz_impossible_with_simple_graphs():
    target = QuantumState({(0,) * 6: INV_SQRT3, (1,) * 6: INV_SQRT3, (2,) * 6: INV_SQRT3})
    assert pg.search_graph_for_state(target, max_parallel=1) is None


def test_search_finds_asymmetric_trigger_state():
    # one photon acts as a trigger while the rest carry a 4-dim ladder
    target = QuantumState({
        (0, 0, 0, 0): 0.5,
        (0, 1, 0, 1): 0.5,
        (0, 2, 1, 0): 0.5,
        (0, 3, 1, 1): 0.5,
    })
    found = pg.search_graph_for_state(target)
    assert found is not None
    assert pg.verify_target(found, target)


def test_search_single_term_target():
    found = pg.search_graph_for_state(QuantumState({(0, 0): 1.0}))
    assert found is not None
    assert len(found.edges) == 1
    e = found.edges[0]
    assert (e.mode_u, e.mode_v) == (0, 0)


def test_search_is_deterministic():
    target = w_state_target()
    a = pg.search_graph_for_state(target)
    b = pg.search_graph_for_state(target)
    assert a == b


def test_search_rejects_unreachable_modes():
    target = QuantumState({(9, 9): 1.0})
    assert pg.search_graph_for_state(target, max_mode=3) is None


def test_frustration_scan_double_edge():
    rows = pg.frustration_scan(double_edge(), "II", [0.0, math.pi / 2, math.pi])
    expected = {0.0: 4.0, math.pi / 2: 2.0, math.pi: 0.0}
    for phase, intensity in rows:
        assert abs(intensity - expected[phase]) <= 1e-9


def test_frustration_scan_matches_interference_formula():
    phases = [0.3, 1.1, 2.0, 2.9]
    rows = pg.frustration_scan(double_edge(), "II", phases)
    for phase, intensity in rows:
        assert abs(intensity - abs(1 + cmath.exp(1j * phase)) ** 2) <= 1e-9


def test_frustration_scan_single_edge_constant():
    g = ExperimentGraph(["a", "b"], [Edge("I", "a", "b")])
    rows = pg.frustration_scan(g, "I", [0.0, 1.0, 2.0])
    for _, intensity in rows:
        assert abs(intensity - 1.0) <= 1e-9


def test_frustration_scan_unknown_edge():
    with pytest.raises(pg.DomainError):
        pg.frustration_scan(double_edge(), "nope", [0.0])


def test_state_file_round_trip():
    state = pg.state_from_graph(layered6(), normalize=True)
    text = pg.serialize_state(state)
    back = pg.parse_state(text)
    assert pg.states_equal(state, back)
    assert pg.serialize_state(back) == text


def test_parse_state_rejects_ragged_kets():
    with pytest.raises(pg.GraphParseError):
        pg.parse_state('[{"modes": [0, 0]}, {"modes": [0]}]')


def test_parse_state_rejects_duplicate_kets():
    with pytest.raises(pg.GraphParseError):
        pg.parse_state('[{"modes": [0]}, {"modes": [0]}]')
