"""Random-network ensembles and first-order amplitudes."""

from __future__ import annotations

import math

import pytest

import photongraph as pg
from photongraph import Edge, ExperimentGraph

from fixt import double_edge, k4_ghz
from oracles import pairing_masks


def test_endpoints_are_exact():
    reports = pg.ensemble_scan(6, [0.0, 1.0], 200, 7)
    assert reports[0].pm_exists_fraction == 0.0
    assert reports[0].pm_count_histogram == {0: 200}
    assert reports[1].pm_exists_fraction == 1.0
    assert reports[1].pm_count_histogram == {pg.count_pm_formula(3): 200}


def _exact_pm_probability(n: int, p: float) -> float:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pair_pos = {pq: k for k, pq in enumerate(pairs)}
    masks = pairing_masks(n, pair_pos)
    total = 0.0
    m = len(pairs)
    for sub in range(1 << m):
        if any(mask & sub == mask for mask in masks):
            k = sub.bit_count()
            total += p**k * (1 - p) ** (m - k)
    return total


def test_fraction_matches_exact_probability():
    p = 0.5
    trials = 1500
    report = pg.ensemble_scan(6, [p], trials, 2024)[0]
    exact = _exact_pm_probability(6, p)
    sigma = math.sqrt(exact * (1 - exact) / trials)
    assert abs(report.pm_exists_fraction - exact) <= 3 * sigma


def test_reports_are_deterministic():
    a = pg.ensemble_scan(6, [0.3, 0.7], 300, 99)
    b = pg.ensemble_scan(6, [0.3, 0.7], 300, 99)
    assert a == b


def test_histogram_sums_to_trials():
    report = pg.ensemble_scan(6, [0.4], 500, 5)[0]
    assert sum(report.pm_count_histogram.values()) == 500


def test_fraction_monotone_in_p():
    # per-trial seeds couple the samples: edge sets are nested as p grows,
    # so the existence fraction is monotone, not just in expectation
    ps = [0.1, 0.3, 0.5, 0.7, 0.9]
    reports = pg.ensemble_scan(6, ps, 400, 31)
    fractions = [r.pm_exists_fraction for r in reports]
    assert fractions == sorted(fractions)


def test_parallel_workers_match_serial():
    serial = pg.ensemble_scan(6, [0.5], 80, 12)
    parallel = pg.ensemble_scan(6, [0.5], 80, 12, workers=2)
    assert serial == parallel


def test_trial_seed_mixing():
    seeds = {pg.trial_seed(1, t) for t in range(100)}
    assert len(seeds) == 100
    assert pg.trial_seed(1, 0) != pg.trial_seed(2, 0)


def test_ensemble_domain_errors():
    with pytest.raises(pg.DomainError):
        pg.ensemble_scan(5, [0.5], 10, 0)
    with pytest.raises(pg.DomainError):
        pg.ensemble_scan(6, [0.5], 0, 0)
    with pytest.raises(pg.DomainError):
        pg.ensemble_scan(6, [1.5], 10, 0)


def test_single_edge_amplitude_is_p():
    g = ExperimentGraph(["a", "b"], [Edge("x", "a", "b")])
    for p in (0.1, 0.5, 1.0):
        assert abs(pg.network_amplitude(g, p) - p) <= 1e-12


def test_k4_terms_scale_with_p_squared():
    p = 0.3
    state = pg.network_state(k4_ghz(), p)
    assert set(state.terms) == {(0, 0, 0, 0), (1, 1, 1, 1), (2, 2, 2, 2)}
    for amp in state.terms.values():
        assert abs(amp - p**2) <= 1e-12
    assert abs(pg.network_amplitude(k4_ghz(), p) - 3 * p**2) <= 1e-12


def test_frustrated_double_edge_amplitude_vanishes():
    g = double_edge(math.pi)
    for p in (0.2, 0.8, 1.0):
        assert abs(pg.network_amplitude(g, p)) <= 1e-12


def test_network_state_at_unit_p_matches_state_synthesis():
    g = k4_ghz()
    assert pg.states_equal(pg.network_state(g, 1.0), pg.state_from_graph(g))


def test_network_amplitude_rejects_odd_graphs():
    g = ExperimentGraph(["a", "b", "c"], [Edge("x", "a", "b")])
    with pytest.raises(pg.DomainError):
        pg.network_amplitude(g, 0.5)


def test_csv_rows():
    from photongraph.networks import report_csv_rows

    reports = pg.ensemble_scan(4, [0.5], 50, 3)
    rows = report_csv_rows(reports)
    assert all(row[0] == 0.5 for row in rows)
    assert sum(row[3] for row in rows) == 50
