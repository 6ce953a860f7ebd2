"""Random-network ensembles and first-order coincidence amplitudes.

Every edge is a pair source firing with probability ``p``; to first order
each edge contributes one photon pair, so a 2n-fold coincidence picks up one
factor of ``p`` per crystal in a perfect matching.  Ensemble statistics
sample G(n, p) graphs with per-trial seeds derived by hashing (seed, trial),
making runs reproducible independently of execution order or parallelism.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .counting import hafnian
from .errors import DomainError
from .graph import ExperimentGraph, random_graph
from .states import QuantumState, iter_cover_terms

__all__ = [
    "EnsembleReport",
    "ensemble_scan",
    "trial_seed",
    "network_amplitude",
    "network_state",
    "report_csv_rows",
]


@dataclass
class EnsembleReport:
    n: int
    p: float
    trials: int
    seed: int
    pm_exists_fraction: float
    pm_count_histogram: dict[int, int]


def trial_seed(seed: int, trial: int) -> int:
    """64-bit per-trial seed from a counter-mixed hash of (seed, trial)."""
    digest = hashlib.sha256(f"{seed}:{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _count_range(n: int, p: float, seed: int, start: int, stop: int) -> Counter:
    counts: Counter = Counter()
    for trial in range(start, stop):
        g = random_graph(n, p, trial_seed(seed, trial))
        counts[hafnian(g.adjacency())] += 1
    return counts


def ensemble_scan(
    n: int,
    p_values,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
) -> list[EnsembleReport]:
    """Sample ``trials`` graphs per probability and report the fraction with
    at least one perfect matching plus the full count histogram."""
    if n % 2 != 0 or n < 2:
        raise DomainError(f"vertex count must be even and >= 2 for matching statistics, got {n}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    reports = []
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"edge probability must lie in [0, 1], got {p}")
        if workers > 1:
            chunk = max(1, trials // (workers * 4))
            bounds = list(range(0, trials, chunk)) + [trials]
            counts: Counter = Counter()
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_count_range, n, p, seed, lo, hi)
                    for lo, hi in zip(bounds, bounds[1:])
                ]
                for future in futures:
                    counts.update(future.result())
        else:
            counts = _count_range(n, p, seed, 0, trials)
        existing = sum(freq for count, freq in counts.items() if count > 0)
        reports.append(
            EnsembleReport(
                n=n,
                p=float(p),
                trials=trials,
                seed=seed,
                pm_exists_fraction=existing / trials,
                pm_count_histogram=dict(sorted(counts.items())),
            )
        )
    return reports


def network_state(g: ExperimentGraph, p: float, *, override_limits: bool = False) -> QuantumState:
    """Unnormalized first-order coincidence terms: every cover amplitude is
    scaled by p^(pairs), one factor per firing crystal."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"pair probability must lie in (0, 1], got {p}")
    if g.measured:
        raise DomainError("network amplitudes are defined for unmeasured graphs")
    if len(g.vertices) % 2 != 0:
        raise DomainError("odd path count: no full coincidence is possible")
    weight = p ** (len(g.vertices) // 2)
    terms: dict[tuple[int, ...], complex] = {}
    for ket, amp in iter_cover_terms(g, override_limits=override_limits):
        terms[ket] = terms.get(ket, 0j) + amp * weight
    return QuantumState(terms).pruned()


def network_amplitude(g: ExperimentGraph, p: float, *, override_limits: bool = False) -> complex:
    """Lowest-order 2n-fold coincidence amplitude:
    p^n * sum over perfect matchings of the edge-amplitude products."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"pair probability must lie in (0, 1], got {p}")
    if g.measured:
        raise DomainError("network amplitudes are defined for unmeasured graphs")
    if len(g.vertices) % 2 != 0:
        raise DomainError("odd path count: no full coincidence is possible")
    total = 0j
    for _, amp in iter_cover_terms(g, override_limits=override_limits):
        total += amp
    return total * p ** (len(g.vertices) // 2)


def report_csv_rows(reports: list[EnsembleReport]) -> list[tuple]:
    """Rows (p, fraction, count, frequency), one per histogram bucket."""
    rows = []
    for r in reports:
        for count, freq in sorted(r.pm_count_histogram.items()):
            rows.append((r.p, r.pm_exists_fraction, count, freq))
    return rows
