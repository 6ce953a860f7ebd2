"""Perfect matchings and coincidence covers.

A perfect matching is an edge subset covering every vertex exactly once;
it is the graph-side picture of an n-fold coincidence.  Measured (merged)
vertices absorb two photons and must be covered exactly twice; covers of
graphs with measured vertices are called coincidence covers.

Counting perfect matchings is #P-complete, so every operation here is an
exact exponential algorithm behind an explicit scale guard.  The default
guards (24 vertices / 60 edges for enumeration, 10 vertices for exhaustive
subgraph scans) can be overridden by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, ScaleLimitError
from .graph import Edge, ExperimentGraph, vertex_names

__all__ = [
    "Matching",
    "Factorization",
    "LayerReport",
    "enumerate_pm",
    "count_pm_formula",
    "max_disjoint_pms",
    "ghz_dimension_bound",
    "enumerate_factorizations",
    "classify_layers",
    "scan_ghz_dimension",
    "is_coincidence_cover",
    "VERTEX_LIMIT",
    "EDGE_LIMIT",
    "SCAN_VERTEX_LIMIT",
]

# A matching is a sorted tuple of edge ids.
Matching = tuple[str, ...]

VERTEX_LIMIT = 24
EDGE_LIMIT = 60
SCAN_VERTEX_LIMIT = 10


@dataclass(frozen=True)
class Factorization:
    """Partition of the whole edge set into pairwise disjoint matchings."""

    factors: tuple[Matching, ...]


@dataclass(frozen=True)
class LayerReport:
    """Perfect matchings split into those equal to one tagged layer and the
    maverick ones assembled from several layers."""

    layer_matchings: tuple[Matching, ...]
    maverick_matchings: tuple[Matching, ...]


def _check_scale(g: ExperimentGraph, override_limits: bool):
    if override_limits:
        return
    if len(g.vertices) > VERTEX_LIMIT or len(g.edges) > EDGE_LIMIT:
        raise ScaleLimitError(
            f"graph with |V|={len(g.vertices)}, |E|={len(g.edges)} exceeds the "
            f"enumeration guard (|V|<={VERTEX_LIMIT}, |E|<={EDGE_LIMIT}); "
            "pass override_limits=True to force"
        )


def _sorted_edges(g: ExperimentGraph) -> list[Edge]:
    return sorted(g.edges, key=lambda e: e.id)


def _iter_covers(g: ExperimentGraph) -> Iterator[tuple[int, ...]]:
    """Yield coincidence covers as tuples of indices into the id-sorted edge
    list.  Branches on include/exclude decisions for the lowest-index edge at
    the lowest uncovered vertex, so every cover is produced exactly once."""
    edges = _sorted_edges(g)
    n = len(g.vertices)
    need = [2 if v in g.measured else 1 for v in g.vertices]
    index = {v: i for i, v in enumerate(g.vertices)}
    incident: list[list[int]] = [[] for _ in range(n)]
    for k, e in enumerate(edges):
        incident[index[e.u]].append(k)
        incident[index[e.v]].append(k)

    ends = [(index[e.u], index[e.v]) for e in edges]
    state = [0] * len(edges)  # 0 undecided, 1 chosen, -1 banned
    chosen: list[int] = []

    def candidates(v: int) -> list[int]:
        out = []
        for k in incident[v]:
            if state[k] != 0:
                continue
            a, b = ends[k]
            w = b if a == v else a
            if need[w] > 0:
                out.append(k)
        return out

    def rec() -> Iterator[tuple[int, ...]]:
        v = -1
        for i in range(n):
            if need[i] > 0:
                v = i
                break
        if v < 0:
            yield tuple(sorted(chosen))
            return
        cands = candidates(v)
        if len(cands) < need[v]:
            return
        k = cands[0]
        a, b = ends[k]
        # include k
        state[k] = 1
        chosen.append(k)
        need[a] -= 1
        need[b] -= 1
        yield from rec()
        need[a] += 1
        need[b] += 1
        chosen.pop()
        # exclude k
        state[k] = -1
        if len(cands) - 1 >= need[v]:
            yield from rec()
        state[k] = 0

    yield from rec()


def iter_cover_edges(
    g: ExperimentGraph, *, override_limits: bool = False
) -> Iterator[tuple[Edge, ...]]:
    """Yield covers as tuples of Edge objects, id-sorted within a cover."""
    _check_scale(g, override_limits)
    edges = _sorted_edges(g)
    for cover in _iter_covers(g):
        yield tuple(edges[k] for k in cover)


def enumerate_pm(g: ExperimentGraph, *, override_limits: bool = False) -> list[Matching]:
    """All perfect matchings (coincidence covers when vertices are measured),
    duplicate-free and sorted lexicographically by edge-id tuple."""
    _check_scale(g, override_limits)
    edges = _sorted_edges(g)
    found = [tuple(edges[k].id for k in cover) for cover in _iter_covers(g)]
    found.sort()
    return found


def is_coincidence_cover(g: ExperimentGraph, edge_ids) -> bool:
    """Exact degree check: one incidence per plain vertex, two per measured."""
    ids = list(edge_ids)
    if len(set(ids)) != len(ids):
        return False
    count = {v: 0 for v in g.vertices}
    for edge_id in ids:
        e = g.edge_by_id(edge_id)
        count[e.u] += 1
        count[e.v] += 1
    return all(count[v] == (2 if v in g.measured else 1) for v in g.vertices)


def count_pm_formula(n: int) -> int:
    """Exact number of perfect matchings of the complete graph K_{2n}:
    (2n)! / (n! 2^n)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"half vertex count must be a positive integer, got {n!r}")
    return math.factorial(2 * n) // (math.factorial(n) * 2**n)


def max_disjoint_pms(
    g: ExperimentGraph, *, override_limits: bool = False
) -> tuple[int, list[Matching]]:
    """Largest pairwise edge-disjoint subset of all perfect matchings.

    Exact backtracking over the enumerated matching list with bitset edge
    masks; among maximum witnesses the lexicographically first one is
    returned."""
    pms = enumerate_pm(g, override_limits=override_limits)
    edge_pos = {e.id: i for i, e in enumerate(_sorted_edges(g))}
    masks = []
    for pm in pms:
        mask = 0
        for edge_id in pm:
            mask |= 1 << edge_pos[edge_id]
        masks.append(mask)

    best: list[int] = []

    def dfs(start: int, used: int, chosen: list[int]):
        nonlocal best
        if len(chosen) > len(best):
            best = chosen.copy()
        for i in range(start, len(masks)):
            if len(chosen) + (len(masks) - i) <= len(best):
                break
            if masks[i] & used:
                continue
            chosen.append(i)
            dfs(i + 1, used | masks[i], chosen)
            chosen.pop()

    dfs(0, 0, [])
    return len(best), [pms[i] for i in best]


def ghz_dimension_bound(n: int) -> int:
    """Largest d for which an n-photon, d-dimensional GHZ state is reachable
    with a simple graph: 3 for n = 4, otherwise 2 (n even, n >= 4)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 4 or n % 2 != 0:
        raise DomainError(f"photon count must be an even integer >= 4, got {n!r}")
    return 3 if n == 4 else 2


def scan_ghz_dimension(
    n: int, *, override_limits: bool = False
) -> tuple[int, ExperimentGraph | None]:
    """Exhaustively scan every simple graph on ``n`` vertices and return the
    maximum number of perfect matchings over graphs whose matchings are all
    pairwise edge-disjoint (the graphs whose state is GHZ-shaped), together
    with one witness graph.

    Graphs with overlapping matchings carry maverick terms and are skipped:
    only the all-disjoint ones produce GHZ states, so this is the brute-force
    check of the dimension bound."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 2 or n % 2 != 0:
        raise DomainError(f"vertex count must be an even integer >= 2, got {n!r}")
    if not override_limits and n > SCAN_VERTEX_LIMIT:
        raise ScaleLimitError(
            f"subgraph scan on {n} vertices exceeds the guard (n<={SCAN_VERTEX_LIMIT})"
        )

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pair_pos = {pq: k for k, pq in enumerate(pairs)}

    # All perfect pairings of the n vertices, as bitmasks over pair slots.
    def pairings(avail: tuple[int, ...]):
        if not avail:
            yield 0
            return
        first = avail[0]
        for idx in range(1, len(avail)):
            partner = avail[idx]
            rest = avail[1:idx] + avail[idx + 1:]
            bit = 1 << pair_pos[(first, partner)]
            for mask in pairings(rest):
                yield bit | mask

    pm_masks = list(pairings(tuple(range(n))))
    best_d = 0
    best_mask = None
    for sub in range(1 << len(pairs)):
        present = [m for m in pm_masks if m & sub == m]
        if len(present) <= best_d:
            continue
        disjoint = True
        for i in range(len(present)):
            for j in range(i + 1, len(present)):
                if present[i] & present[j]:
                    disjoint = False
                    break
            if not disjoint:
                break
        if disjoint:
            best_d = len(present)
            best_mask = sub

    witness = None
    if best_mask is not None:
        names = vertex_names(n)
        edges = []
        for k, (i, j) in enumerate(pairs):
            if best_mask >> k & 1:
                edges.append(Edge(id=f"e{len(edges)}", u=names[i], v=names[j]))
        witness = ExperimentGraph(names, edges)
    return best_d, witness


def enumerate_factorizations(
    g: ExperimentGraph, *, override_limits: bool = False
) -> list[Factorization]:
    """All unordered partitions of the edge set into perfect matchings.

    Requires a regular graph (every 1-factorizable graph is).  Partitions are
    built by always covering the lowest-id unused edge, so each one appears
    exactly once, in deterministic order."""
    degrees = [g.degree(v) for v in g.vertices]
    if degrees and len(set(degrees)) != 1:
        raise DomainError("graph is not regular; a 1-factorization cannot exist")
    if g.measured:
        raise DomainError("factorizations are defined for unmeasured graphs")

    pms = enumerate_pm(g, override_limits=override_limits)
    edge_ids = [e.id for e in _sorted_edges(g)]
    pos = {edge_id: i for i, edge_id in enumerate(edge_ids)}
    masks = []
    for pm in pms:
        mask = 0
        for edge_id in pm:
            mask |= 1 << pos[edge_id]
        masks.append(mask)
    full = (1 << len(edge_ids)) - 1

    out: list[Factorization] = []
    chosen: list[int] = []

    def rec(used: int):
        if used == full:
            out.append(Factorization(tuple(pms[i] for i in chosen)))
            return
        # branch on matchings containing the lowest uncovered edge
        pos_bit = (~used & full) & -(~used & full)
        for i, mask in enumerate(masks):
            if mask & pos_bit and not mask & used:
                chosen.append(i)
                rec(used | mask)
                chosen.pop()

    if edge_ids:
        rec(0)
    elif not g.vertices:
        out.append(Factorization(()))
    return out


def classify_layers(g: ExperimentGraph, *, override_limits: bool = False) -> LayerReport:
    """Split all perfect matchings into layer matchings (equal to one tagged
    layer) and maverick matchings (mixing crystals from several layers)."""
    untagged = [e.id for e in g.edges if e.layer is None]
    if untagged:
        raise DomainError(f"edges {sorted(untagged)} carry no layer tag")
    groups: dict[int, list[str]] = {}
    for e in g.edges:
        groups.setdefault(e.layer, []).append(e.id)
    for tag in sorted(groups):
        if not is_coincidence_cover(g, groups[tag]):
            raise DomainError(f"layer {tag} is not a perfect matching", reason="bad-layer")

    pms = enumerate_pm(g, override_limits=override_limits)
    layer_sets = {frozenset(ids): tag for tag, ids in groups.items()}
    layer_matchings = sorted(
        (pm for pm in pms if frozenset(pm) in layer_sets),
        key=lambda pm: layer_sets[frozenset(pm)],
    )
    mavericks = [pm for pm in pms if frozenset(pm) not in layer_sets]
    return LayerReport(tuple(layer_matchings), tuple(mavericks))
