"""Post-selected multiphoton states as superpositions of coincidence covers.

Every cover contributes the product of its edge amplitudes to the ket whose
mode letters the cover's edge labels induce.  A measured vertex must receive
the same mode from both of its cover edges (projection onto the sum of
|i,i> outcomes of the joint measurement, all outcome phases fixed to +1) and
is dropped from the ket.  Kets list the non-measured vertices in declaration
order.

Amplitudes below ``AMP_TOL`` are pruned; state comparisons fix the global
phase by rotating the first nonzero amplitude (in ket order) onto the
positive real axis.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterator

from .errors import DomainError, FullyFrustratedError, GraphParseError
from .graph import Edge, ExperimentGraph, vertex_names
from .matching import iter_cover_edges

__all__ = [
    "AMP_TOL",
    "Ket",
    "QuantumState",
    "state_from_graph",
    "iter_cover_terms",
    "is_ghz_like",
    "states_equal",
    "verify_target",
    "search_graph_for_state",
    "frustration_scan",
    "parse_state",
    "serialize_state",
]

AMP_TOL = 1e-9

Ket = tuple[int, ...]


@dataclass
class QuantumState:
    """Map from ket (mode per non-measured vertex) to complex amplitude."""

    terms: dict[Ket, complex] = field(default_factory=dict)
    normalized: bool = False

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.terms.values())

    def sorted_terms(self) -> list[tuple[Ket, complex]]:
        return sorted(self.terms.items())

    def pruned(self) -> "QuantumState":
        kept = {k: a for k, a in self.terms.items() if abs(a) > AMP_TOL}
        return QuantumState(kept, self.normalized)

    def canonical(self) -> "QuantumState":
        """Prune, then rotate the global phase so the first surviving
        amplitude (in ket order) is positive real."""
        state = self.pruned()
        for _, amp in state.sorted_terms():
            rotation = abs(amp) / amp
            return QuantumState(
                {k: a * rotation for k, a in state.terms.items()}, state.normalized
            )
        return state


def states_equal(s1: QuantumState, s2: QuantumState, tol: float = AMP_TOL) -> bool:
    """Equality up to global phase: canonical forms match ket-for-ket with
    per-amplitude tolerance ``tol``."""
    a = s1.canonical()
    b = s2.canonical()
    if set(a.terms) != set(b.terms):
        return False
    return all(abs(a.terms[k] - b.terms[k]) <= tol for k in a.terms)


def iter_cover_terms(
    g: ExperimentGraph, *, override_limits: bool = False
) -> Iterator[tuple[Ket, complex]]:
    """Yield (ket, amplitude) per coincidence cover, applying the equal-mode
    projection at measured vertices.  Terms are not aggregated."""
    ket_vertices = g.ket_vertices
    for cover in iter_cover_edges(g, override_limits=override_limits):
        modes: dict[str, int] = {}
        consistent = True
        amp = complex(1.0)
        for e in cover:
            amp *= e.amplitude
            for vertex, mode in ((e.u, e.mode_u), (e.v, e.mode_v)):
                if vertex in modes and modes[vertex] != mode:
                    consistent = False
                    break
                modes[vertex] = mode
            if not consistent:
                break
        if not consistent:
            continue
        yield tuple(modes[v] for v in ket_vertices), amp


def state_from_graph(
    g: ExperimentGraph, normalize: bool = False, *, override_limits: bool = False
) -> QuantumState:
    """Coherent superposition of all coincidence covers of ``g``.

    Cover amplitudes summing to (numerically) zero for a ket cancel out and
    the ket is dropped.  With ``normalize`` the total weight is scaled to 1;
    if everything cancelled there is nothing to normalize and a
    fully-frustrated error is raised."""
    terms: dict[Ket, complex] = {}
    for ket, amp in iter_cover_terms(g, override_limits=override_limits):
        terms[ket] = terms.get(ket, 0j) + amp
    state = QuantumState(terms).pruned()
    if normalize:
        norm = math.sqrt(state.norm_sq())
        if norm <= AMP_TOL:
            raise FullyFrustratedError(
                "all coincidence amplitudes cancel; the state cannot be normalized"
            )
        state = QuantumState({k: a / norm for k, a in state.terms.items()}, normalized=True)
    return state


def is_ghz_like(state: QuantumState) -> bool:
    """True iff all term magnitudes are equal (within tolerance) and every
    pair of kets differs at every position."""
    if not state.terms:
        raise DomainError("state has no terms")
    kets = sorted(state.terms)
    mags = [abs(state.terms[k]) for k in kets]
    if max(mags) - min(mags) > AMP_TOL:
        return False
    for a, b in combinations(kets, 2):
        if any(x == y for x, y in zip(a, b)):
            return False
    return True


def verify_target(
    g: ExperimentGraph, target: QuantumState, *, override_limits: bool = False
) -> bool:
    """Does the normalized state of ``g`` equal ``target`` up to a global
    phase (1e-9 per amplitude)?"""
    try:
        state = state_from_graph(g, normalize=True, override_limits=override_limits)
    except FullyFrustratedError:
        return not target.pruned().terms
    return states_equal(state, target)


def frustration_scan(
    g: ExperimentGraph,
    edge_id: str,
    phases,
    *,
    override_limits: bool = False,
) -> list[tuple[float, float]]:
    """Sweep one edge's amplitude phase and report the total unnormalized
    intensity (sum of |amplitude|^2) at each value."""
    g.edge_by_id(edge_id)
    out = []
    for phase in phases:
        phase = float(phase)
        edges = [
            replace(e, amp_phase_rad=phase) if e.id == edge_id else e for e in g.edges
        ]
        varied = ExperimentGraph(g.vertices, edges, g.measured)
        state = state_from_graph(varied, override_limits=override_limits)
        out.append((phase, state.norm_sq()))
    return out


# ---------------------------------------------------------------------------
# target-state search over small multigraphs
# ---------------------------------------------------------------------------

def _pairings(items: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    """All perfect pairings of ``items``, deterministic order."""
    if not items:
        yield ()
        return
    first = items[0]
    for idx in range(1, len(items)):
        partner = items[idx]
        rest = items[1:idx] + items[idx + 1:]
        for tail in _pairings(rest):
            yield ((first, partner),) + tail


def search_graph_for_state(
    target: QuantumState,
    *,
    max_edges: int = 8,
    max_mode: int = 3,
    max_parallel: int = 4,
) -> ExperimentGraph | None:
    """Exhaustive search for a unit-amplitude multigraph whose normalized
    state equals ``target``; returns None when the bounded space is
    exhausted.

    Search space: graphs with at most one edge per (vertex pair, mode pair),
    so parallel edges differ in their mode labels.  Since edge amplitudes are
    all +1, no cancellation can occur: every cover's ket must be a target ket
    and the per-ket cover counts must be proportional to the target
    magnitudes.  Candidates are therefore assembled directly from covers -
    for each ket, a choice of vertex pairings - with the implied edge set
    kept within the bounds, and every candidate is re-verified against the
    target.  Candidates are tried by increasing total cover count and, within
    one level, by canonical edge-set order, so the first hit is
    deterministic."""
    canon = target.canonical()
    kets = sorted(canon.terms)
    if not kets:
        return None
    n = len(kets[0])
    if any(len(k) != n for k in kets) or n == 0 or n % 2 != 0:
        return None
    if max(max(k) for k in kets) > max_mode:
        return None
    # Unit-amplitude covers add up in phase, so target amplitudes must sit on
    # the positive real axis after canonicalization.
    amps = []
    for ket in kets:
        amp = canon.terms[ket]
        if abs(amp.imag) > AMP_TOL or amp.real <= 0:
            return None
        amps.append(amp.real)

    smallest = min(amps)
    ratios = [a / smallest for a in amps]

    names = vertex_names(n)
    all_pairings = list(_pairings(tuple(range(n))))
    pairing_count = len(all_pairings)
    # No graph within the edge budget hosts more distinct covers than this.
    cover_capacity = math.comb(max_edges, n // 2)

    def cover_edges(ket: Ket, pairing) -> frozenset[tuple[int, int, int, int]]:
        return frozenset((i, j, ket[i], ket[j]) for i, j in pairing)

    per_ket_options = [[cover_edges(ket, p) for p in all_pairings] for ket in kets]

    def edge_budget_ok(union: frozenset) -> bool:
        if len(union) > max_edges:
            return False
        per_pair: dict[tuple[int, int], int] = {}
        for i, j, _, _ in union:
            per_pair[(i, j)] = per_pair.get((i, j), 0) + 1
            if per_pair[(i, j)] > max_parallel:
                return False
        return True

    for scale in range(1, pairing_count + 1):
        counts = []
        for r in ratios:
            c = scale * r
            rounded = round(c)
            if abs(c - rounded) > 1e-6 or rounded < 1 or rounded > pairing_count:
                counts = []
                break
            counts.append(rounded)
        if not counts or sum(counts) > cover_capacity:
            continue

        candidates: set[tuple[tuple[int, int, int, int], ...]] = set()

        def extend(idx: int, union: frozenset):
            if idx == len(kets):
                candidates.add(tuple(sorted(union)))
                return
            options = per_ket_options[idx]
            for combo in combinations(range(len(options)), counts[idx]):
                new_union = union.union(*(options[i] for i in combo))
                if edge_budget_ok(new_union):
                    extend(idx + 1, new_union)

        extend(0, frozenset())
        for key in sorted(candidates):
            edges = [
                Edge(id=f"e{k}", u=names[i], v=names[j], mode_u=mi, mode_v=mj)
                for k, (i, j, mi, mj) in enumerate(key)
            ]
            graph = ExperimentGraph(names, edges)
            if verify_target(graph, target):
                return graph
    return None


# ---------------------------------------------------------------------------
# state files
# ---------------------------------------------------------------------------

def serialize_state(state: QuantumState) -> str:
    """Canonical state document: a JSON list of term objects sorted by ket."""
    records = []
    for ket, amp in state.sorted_terms():
        records.append(
            {
                "modes": list(ket),
                "amp_mag": abs(amp),
                "amp_phase_rad": cmath.phase(amp),
            }
        )
    return json.dumps(records, indent=2) + "\n"


def parse_state(text: str) -> QuantumState:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc}", location="<state>") from None
    if not isinstance(doc, list):
        raise GraphParseError("state document must be a list of terms", location="<state>")
    terms: dict[Ket, complex] = {}
    length = None
    for i, rec in enumerate(doc):
        loc = f"terms[{i}]"
        if not isinstance(rec, dict) or "modes" not in rec:
            raise GraphParseError("term must be an object with a modes list", location=loc)
        modes = rec["modes"]
        if not isinstance(modes, list) or any(
            not isinstance(m, int) or isinstance(m, bool) or m < 0 for m in modes
        ):
            raise GraphParseError("modes must be a list of nonnegative integers", location=f"{loc}.modes")
        ket = tuple(modes)
        if length is None:
            length = len(ket)
        elif len(ket) != length:
            raise GraphParseError("all terms must have the same ket length", location=f"{loc}.modes")
        if ket in terms:
            raise GraphParseError(f"duplicate ket {list(ket)}", location=f"{loc}.modes")
        mag = rec.get("amp_mag", 1.0)
        phase = rec.get("amp_phase_rad", 0.0)
        for key, value in (("amp_mag", mag), ("amp_phase_rad", phase)):
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(float(value)):
                raise GraphParseError(f"{key} must be a finite number", location=f"{loc}.{key}")
        if mag < 0:
            raise GraphParseError("amp_mag must be >= 0", location=f"{loc}.amp_mag")
        terms[ket] = cmath.rect(float(mag), float(phase))
    return QuantumState(terms)
