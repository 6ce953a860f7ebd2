"""Multigraph model of photon-pair experiments.

Vertices are optical paths ending in detectors; edges are pair sources
(crystals).  Each edge carries one mode label per endpoint plus a complex
amplitude, stored as magnitude and phase (radians) so that documents
round-trip bit-exactly.  Parallel edges are first-class: two crystals may
pump the same pair of paths.  Self-loops are forbidden, since a pair source
always feeds two distinct paths.

Graphs are immutable values.  All functions in this module are pure and
safe to call concurrently.

File format (UTF-8 JSON): top-level object with

* ``vertices``  - list of unique names; declaration order fixes ket order,
* ``measured``  - optional list of vertex names covered twice per
  coincidence (created by :func:`merge_graphs`),
* ``edges``     - list of objects ``{id, u, v, mode_u, mode_v, amp_mag,
  amp_phase_rad[, layer]}``; ``id`` may be omitted and is then generated
  as ``e<position>``.
"""

from __future__ import annotations

import cmath
import json
import math
import random
import string
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple

from .errors import DomainError, GraphParseError, NotBipartiteError

__all__ = [
    "Edge",
    "ExperimentGraph",
    "Biadjacency",
    "parse_graph",
    "serialize_graph",
    "merge_graphs",
    "random_graph",
    "complete_graph",
    "to_dot",
    "vertex_names",
]


@dataclass(frozen=True)
class Edge:
    """One pair source. ``mode_u``/``mode_v`` are the mode labels the photons
    carry into paths ``u``/``v``; the amplitude defaults to 1 at phase 0."""

    id: str
    u: str
    v: str
    mode_u: int = 0
    mode_v: int = 0
    amp_mag: float = 1.0
    amp_phase_rad: float = 0.0
    layer: int | None = None

    def __post_init__(self):
        if not self.id or not isinstance(self.id, str):
            raise DomainError(f"edge id must be a nonempty string, got {self.id!r}")
        if self.u == self.v:
            raise DomainError(f"edge {self.id!r} is a self-loop on {self.u!r}", reason="self-loop")
        for label, mode in (("mode_u", self.mode_u), ("mode_v", self.mode_v)):
            if not isinstance(mode, int) or isinstance(mode, bool) or mode < 0:
                raise DomainError(f"edge {self.id!r}: {label} must be a nonnegative integer")
        if not (math.isfinite(self.amp_mag) and math.isfinite(self.amp_phase_rad)):
            raise DomainError(f"edge {self.id!r}: amplitude must be finite")
        if self.amp_mag < 0:
            raise DomainError(f"edge {self.id!r}: amplitude magnitude must be >= 0")
        if self.layer is not None and (
            not isinstance(self.layer, int) or isinstance(self.layer, bool) or self.layer < 0
        ):
            raise DomainError(f"edge {self.id!r}: layer must be a nonnegative integer")

    @property
    def amplitude(self) -> complex:
        return cmath.rect(self.amp_mag, self.amp_phase_rad)

    def endpoints(self) -> tuple[str, str]:
        return (self.u, self.v)

    def other(self, vertex: str) -> str:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise DomainError(f"vertex {vertex!r} is not an endpoint of edge {self.id!r}")

    def mode_at(self, vertex: str) -> int:
        if vertex == self.u:
            return self.mode_u
        if vertex == self.v:
            return self.mode_v
        raise DomainError(f"vertex {vertex!r} is not an endpoint of edge {self.id!r}")


class Biadjacency(NamedTuple):
    """Multiplicity matrix of a bipartite graph: ``entries[i][j]`` counts the
    parallel edges between ``rows[i]`` and ``cols[j]``."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]


class ExperimentGraph:
    """Immutable experiment graph: ordered vertices, labeled multigraph edges,
    and the set of measured (merged) vertices."""

    __slots__ = ("vertices", "edges", "measured", "_index", "_by_id")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge] = (), measured: Iterable[str] = ()):
        vertices = tuple(vertices)
        seen: set[str] = set()
        for name in vertices:
            if not name or not isinstance(name, str):
                raise DomainError(f"vertex name must be a nonempty string, got {name!r}")
            if name in seen:
                raise DomainError(f"duplicate vertex name {name!r}", reason="duplicate-vertex")
            seen.add(name)
        index = {name: i for i, name in enumerate(vertices)}

        measured = frozenset(measured)
        for name in measured:
            if name not in index:
                raise DomainError(f"measured vertex {name!r} is not declared")

        normalized: list[Edge] = []
        ids: set[str] = set()
        for e in edges:
            if e.id in ids:
                raise DomainError(f"duplicate edge id {e.id!r}", reason="duplicate-edge")
            ids.add(e.id)
            for end in (e.u, e.v):
                if end not in index:
                    raise DomainError(f"edge {e.id!r}: unknown endpoint {end!r}", reason="unknown-endpoint")
            if index[e.u] > index[e.v]:
                e = replace(e, u=e.v, v=e.u, mode_u=e.mode_v, mode_v=e.mode_u)
            normalized.append(e)

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "measured", measured)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_by_id", {e.id: e for e in normalized})

    def __setattr__(self, name, value):  # pragma: no cover - guards misuse
        raise AttributeError("ExperimentGraph is immutable")

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DomainError(f"unknown vertex {name!r}") from None

    def edge_by_id(self, edge_id: str) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise DomainError(f"unknown edge id {edge_id!r}", reason="unknown-edge") from None

    def incident(self, name: str) -> tuple[Edge, ...]:
        self.index(name)
        return tuple(e for e in self.edges if name in (e.u, e.v))

    def degree(self, name: str) -> int:
        return len(self.incident(name))

    @property
    def ket_vertices(self) -> tuple[str, ...]:
        """Non-measured vertices in declaration order; one ket slot each."""
        return tuple(v for v in self.vertices if v not in self.measured)

    def adjacency(self) -> list[list[int]]:
        """Symmetric multiplicity matrix with zero diagonal, vertex order =
        declaration order."""
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for e in self.edges:
            i, j = self._index[e.u], self._index[e.v]
            m[i][j] += 1
            m[j][i] += 1
        return m

    def bipartition(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Two-color the graph; the lowest-index vertex of every component
        lands in part X.  Raises :class:`NotBipartiteError` with an odd-cycle
        witness otherwise."""
        color: dict[str, int] = {}
        parent: dict[str, str | None] = {}
        neighbors: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            neighbors[e.u].append(e.v)
            neighbors[e.v].append(e.u)
        for adj in neighbors.values():
            adj.sort(key=self._index.__getitem__)

        for start in self.vertices:
            if start in color:
                continue
            color[start] = 0
            parent[start] = None
            queue = [start]
            while queue:
                v = queue.pop(0)
                for w in neighbors[v]:
                    if w not in color:
                        color[w] = 1 - color[v]
                        parent[w] = v
                        queue.append(w)
                    elif color[w] == color[v] and w != v:
                        cycle = _odd_cycle(parent, v, w)
                        raise NotBipartiteError(
                            f"graph is not bipartite: odd cycle {'-'.join(cycle)}",
                            odd_cycle=cycle,
                        )
        part_x = tuple(v for v in self.vertices if color[v] == 0)
        part_y = tuple(v for v in self.vertices if color[v] == 1)
        return part_x, part_y

    def biadjacency(self, parts: tuple[Iterable[str], Iterable[str]] | None = None) -> Biadjacency:
        """Multiplicity matrix over a bipartition (auto-detected by default)."""
        if parts is None:
            rows, cols = self.bipartition()
        else:
            rows = tuple(sorted(parts[0], key=self.index))
            cols = tuple(sorted(parts[1], key=self.index))
            if sorted(rows + cols) != sorted(self.vertices):
                raise DomainError("bipartition parts must cover every vertex exactly once")
        row_pos = {v: i for i, v in enumerate(rows)}
        col_pos = {v: i for i, v in enumerate(cols)}
        entries = [[0] * len(cols) for _ in rows]
        for e in self.edges:
            if e.u in row_pos and e.v in col_pos:
                entries[row_pos[e.u]][col_pos[e.v]] += 1
            elif e.v in row_pos and e.u in col_pos:
                entries[row_pos[e.v]][col_pos[e.u]] += 1
            else:
                raise NotBipartiteError(
                    f"edge {e.id!r} joins two vertices of the same part"
                )
        return Biadjacency(rows, cols, tuple(tuple(r) for r in entries))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExperimentGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.measured == other.measured
            and sorted(self.edges, key=lambda e: e.id) == sorted(other.edges, key=lambda e: e.id)
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.measured, tuple(sorted(self.edges, key=lambda e: e.id))))

    def __repr__(self) -> str:
        return (
            f"ExperimentGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
            f"measured={sorted(self.measured)})"
        )


def _odd_cycle(parent: dict[str, str | None], v: str, w: str) -> tuple[str, ...]:
    """Reconstruct the odd cycle closed by the conflicting edge (v, w)."""
    ancestors = []
    node: str | None = v
    while node is not None:
        ancestors.append(node)
        node = parent[node]
    ancestor_set = set(ancestors)
    path_w = []
    node = w
    while node not in ancestor_set:
        path_w.append(node)
        node = parent[node]  # type: ignore[assignment]
    meet = node
    path_v = ancestors[: ancestors.index(meet) + 1]
    return tuple(path_v + list(reversed(path_w)))


# ---------------------------------------------------------------------------
# document parsing / canonical serialization
# ---------------------------------------------------------------------------

_EDGE_KEYS = {"id", "u", "v", "mode_u", "mode_v", "amp_mag", "amp_phase_rad", "layer"}


def _expect(condition: bool, message: str, location: str):
    if not condition:
        raise GraphParseError(message, location=location)


def _mode_value(raw, location: str) -> int:
    _expect(isinstance(raw, int) and not isinstance(raw, bool), "mode must be an integer", location)
    _expect(raw >= 0, "mode must be nonnegative", location)
    return raw


def _float_value(raw, location: str) -> float:
    _expect(isinstance(raw, (int, float)) and not isinstance(raw, bool), "expected a number", location)
    value = float(raw)
    _expect(math.isfinite(value), "number must be finite", location)
    return value


def parse_graph(text: str) -> ExperimentGraph:
    """Parse a graph document; errors carry the location of the bad field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc}", location="<document>") from None
    _expect(isinstance(doc, dict), "top level must be an object", "<document>")
    unknown = set(doc) - {"vertices", "measured", "edges"}
    _expect(not unknown, f"unknown keys {sorted(unknown)}", "<document>")

    raw_vertices = doc.get("vertices", [])
    _expect(isinstance(raw_vertices, list), "vertices must be a list", "vertices")
    vertices: list[str] = []
    for i, name in enumerate(raw_vertices):
        _expect(isinstance(name, str) and name != "", "vertex name must be a nonempty string", f"vertices[{i}]")
        _expect(name not in vertices, f"duplicate vertex {name!r}", f"vertices[{i}]")
        vertices.append(name)

    raw_measured = doc.get("measured", [])
    _expect(isinstance(raw_measured, list), "measured must be a list", "measured")
    for i, name in enumerate(raw_measured):
        _expect(name in vertices, f"measured vertex {name!r} is not declared", f"measured[{i}]")

    raw_edges = doc.get("edges", [])
    _expect(isinstance(raw_edges, list), "edges must be a list", "edges")
    edges: list[Edge] = []
    ids: set[str] = set()
    for i, rec in enumerate(raw_edges):
        loc = f"edges[{i}]"
        _expect(isinstance(rec, dict), "edge must be an object", loc)
        unknown = set(rec) - _EDGE_KEYS
        _expect(not unknown, f"unknown keys {sorted(unknown)}", loc)
        edge_id = rec.get("id", f"e{i}")
        _expect(isinstance(edge_id, str) and edge_id != "", "id must be a nonempty string", f"{loc}.id")
        _expect(edge_id not in ids, f"duplicate edge id {edge_id!r}", f"{loc}.id")
        ids.add(edge_id)
        for key in ("u", "v"):
            _expect(key in rec, f"missing endpoint {key!r}", loc)
            _expect(rec[key] in vertices, f"unknown endpoint {rec[key]!r}", f"{loc}.{key}")
        _expect(rec["u"] != rec["v"], f"self-loop on {rec['u']!r}", loc)
        layer = rec.get("layer")
        if layer is not None:
            _expect(isinstance(layer, int) and not isinstance(layer, bool) and layer >= 0,
                    "layer must be a nonnegative integer", f"{loc}.layer")
        edges.append(Edge(
            id=edge_id,
            u=rec["u"],
            v=rec["v"],
            mode_u=_mode_value(rec.get("mode_u", 0), f"{loc}.mode_u"),
            mode_v=_mode_value(rec.get("mode_v", 0), f"{loc}.mode_v"),
            amp_mag=_float_value(rec.get("amp_mag", 1.0), f"{loc}.amp_mag"),
            amp_phase_rad=_float_value(rec.get("amp_phase_rad", 0.0), f"{loc}.amp_phase_rad"),
            layer=layer,
        ))
    return ExperimentGraph(vertices, edges, raw_measured)


def _edge_record(e: Edge) -> dict:
    rec = {
        "id": e.id,
        "u": e.u,
        "v": e.v,
        "mode_u": e.mode_u,
        "mode_v": e.mode_v,
        "amp_mag": e.amp_mag,
        "amp_phase_rad": e.amp_phase_rad,
    }
    if e.layer is not None:
        rec["layer"] = e.layer
    return rec


def serialize_graph(g: ExperimentGraph) -> str:
    """Canonical form: vertices in declaration order, edges sorted by id.
    Byte-identical across runs for equal graphs."""
    doc: dict = {"vertices": list(g.vertices)}
    if g.measured:
        doc["measured"] = [v for v in g.vertices if v in g.measured]
    doc["edges"] = [_edge_record(e) for e in sorted(g.edges, key=lambda e: e.id)]
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def merge_graphs(
    g1: ExperimentGraph,
    g2: ExperimentGraph,
    pairs: Iterable[tuple[str, str]],
) -> ExperimentGraph:
    """Disjoint union of two experiments with each ``(a, b)`` pair identified
    into one measured vertex (named after ``a``).  This models detecting the
    two merged paths jointly, which swaps entanglement between the halves."""
    pairs = list(pairs)
    first_members = [a for a, _ in pairs]
    second_members = [b for _, b in pairs]
    for name, graph in [(a, g1) for a, _ in pairs] + [(b, g2) for _, b in pairs]:
        graph.index(name)  # raises on unknown vertex
        if name in graph.measured:
            raise DomainError(f"vertex {name!r} is already measured and cannot be merged again")
    if len(set(first_members)) != len(first_members) or len(set(second_members)) != len(second_members):
        raise DomainError("a vertex may be named in at most one merge pair", reason="repeated-pair-member")

    rename = {b: a for a, b in pairs}
    kept_g2 = [v for v in g2.vertices if v not in rename]
    clash = set(g1.vertices) & set(kept_g2)
    if clash:
        raise DomainError(f"vertex names {sorted(clash)} appear in both graphs", reason="duplicate-vertex")

    vertices = list(g1.vertices) + kept_g2
    measured = set(g1.measured) | {rename.get(v, v) for v in g2.measured} | {a for a, _ in pairs}

    edges: list[Edge] = list(g1.edges)
    used_ids = {e.id for e in edges}
    for e in g2.edges:
        new_id = e.id
        if new_id in used_ids:
            new_id = f"2:{e.id}"
        if new_id in used_ids:
            raise DomainError(f"cannot namespace colliding edge id {e.id!r}", reason="duplicate-edge")
        used_ids.add(new_id)
        edges.append(replace(e, id=new_id, u=rename.get(e.u, e.u), v=rename.get(e.v, e.v)))
    return ExperimentGraph(vertices, edges, measured)


def vertex_names(n: int) -> tuple[str, ...]:
    """Default path names: a..z, then v26, v27, ..."""
    letters = string.ascii_lowercase
    return tuple(letters[i] if i < 26 else f"v{i}" for i in range(n))


def random_graph(n: int, p: float, seed: int) -> ExperimentGraph:
    """G(n, p) sample: each of the n(n-1)/2 simple edges appears independently
    with probability ``p``.  Deterministic for a fixed seed; modes default to
    (0, 0) and amplitudes to 1."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability must lie in [0, 1], got {p}")
    if n < 0:
        raise DomainError("vertex count must be nonnegative")
    names = vertex_names(n)
    rng = random.Random(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append(Edge(id=f"e{len(edges)}", u=names[i], v=names[j]))
    return ExperimentGraph(names, edges)


def complete_graph(n: int) -> ExperimentGraph:
    """K_n with unit amplitudes, modes (0, 0) and generated edge ids."""
    names = vertex_names(n)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append(Edge(id=f"e{len(edges)}", u=names[i], v=names[j]))
    return ExperimentGraph(names, edges)


def to_dot(g: ExperimentGraph) -> str:
    """Graphviz export; every edge is labeled ``id:(mode_u,mode_v)``."""
    lines = ["graph experiment {"]
    for v in g.vertices:
        attrs = " [peripheries=2]" if v in g.measured else ""
        lines.append(f'  "{v}"{attrs};')
    for e in sorted(g.edges, key=lambda e: e.id):
        lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.id}:({e.mode_u},{e.mode_v})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
