"""Graph-to-bench compilation.

A setup plan lists the detectors, then the crystals grouped into ordered
layers such that no two crystals in one layer share a path, plus the
chronological wiring of every path through its crystals.  Existing layer
tags are kept verbatim when they already form matchings; untagged crystals
are slotted greedily in edge-id order, which needs at most 2*Delta - 1
layers.  ``plan_to_graph`` inverts the construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DomainError, GraphParseError
from .graph import Edge, ExperimentGraph

__all__ = [
    "Crystal",
    "SetupPlan",
    "synthesize_setup",
    "plan_to_graph",
    "serialize_plan",
    "parse_plan",
    "render_plan",
]


@dataclass(frozen=True)
class Crystal:
    edge_id: str
    u: str
    v: str
    mode_u: int
    mode_v: int
    amp_mag: float
    amp_phase_rad: float


@dataclass
class SetupPlan:
    detectors: tuple[str, ...]
    layers: tuple[tuple[Crystal, ...], ...]
    wiring: dict[str, tuple[str, ...]]


def _crystal(e: Edge) -> Crystal:
    return Crystal(e.id, e.u, e.v, e.mode_u, e.mode_v, e.amp_mag, e.amp_phase_rad)


def _wiring(detectors, layers) -> dict[str, tuple[str, ...]]:
    out = {}
    for path in detectors:
        hits = []
        for layer in layers:
            for c in layer:
                if path in (c.u, c.v):
                    hits.append(c.edge_id)
        out[path] = tuple(hits)
    return out


def synthesize_setup(g: ExperimentGraph) -> SetupPlan:
    """Compile a graph into ordered crystal layers plus path wiring."""
    if g.measured:
        raise DomainError(
            "graphs with measured vertices compile to two plans plus a joint "
            "measurement; synthesize each half separately"
        )

    occupied: dict[int, set[str]] = {}
    assigned: dict[str, int] = {}
    for e in sorted(g.edges, key=lambda e: e.id):
        if e.layer is None:
            continue
        paths = occupied.setdefault(e.layer, set())
        if e.u in paths or e.v in paths:
            raise DomainError(
                f"pre-assigned layer {e.layer} has two crystals sharing a path "
                f"(at edge {e.id!r})",
                reason="layer-conflict",
            )
        paths.update((e.u, e.v))
        assigned[e.id] = e.layer

    for e in sorted(g.edges, key=lambda e: e.id):
        if e.id in assigned:
            continue
        tag = 0
        while True:
            paths = occupied.setdefault(tag, set())
            if e.u not in paths and e.v not in paths:
                paths.update((e.u, e.v))
                assigned[e.id] = tag
                break
            tag += 1

    by_id = {e.id: e for e in g.edges}
    layers = tuple(
        tuple(_crystal(by_id[eid]) for eid in sorted(ids))
        for tag, ids in sorted(
            _group(assigned).items()
        )
    )
    return SetupPlan(tuple(g.vertices), layers, _wiring(g.vertices, layers))


def _group(assigned: dict[str, int]) -> dict[int, list[str]]:
    groups: dict[int, list[str]] = {}
    for edge_id, tag in assigned.items():
        groups.setdefault(tag, []).append(edge_id)
    return groups


def plan_to_graph(plan: SetupPlan) -> ExperimentGraph:
    """Rebuild the experiment graph; layer tags become the plan's layer
    positions.  The wiring section is validated against the layers."""
    edges = []
    for pos, layer in enumerate(plan.layers):
        used_paths: set[str] = set()
        for c in layer:
            if c.u in used_paths or c.v in used_paths:
                raise DomainError(
                    f"layer {pos} has two crystals sharing a path (at {c.edge_id!r})",
                    reason="layer-conflict",
                )
            used_paths.update((c.u, c.v))
            edges.append(
                Edge(
                    id=c.edge_id,
                    u=c.u,
                    v=c.v,
                    mode_u=c.mode_u,
                    mode_v=c.mode_v,
                    amp_mag=c.amp_mag,
                    amp_phase_rad=c.amp_phase_rad,
                    layer=pos,
                )
            )
    g = ExperimentGraph(plan.detectors, edges)
    expected = _wiring(plan.detectors, plan.layers)
    if dict(plan.wiring) != expected:
        raise DomainError("wiring section disagrees with the layers", reason="wiring-inconsistent")
    return g


# ---------------------------------------------------------------------------
# plan files
# ---------------------------------------------------------------------------

def serialize_plan(plan: SetupPlan) -> str:
    doc = {
        "detectors": list(plan.detectors),
        "layers": [
            [
                {
                    "id": c.edge_id,
                    "u": c.u,
                    "v": c.v,
                    "mode_u": c.mode_u,
                    "mode_v": c.mode_v,
                    "amp_mag": c.amp_mag,
                    "amp_phase_rad": c.amp_phase_rad,
                }
                for c in layer
            ]
            for layer in plan.layers
        ],
        "wiring": {path: list(ids) for path, ids in plan.wiring.items()},
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_plan(text: str) -> SetupPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc}", location="<plan>") from None
    if not isinstance(doc, dict) or not {"detectors", "layers", "wiring"} <= set(doc):
        raise GraphParseError(
            "plan must be an object with detectors, layers and wiring",
            location="<plan>",
        )
    detectors = doc["detectors"]
    if not isinstance(detectors, list) or any(not isinstance(d, str) for d in detectors):
        raise GraphParseError("detectors must be a list of names", location="detectors")
    layers = []
    for i, raw_layer in enumerate(doc["layers"]):
        if not isinstance(raw_layer, list):
            raise GraphParseError("layer must be a list of crystals", location=f"layers[{i}]")
        layer = []
        for j, rec in enumerate(raw_layer):
            loc = f"layers[{i}][{j}]"
            if not isinstance(rec, dict) or not {"id", "u", "v"} <= set(rec):
                raise GraphParseError("crystal must carry id, u and v", location=loc)
            layer.append(
                Crystal(
                    rec["id"],
                    rec["u"],
                    rec["v"],
                    rec.get("mode_u", 0),
                    rec.get("mode_v", 0),
                    float(rec.get("amp_mag", 1.0)),
                    float(rec.get("amp_phase_rad", 0.0)),
                )
            )
        layers.append(tuple(layer))
    wiring = doc["wiring"]
    if not isinstance(wiring, dict):
        raise GraphParseError("wiring must map paths to crystal lists", location="wiring")
    return SetupPlan(
        tuple(detectors),
        tuple(layers),
        {path: tuple(ids) for path, ids in wiring.items()},
    )


def render_plan(plan: SetupPlan) -> str:
    """Human-readable bench sheet: detectors, then crystals layer by layer."""
    lines = ["detectors: " + ", ".join(plan.detectors)]
    for pos, layer in enumerate(plan.layers):
        lines.append(f"layer {pos}:")
        for c in layer:
            amp = f"{c.amp_mag:g}"
            if c.amp_phase_rad:
                amp += f" @ {c.amp_phase_rad:g} rad"
            lines.append(
                f"  crystal {c.edge_id}: paths {c.u}-{c.v}, "
                f"modes ({c.mode_u},{c.mode_v}), amplitude {amp}"
            )
    lines.append("wiring:")
    for path in plan.detectors:
        chain = " -> ".join(plan.wiring.get(path, ())) or "(none)"
        lines.append(f"  {path}: {chain}")
    return "\n".join(lines) + "\n"
