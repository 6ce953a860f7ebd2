"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 scale-limit refusal.
Errors print one line ``error: <reason-code>: <message>`` on stderr.
``--format structured`` switches every subcommand to JSON output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import compiler, counting, feasibility, matching, networks, states
from .errors import PhotonGraphError, ScaleLimitError
from .graph import merge_graphs, parse_graph, serialize_graph, to_dot


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PhotonGraphError(f"cannot read {path}: {exc}", reason="io-error") from None


def _load_graph(path: str):
    return parse_graph(_read(path))


def _amp_text(amp: complex) -> str:
    if abs(amp.imag) < 1e-12:
        return f"{amp.real:.10g}"
    return f"{amp.real:.10g}{amp.imag:+.10g}j"


def _ket_text(ket) -> str:
    return "|" + ",".join(str(m) for m in ket) + ">"


def _emit(args, payload, text_lines):
    if args.format == "structured":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def _cmd_matchings(args) -> int:
    g = _load_graph(args.graph)
    pms = matching.enumerate_pm(g, override_limits=args.limit_override)
    _emit(
        args,
        [list(pm) for pm in pms],
        [f"{len(pms)} matchings:"] + ["  " + " ".join(pm) for pm in pms],
    )
    return 0


def _cmd_count(args) -> int:
    g = _load_graph(args.graph)
    by_enum = len(matching.enumerate_pm(g, override_limits=args.limit_override))
    payload = {"enumeration": by_enum, "hafnian": None, "permanent": None}
    lines = [f"enumeration: {by_enum}"]
    # matrix kernels count plain perfect matchings: defined for unmeasured
    # graphs of even order only
    if not g.measured and len(g.vertices) % 2 == 0:
        by_hafnian = counting.hafnian(g.adjacency(), override_limits=args.limit_override)
        payload["hafnian"] = by_hafnian
        lines.append(f"hafnian: {by_hafnian}")
        try:
            bi = g.biadjacency()
        except PhotonGraphError:
            bi = None
        if bi is not None and len(bi.rows) == len(bi.cols):
            perm = counting.permanent(
                [list(r) for r in bi.entries], override_limits=args.limit_override
            )
            payload["permanent"] = perm
            lines.append(f"permanent: {perm}")
    _emit(args, payload, lines)
    return 0


def _cmd_state(args) -> int:
    g = _load_graph(args.graph)
    state = states.state_from_graph(
        g, normalize=args.normalize, override_limits=args.limit_override
    )
    payload = json.loads(states.serialize_state(state))
    lines = [
        f"{_amp_text(amp)} {_ket_text(ket)}" for ket, amp in state.sorted_terms()
    ]
    _emit(args, payload, lines or ["(no terms)"])
    return 0


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    target = states.parse_state(_read(args.state))
    match = states.verify_target(g, target, override_limits=args.limit_override)
    _emit(args, {"match": match}, ["MATCH" if match else "MISMATCH"])
    return 0


def _cmd_search(args) -> int:
    target = states.parse_state(_read(args.state))
    found = states.search_graph_for_state(
        target,
        max_edges=args.max_edges,
        max_mode=args.max_mode,
        max_parallel=args.max_parallel,
    )
    if found is None:
        _emit(args, None, ["none found within bounds"])
    else:
        doc = serialize_graph(found)
        _emit(args, json.loads(doc), [doc.rstrip("\n")])
    return 0


def _cmd_frustrate(args) -> int:
    g = _load_graph(args.graph)
    phases = [float(x) for x in args.phases.split(",") if x.strip() != ""]
    rows = states.frustration_scan(
        g, args.edge, phases, override_limits=args.limit_override
    )
    _emit(
        args,
        [[phase, intensity] for phase, intensity in rows],
        [f"phase={phase:.10g} intensity={intensity:.10g}" for phase, intensity in rows],
    )
    return 0


def _cmd_ghz_max(args) -> int:
    g = _load_graph(args.graph)
    d, witness = matching.max_disjoint_pms(g, override_limits=args.limit_override)
    _emit(
        args,
        {"d": d, "witness": [list(pm) for pm in witness]},
        [f"d = {d}"] + ["  " + " ".join(pm) for pm in witness],
    )
    return 0


def _cmd_factorize(args) -> int:
    g = _load_graph(args.graph)
    factorizations = matching.enumerate_factorizations(
        g, override_limits=args.limit_override
    )
    payload = [[list(f) for f in fz.factors] for fz in factorizations]
    lines = [f"{len(factorizations)} factorizations:"]
    for i, fz in enumerate(factorizations):
        lines.append(f"  #{i}: " + " | ".join(" ".join(f) for f in fz.factors))
    _emit(args, payload, lines)
    return 0


def _cmd_layers(args) -> int:
    g = _load_graph(args.graph)
    report = matching.classify_layers(g, override_limits=args.limit_override)
    payload = {
        "layers": [list(pm) for pm in report.layer_matchings],
        "mavericks": [list(pm) for pm in report.maverick_matchings],
    }
    lines = [
        f"{len(report.layer_matchings)} layer matchings, "
        f"{len(report.maverick_matchings)} maverick matchings"
    ]
    lines += ["  layer:    " + " ".join(pm) for pm in report.layer_matchings]
    lines += ["  maverick: " + " ".join(pm) for pm in report.maverick_matchings]
    _emit(args, payload, lines)
    return 0


def _cmd_check(args) -> int:
    g = _load_graph(args.graph)
    if args.criterion == "hall":
        parts = None
        if args.parts_by_order:
            half = len(g.vertices) // 2
            parts = (g.vertices[:half], g.vertices[half:])
        result = feasibility.hall_check(g, parts)
    else:
        result = feasibility.tutte_check(g)

    if isinstance(result, tuple):
        _emit(
            args,
            {"exists": True, "matching": list(result)},
            ["perfect matching exists: " + " ".join(result)],
        )
    elif isinstance(result, feasibility.HallWitness):
        _emit(
            args,
            {
                "exists": False,
                "witness": {
                    "subset_w": list(result.subset_w),
                    "neighborhood": list(result.neighborhood),
                },
            },
            [
                "no perfect matching",
                "  W = {" + ", ".join(result.subset_w) + "}",
                "  N(W) = {" + ", ".join(result.neighborhood) + "}",
            ],
        )
    else:
        _emit(
            args,
            {
                "exists": False,
                "witness": {
                    "subset_u": list(result.subset_u),
                    "odd_components": [list(c) for c in result.odd_components],
                },
            },
            [
                "no perfect matching",
                "  U = {" + ", ".join(result.subset_u) + "}",
                f"  odd components ({len(result.odd_components)}): "
                + "; ".join("{" + ", ".join(c) + "}" for c in result.odd_components),
            ],
        )
    return 0


def _load_matrix(path: str):
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if isinstance(doc, dict):
        return parse_graph(text), None
    if isinstance(doc, list):
        matrix = []
        for row in doc:
            if not isinstance(row, list):
                raise PhotonGraphError("matrix file must be a list of rows", reason="parse-error")
            out_row = []
            for entry in row:
                if isinstance(entry, list) and len(entry) == 2:
                    out_row.append(complex(entry[0], entry[1]))
                elif isinstance(entry, (int, float)) and not isinstance(entry, bool):
                    out_row.append(entry)
                else:
                    raise PhotonGraphError(
                        f"matrix entries must be numbers or [re, im] pairs, got {entry!r}",
                        reason="parse-error",
                    )
            matrix.append(out_row)
        return None, matrix
    raise PhotonGraphError("file is neither a graph document nor a matrix", reason="parse-error")


def _matrix_result(args, value) -> int:
    if isinstance(value, complex):
        payload = [value.real, value.imag]
        text = _amp_text(value)
    else:
        payload = value
        text = str(value)
    _emit(args, payload, [text])
    return 0


def _cmd_hafnian(args) -> int:
    g, matrix = _load_matrix(args.file)
    if g is not None:
        matrix = g.adjacency()
    return _matrix_result(args, counting.hafnian(matrix, override_limits=args.limit_override))


def _cmd_permanent(args) -> int:
    g, matrix = _load_matrix(args.file)
    if g is not None:
        bi = g.biadjacency()
        if len(bi.rows) != len(bi.cols):
            raise PhotonGraphError(
                "biadjacency is not square; permanent undefined", reason="unequal-parts"
            )
        matrix = [list(r) for r in bi.entries]
    return _matrix_result(args, counting.permanent(matrix, override_limits=args.limit_override))


def _cmd_merge(args) -> int:
    g1 = _load_graph(args.graph1)
    g2 = _load_graph(args.graph2)
    pairs = []
    for chunk in args.pairs.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise PhotonGraphError(f"pair {chunk!r} must look like a:b", reason="parse-error")
        a, b = chunk.split(":", 1)
        pairs.append((a.strip(), b.strip()))
    merged = merge_graphs(g1, g2, pairs)
    doc = serialize_graph(merged)
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
        _emit(args, {"written": args.output}, [f"wrote {args.output}"])
    else:
        _emit(args, json.loads(doc), [doc.rstrip("\n")])
    return 0


def _cmd_synth(args) -> int:
    g = _load_graph(args.graph)
    plan = compiler.synthesize_setup(g)
    doc = compiler.serialize_plan(plan)
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
    if args.dot:
        Path(args.dot).write_text(to_dot(g), encoding="utf-8")
    if args.format == "structured":
        _emit(args, json.loads(doc), [])
    else:
        print(compiler.render_plan(plan), end="")
    return 0


def _cmd_unsynth(args) -> int:
    plan = compiler.parse_plan(_read(args.plan))
    doc = serialize_graph(compiler.plan_to_graph(plan))
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
        _emit(args, {"written": args.output}, [f"wrote {args.output}"])
    else:
        _emit(args, json.loads(doc), [doc.rstrip("\n")])
    return 0


def _cmd_random(args) -> int:
    p_values = [float(x) for x in args.p]
    reports = networks.ensemble_scan(
        args.n, p_values, args.trials, args.seed, workers=args.threads
    )
    payload = [
        {
            "n": r.n,
            "p": r.p,
            "trials": r.trials,
            "seed": r.seed,
            "pm_exists_fraction": r.pm_exists_fraction,
            "pm_count_histogram": {str(k): v for k, v in r.pm_count_histogram.items()},
        }
        for r in reports
    ]
    lines = [
        f"p={r.p:g} pm_exists_fraction={r.pm_exists_fraction:.6f} "
        f"buckets={len(r.pm_count_histogram)}"
        for r in reports
    ]
    if args.csv:
        rows = networks.report_csv_rows(reports)
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("p,fraction,count,frequency\n")
            for p, fraction, count, freq in rows:
                fh.write(f"{p:g},{fraction:.10g},{count},{freq}\n")
        lines.append(f"wrote {args.csv}")
    _emit(args, payload, lines)
    return 0


def _cmd_dot(args) -> int:
    g = _load_graph(args.graph)
    text = to_dot(g)
    _emit(args, {"dot": text}, [text.rstrip("\n")])
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "structured"), default="text",
        help="output format (structured = JSON)",
    )
    common.add_argument(
        "--limit-override", action="store_true", dest="limit_override",
        help="bypass the scale guards of the exact algorithms",
    )

    parser = argparse.ArgumentParser(
        prog="photongraph",
        description="Pair-source experiments as multigraphs: matchings, states, counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matchings", parents=[common], help="enumerate perfect matchings")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_matchings)

    p = sub.add_parser("count", parents=[common], help="count matchings by enumeration and matrix kernels")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("state", parents=[common], help="post-selected state of a graph")
    p.add_argument("graph")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=_cmd_state)

    p = sub.add_parser("verify", parents=[common], help="compare a graph's state against a target")
    p.add_argument("graph")
    p.add_argument("state")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search small multigraphs for a target state")
    p.add_argument("state")
    p.add_argument("--max-edges", type=int, default=8)
    p.add_argument("--max-mode", type=int, default=3)
    p.add_argument("--max-parallel", type=int, default=4)
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("frustrate", parents=[common], help="sweep one edge's phase, report intensity")
    p.add_argument("graph")
    p.add_argument("edge")
    p.add_argument("--phases", required=True, help="comma-separated radians")
    p.set_defaults(handler=_cmd_frustrate)

    p = sub.add_parser("ghz-max", parents=[common], help="largest set of pairwise disjoint matchings")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_ghz_max)

    p = sub.add_parser("factorize", parents=[common], help="enumerate 1-factorizations")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_factorize)

    p = sub.add_parser("layers", parents=[common], help="split matchings into layer and maverick terms")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_layers)

    p = sub.add_parser("check", parents=[common], help="matchability with constructive witnesses")
    p.add_argument("criterion", choices=("hall", "tutte"))
    p.add_argument("graph")
    p.add_argument(
        "--parts-by-order", action="store_true", dest="parts_by_order",
        help="pin part X to the first half of the declared vertices (hall only)",
    )
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("hafnian", parents=[common], help="hafnian of a matrix or graph adjacency")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_hafnian)

    p = sub.add_parser("permanent", parents=[common], help="permanent of a matrix or graph biadjacency")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_permanent)

    p = sub.add_parser("merge", parents=[common], help="merge two graphs at vertex pairs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--pairs", required=True, help="comma-separated a:b pairs")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_merge)

    p = sub.add_parser("synth", parents=[common], help="compile a graph into a setup plan")
    p.add_argument("graph")
    p.add_argument("-o", "--output", help="write the plan document here")
    p.add_argument("--dot", help="also write a DOT rendering of the graph")
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("unsynth", parents=[common], help="rebuild the graph of a setup plan")
    p.add_argument("plan")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_unsynth)

    p = sub.add_parser("random", parents=[common], help="G(n,p) ensembles and matching statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", action="append", required=True, help="repeatable probability value")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--csv", help="write (p, fraction, count, frequency) rows here")
    p.set_defaults(handler=_cmd_random)

    p = sub.add_parser("dot", parents=[common], help="DOT export")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ScaleLimitError as exc:
        print(f"error: {exc.reason}: {exc}", file=sys.stderr)
        return 3
    except PhotonGraphError as exc:
        print(f"error: {exc.reason}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
