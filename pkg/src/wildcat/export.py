"""JSON and DOT export of a constructed level, and JSON re-import."""

from __future__ import annotations

import json

from .construct import Provenance, SubtypingGraph
from .model import ValidatedClassTable
from .parser import parse_type, render_type
from .poset import Poset
from .subtyping import type_system

COLORS = {
    Provenance.COPY: "blue",
    Provenance.FLIP: "red",
    Provenance.MERGE: "green",
    Provenance.SUPERCLASS: "black",
    Provenance.FLATTEN: "gray",
    Provenance.CLOSURE: "gray",
}


def _edges(graph: SubtypingGraph, hasse: bool):
    level = graph.top
    pairs = level.hasse() if hasse else level.strict_pairs()
    return [(a, b, graph.provenance.get((a, b), Provenance.CLOSURE)) for a, b in pairs]


def to_dict(graph: SubtypingGraph, table_name: str = "", hasse: bool = False) -> dict:
    level = graph.top
    nodes = sorted(level.nodes, key=render_type)
    ids = {n: i for i, n in enumerate(nodes)}
    edges = sorted((ids[a], ids[b], p.value) for a, b, p in _edges(graph, hasse))
    return {
        "meta": {"depth": graph.depth, "table": table_name or graph.table.origin},
        "nodes": [{"id": ids[n], "text": render_type(n), "level": level.level(n) or 0} for n in nodes],
        "edges": [{"sub": a, "sup": b, "provenance": p} for a, b, p in edges],
    }


def to_json(graph: SubtypingGraph, table_name: str = "", hasse: bool = False) -> str:
    return json.dumps(to_dict(graph, table_name, hasse), indent=2)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: SubtypingGraph, table_name: str = "", hasse: bool = False) -> str:
    """Edges point from subtype to supertype, coloured by provenance."""
    level = graph.top
    nodes = sorted(level.nodes, key=render_type)
    lines = [f"digraph {_quote(table_name or 'subtyping')} {{", "  rankdir=BT;", "  node [shape=box];"]
    for n in nodes:
        lines.append(f"  {_quote(render_type(n))} [tooltip=\"level {level.level(n) or 0}\"];")
    for a, b, p in sorted(_edges(graph, hasse), key=lambda e: (render_type(e[0]), render_type(e[1]))):
        lines.append(f"  {_quote(render_type(a))} -> {_quote(render_type(b))} "
                     f"[color={COLORS[p]}, label={_quote(p.value)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_dict(data: dict, table: ValidatedClassTable) -> Poset:
    """Rebuild the order from exported JSON; node texts are re-parsed to canonical types."""
    ts = type_system(table)
    rows = sorted(data["nodes"], key=lambda n: n["id"])
    nodes = [ts.canonical(parse_type(n["text"], table)) for n in rows]
    levels = {t: n["level"] for t, n in zip(nodes, rows)}
    p = Poset.from_edges(nodes, [(nodes[e["sub"]], nodes[e["sup"]]) for e in data["edges"]])
    return Poset(p.nodes, p.leq, levels)


def from_json(text: str, table: ValidatedClassTable) -> Poset:
    return from_dict(json.loads(text), table)
