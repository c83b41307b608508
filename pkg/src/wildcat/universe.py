"""Brute-force oracle: enumerate well-formed canonical types and decide their order.

Independent of the level-wise constructor: types are generated syntactically
from every surface form over the previous depth's types, filtered by
well-formedness, and related pairwise with the declarative decider.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ResourceLimit
from .model import NULL, ArgInterval, ClassType, Surface, TypeTerm, ValidatedClassTable
from .parser import render_type
from .poset import Poset
from .subtyping import type_system


def enumerate_universe(table: ValidatedClassTable, depth: int, *, include_null: bool = True,
                       node_cap: int = 20_000) -> list[TypeTerm]:
    """All well-formed canonical types of depth <= ``depth``, sorted by rendering."""
    ts = type_system(table)
    layer: set[TypeTerm] = {ClassType(n) for n in table.nongeneric_classes}
    for _ in range(depth):
        endpoints = sorted(layer, key=render_type)
        nxt = {ClassType(n) for n in table.nongeneric_classes}
        for cls in table.generic_classes:
            options = []
            for k in range(table.arity[cls]):
                top = ts.top(cls, k)
                opts = [ArgInterval(NULL, top, Surface.UNBOUNDED)]
                for x in endpoints:
                    opts += [ArgInterval(x, x, Surface.INVARIANT),
                             ArgInterval(NULL, x, Surface.EXTENDS),
                             ArgInterval(x, top, Surface.SUPER)]
                options.append(opts)
            total = 1
            for o in options:
                total *= len(o)
            if total > 50 * node_cap:
                raise ResourceLimit(f"{cls}: {total} candidate instantiations")
            for combo in itertools.product(*options):
                t = ClassType(cls, combo)
                if ts.is_well_formed(t):
                    nxt.add(ts.canonical(t))
            if len(nxt) > node_cap:
                raise ResourceLimit(f"universe exceeds node cap {node_cap}")
        layer = nxt
    out = sorted(layer, key=render_type)
    return ([NULL] if include_null else []) + out


def decider_order(table: ValidatedClassTable, nodes) -> Poset:
    """The decider's relation on ``nodes``, as a Poset (not re-closed)."""
    import numpy as np

    ts = type_system(table)
    nodes = list(nodes)
    leq = np.array([[ts.is_subtype(a, b) for b in nodes] for a in nodes], dtype=bool)
    return Poset(nodes, leq)


@dataclass
class OracleComparison:
    depth: int
    missing_nodes: list = field(default_factory=list)  # in the universe, not constructed
    extra_nodes: list = field(default_factory=list)
    missing_edges: list = field(default_factory=list)  # decider says <:, construction does not
    extra_edges: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing_nodes or self.extra_nodes or self.missing_edges or self.extra_edges)

    @property
    def violations(self) -> int:
        return len(self.missing_nodes) + len(self.extra_nodes) + len(self.missing_edges) + len(self.extra_edges)


def compare_with_oracle(table: ValidatedClassTable, level: Poset, depth: int, *,
                        include_null: bool = True) -> OracleComparison:
    """Compare a constructed level against the enumerated universe and decider, both ways."""
    out = OracleComparison(depth)
    universe = enumerate_universe(table, depth, include_null=include_null)
    built = set(level.nodes)
    uni = set(universe)
    out.missing_nodes = sorted((render_type(n) for n in uni - built))
    out.extra_nodes = sorted((render_type(n) for n in built - uni))
    common = [n for n in universe if n in built]
    ref = decider_order(table, common)
    sub = level.restrict(common)
    for a in common:
        for b in common:
            d, c = ref.le(a, b), sub.le(a, b)
            if d and not c:
                out.missing_edges.append((render_type(a), render_type(b)))
            elif c and not d:
                out.extra_edges.append((render_type(a), render_type(b)))
    return out
