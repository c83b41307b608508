"""Erasure and wildcard instantiation as a Galois connection.

``erase`` maps a type to its head class; ``canonical_instantiation`` maps a
class to its ``?``-instantiation.  Between the subtyping order on types and the
subclass order on classes, ``erase(a) <= b  iff  a <: G(b)``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .construct import SubtypingGraph, construct
from .errors import NullHasNoErasure, UnknownClass
from .model import ClassType, NullType, TypeTerm, ValidatedClassTable
from .parser import render_type
from .subtyping import type_system

SIDES = ("ForwardFailed", "BackwardFailed", "UnitFailed", "CounitFailed", "CounitEqualityFailed",
         "ClosureIdempotenceFailed", "ErasureNotMonotone", "InstantiationNotMonotone")


def erase(t: TypeTerm) -> str:
    if isinstance(t, NullType):
        raise NullHasNoErasure("Null has no erasure")
    if not isinstance(t, ClassType):
        raise TypeError(f"cannot erase {t!r}")
    return t.name


def canonical_instantiation(table: ValidatedClassTable, c: str) -> ClassType:
    """``c<?, ..., ?>``; each ``?`` is bounded by its parameter's bound (cut once if recursive)."""
    if c not in table.decls:
        raise UnknownClass(f"unknown class {c}")
    ts = type_system(table)
    return ts.canonical(ClassType(c, tuple(ts.unbounded(c, j) for j in range(table.arity[c]))))


@dataclass(frozen=True, order=True)
class Violation:
    a: str | None
    b: str | None
    side: str


@dataclass
class AdjunctionReport:
    depth: int
    checked_pairs: int = 0
    violations: list[Violation] = field(default_factory=list)
    generic_pairs: int = 0
    nongeneric_pairs: int = 0
    witnesses: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, side: str) -> int:
        return sum(v.side == side for v in self.violations)

    def to_dict(self) -> dict:
        return {
            "checked_pairs": self.checked_pairs,
            "violations": [asdict(v) for v in sorted(self.violations)],
            "depth": self.depth,
            "generic_pairs": self.generic_pairs,
            "nongeneric_pairs": self.nongeneric_pairs,
            "witnesses": [list(w) for w in self.witnesses],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _types(table, depth, graph, include_null=False):
    if graph is None:
        graph = construct(table, depth)
    return [n for n in graph.top.nodes if include_null or not isinstance(n, NullType)], graph


def galois_check(table: ValidatedClassTable, depth: int, graph: SubtypingGraph | None = None) -> AdjunctionReport:
    """Check ``erase(a) <= b  iff  a <: G(b)`` for every type ``a`` of the level and every class ``b``."""
    ts = type_system(table)
    types, graph = _types(table, depth, graph)
    rep = AdjunctionReport(depth=graph.depth)
    gs = {b: canonical_instantiation(table, b) for b in table.names}
    for a in types:
        ea = erase(a)
        for b in table.names:
            left = table.subclass(ea, b)
            right = ts.is_subtype(a, gs[b])
            rep.checked_pairs += 1
            if table.is_generic(b):
                rep.generic_pairs += 1
            else:
                rep.nongeneric_pairs += 1
            if left and not right:
                rep.violations.append(Violation(render_type(a), b, "ForwardFailed"))
            elif right and not left:
                rep.violations.append(Violation(render_type(a), b, "BackwardFailed"))
            elif left and ea != b and table.is_generic(b):
                rep.witnesses.append((render_type(a), b))
    rep.violations.sort()
    rep.witnesses.sort()
    return rep


def monotonicity_check(table: ValidatedClassTable, depth: int, graph: SubtypingGraph | None = None) -> AdjunctionReport:
    """Erasure is monotone on every order pair of the level; instantiation on every subclass pair."""
    ts = type_system(table)
    types, graph = _types(table, depth, graph)
    rep = AdjunctionReport(depth=graph.depth)
    level = graph.top
    for s in types:
        for t in types:
            if level.le(s, t):
                rep.checked_pairs += 1
                if not table.subclass(erase(s), erase(t)):
                    rep.violations.append(Violation(render_type(s), render_type(t), "ErasureNotMonotone"))
    for b in table.names:
        for b2 in table.ancestors(b):
            rep.checked_pairs += 1
            if not ts.is_subtype(canonical_instantiation(table, b), canonical_instantiation(table, b2)):
                rep.violations.append(Violation(b, b2, "InstantiationNotMonotone"))
    rep.violations.sort()
    return rep


def monad_laws_check(table: ValidatedClassTable, depth: int, graph: SubtypingGraph | None = None) -> AdjunctionReport:
    """Unit ``a <: G(F(a))``, counit ``F(G(b)) = b`` and idempotence of ``G∘F``."""
    ts = type_system(table)
    types, graph = _types(table, depth, graph)
    rep = AdjunctionReport(depth=graph.depth)
    for a in types:
        gfa = canonical_instantiation(table, erase(a))
        rep.checked_pairs += 2
        if not ts.is_subtype(a, gfa):
            rep.violations.append(Violation(render_type(a), None, "UnitFailed"))
        again = canonical_instantiation(table, erase(gfa))
        if ts.canonical(again) != ts.canonical(gfa):
            rep.violations.append(Violation(render_type(a), None, "ClosureIdempotenceFailed"))
    for b in table.names:
        fgb = erase(canonical_instantiation(table, b))
        rep.checked_pairs += 1
        if table.is_generic(b):
            rep.generic_pairs += 1
        else:
            rep.nongeneric_pairs += 1
        if not table.subclass(fgb, b):
            rep.violations.append(Violation(None, b, "CounitFailed"))
        elif fgb != b:
            rep.violations.append(Violation(None, b, "CounitEqualityFailed"))
    rep.violations.sort(key=lambda v: (v.a or "", v.b or "", v.side))
    return rep
