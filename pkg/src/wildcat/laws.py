"""Morphism laws of the construction: copy = id, flip twice = copy, flatten idempotent.

Checked on seeded random posets and on every intermediate object of a
recorded construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .construct import (
    EdgeGraph,
    Provenance,
    StepRecord,
    construct,
    copy_transform,
    flatten_transform,
    flip_transform,
    unlabel,
)
from .model import ArgInterval, ClassType, NullType, Surface, ValidatedClassTable
from .poset import Poset

LAWS = ("copy=id", "flip2=copy", "flatten2=flatten")


@dataclass
class LawReport:
    checked: dict[str, int] = field(default_factory=lambda: {k: 0 for k in LAWS})
    failures: list[tuple[str, str]] = field(default_factory=list)  # (law, where)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, law: str, holds: bool, where: str) -> None:
        self.checked[law] += 1
        if not holds:
            self.failures.append((law, where))

    def merge(self, other: "LawReport") -> None:
        for k, v in other.checked.items():
            self.checked[k] += v
        self.failures.extend(other.failures)


def copy_law(p: Poset) -> bool:
    return unlabel(copy_transform(p)) == unlabel(p)


def flip_law(p: Poset) -> bool:
    ff = flip_transform(flip_transform(p))
    return unlabel(ff) == unlabel(p) and ff == copy_transform(p)


def flatten_law(table: ValidatedClassTable, g) -> bool:
    once = flatten_transform(table, g)
    return flatten_transform(table, once) == once


def random_poset(rng: random.Random, nodes, max_nodes: int = 8, density: float | None = None) -> Poset:
    """A random order on a random subset of ``nodes`` (edges follow a random linear order)."""
    nodes = list(nodes)
    k = rng.randint(1, min(max_nodes, len(nodes)))
    pick = rng.sample(nodes, k)
    d = rng.random() if density is None else density
    edges = [(pick[i], pick[j]) for i in range(k) for j in range(i + 1, k) if rng.random() < d]
    order = list(pick)
    rng.shuffle(order)
    return Poset.from_edges(order, edges)


def _alias(t):
    """A non-canonical spelling of ``t`` (same endpoints, other surface tag)."""
    if not isinstance(t, ClassType) or not t.args:
        return t
    a = t.args[0]
    other = Surface.SUPER if a.surface is not Surface.SUPER else Surface.EXTENDS
    return ClassType(t.name, (ArgInterval(a.lower, a.upper, other),) + t.args[1:])


def random_type_graph(rng: random.Random, types, max_nodes: int = 8) -> EdgeGraph:
    """Random acyclic edge graph over types, with some nodes split into aliases.

    Aliases share a canonical form, so flattening must merge them again.
    """
    p = random_poset(rng, types, max_nodes)
    copies = {n: [n] + ([_alias(n)] if rng.random() < 0.5 and _alias(n) != n else []) for n in p.nodes}
    g = EdgeGraph()
    for n in p.nodes:
        for c in copies[n]:
            g.add_node(c)
    for lo, hi in p.strict_pairs():
        if rng.random() < 0.7:
            g.add_edge(rng.choice(copies[lo]), rng.choice(copies[hi]), Provenance.CLOSURE)
    return g


def check_random(table: ValidatedClassTable, trials: int = 100, seed: int = 0, depth: int = 1,
                 max_nodes: int = 8) -> LawReport:
    """All three laws on ``trials`` seeded random inputs drawn from the level ``depth`` types."""
    rng = random.Random(seed)
    rep = LawReport()
    types = [t for t in construct(table, depth).top.nodes if not isinstance(t, NullType)]
    for i in range(trials):
        p = random_poset(rng, range(max_nodes * 2), max_nodes)
        rep.record("copy=id", copy_law(p), f"random poset {i}")
        rep.record("flip2=copy", flip_law(p), f"random poset {i}")
        g = random_type_graph(rng, types, max_nodes)
        rep.record("flatten2=flatten", flatten_law(table, g), f"random type graph {i}")
    return rep


def check_intermediates(table: ValidatedClassTable, depth: int, graph=None) -> LawReport:
    """All three laws on every recorded intermediate of a construction up to ``depth``."""
    if graph is None or not graph.steps:
        graph = construct(table, depth, record=True)
    rep = LawReport()
    for i, step in enumerate(graph.steps):
        _check_step(table, i, step, rep)
    return rep


def _check_step(table, i: int, step: StepRecord, rep: LawReport) -> None:
    for pos in step.positions:
        where = f"step {i + 1}, {pos.cls} parameter {pos.index + 1}"
        for name, p in (("base", pos.base), ("copy", pos.pcov), ("flip", pos.pcon), ("inv", pos.pinv)):
            rep.record("copy=id", copy_law(p), f"{where}, {name}")
            rep.record("flip2=copy", flip_law(p) if name == "base" else _labelled_flip_law(p), f"{where}, {name}")
        rep.record("copy=id", pos.pcov == copy_transform(pos.base), f"{where}, copy input")
    for cls, merged in step.merged.items():
        rep.record("flatten2=flatten", flatten_law(table, merged), f"step {i + 1}, merge {cls}")
    rep.record("flatten2=flatten", flatten_law(table, step.union), f"step {i + 1}, union")
    rep.record("flatten2=flatten", flatten_transform(table, step.union) == step.result, f"step {i + 1}, result")


def _labelled_flip_law(p: Poset) -> bool:
    # on labelled posets two flips restore both tags and order
    ff = flip_transform(flip_transform(p))
    return ff == p and unlabel(ff) == unlabel(p)


def check_all(table: ValidatedClassTable, depth: int, trials: int = 100, seed: int = 0, graph=None) -> LawReport:
    rep = check_random(table, trials, seed)
    rep.merge(check_intermediates(table, depth, graph))
    return rep


__all__ = ["LAWS", "LawReport", "check_all", "check_intermediates", "check_random", "random_poset"]
