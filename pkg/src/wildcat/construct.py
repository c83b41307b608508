"""Level-wise construction of the subtyping order.

One step turns the order on types of depth <= i into the order on types of
depth <= i+1.  For every generic class and parameter position the previous
level, cut down to the admissible endpoints, is

* copied (``? extends x``: covariant chain),
* flipped (``? super x``: contravariant chain),
* taken as an antichain of invariant arguments,

and the three are merged into one argument order (adding ``[x,x] <= [Null,x]``
and ``[x,x] <= [x,bound]``).  Argument orders of all positions are combined
pointwise, superclass edges are added, and the union is flattened: quotient by
canonical form plus transitive closure.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import BaseMismatch, QuotientNotAntisymmetric, ResourceLimit
from .model import NULL, ArgInterval, ClassType, SelfBound, Surface, TypeTerm, ValidatedClassTable
from .parser import render_type
from .poset import Poset
from .subtyping import TypeSystem, type_system

DEFAULT_NODE_CAP = 20_000


class Tag(Enum):
    COV = "Cov"
    CON = "Con"
    INV = "Inv"
    PLAIN = "Plain"


class Label(NamedTuple):
    tag: Tag
    payload: object


class Provenance(Enum):
    COPY = "Copy"
    FLIP = "Flip"
    MERGE = "Merge"
    FLATTEN = "Flatten"
    SUPERCLASS = "Superclass"
    CLOSURE = "Closure"


_FLIPPED = {Tag.COV: Tag.CON, Tag.CON: Tag.COV, Tag.INV: Tag.INV, Tag.PLAIN: Tag.CON}


def _payload(n):
    return n.payload if isinstance(n, Label) else n


def unlabel(p: Poset) -> Poset:
    return p.relabel(_payload)


def copy_transform(p: Poset) -> Poset:
    """Order-preserving copy tagging plain nodes Cov; tags on labelled nodes are kept."""
    return p.relabel(lambda n: n if isinstance(n, Label) else Label(Tag.COV, n))


def flip_transform(p: Poset) -> Poset:
    """Order-dual copy; Cov and Con tags swap, plain nodes become Con."""
    q = p.relabel(lambda n: Label(_FLIPPED[n.tag], n.payload) if isinstance(n, Label) else Label(Tag.CON, n))
    return q.dual()


def inv_transform(nodes) -> Poset:
    return Poset.discrete([Label(Tag.INV, _payload(n)) for n in nodes])


# --- edge graphs ------------------------------------------------------------

@dataclass
class EdgeGraph:
    """Nodes plus provenance-tagged edges ``(lo, hi)``; not necessarily closed."""

    nodes: dict = field(default_factory=dict)  # ordered set
    edges: dict = field(default_factory=dict)

    def add_node(self, n) -> None:
        self.nodes.setdefault(n, None)

    def add_edge(self, lo, hi, prov: Provenance) -> None:
        if lo == hi:
            return
        self.add_node(lo)
        self.add_node(hi)
        self.edges.setdefault((lo, hi), prov)

    def update(self, other: "EdgeGraph") -> None:
        for n in other.nodes:
            self.add_node(n)
        for e, prov in other.edges.items():
            self.edges.setdefault(e, prov)

    @classmethod
    def from_poset(cls, p: Poset, prov: Provenance = Provenance.CLOSURE) -> "EdgeGraph":
        g = cls()
        for n in p.nodes:
            g.add_node(n)
        for lo, hi in p.hasse():
            g.add_edge(lo, hi, prov)
        return g


def _sort_key(t):
    return (render_type(t), repr(t))


def _flatten(ts: TypeSystem, g: EdgeGraph) -> tuple[Poset, dict]:
    canon = {n: ts.canonical(n) for n in g.nodes}
    nodes = sorted(set(canon.values()), key=_sort_key)
    prov: dict = {}
    for (lo, hi), p in g.edges.items():
        a, b = canon[lo], canon[hi]
        if a == b:
            continue
        if a != lo or b != hi:
            p = Provenance.FLATTEN
        prov.setdefault((a, b), p)
    try:
        poset = Poset.from_edges(nodes, prov.keys())
    except ValueError as e:
        raise QuotientNotAntisymmetric(str(e)) from None
    for pair in poset.strict_pairs():
        prov.setdefault(pair, Provenance.CLOSURE)
    return poset, prov


def flatten_transform(table: ValidatedClassTable, g: EdgeGraph | Poset) -> Poset:
    """Quotient by canonical form, union edges, close transitively."""
    if isinstance(g, Poset):
        g = EdgeGraph.from_poset(g)
    return _flatten(type_system(table), g)[0]


# --- merge ------------------------------------------------------------------

def _argument_graph(ts: TypeSystem, cls: str, k: int, pcov: Poset, pcon: Poset, pinv: Poset) -> EdgeGraph:
    base_cov = {_payload(n) for n in pcov.nodes}
    base_con = {_payload(n) for n in pcon.nodes}
    if base_cov != base_con or not {_payload(n) for n in pinv.nodes} <= base_cov:
        raise BaseMismatch(f"{cls} parameter {k + 1}: copy/flip/invariant inputs disagree on the base")
    top = ts.top(cls, k)
    inv_payloads = {_payload(n) for n in pinv.nodes}

    def arg(label: Label) -> ArgInterval | None:
        x = label.payload
        if label.tag is Tag.COV:
            return None if x is NULL else ts.canonical_arg(cls, k, ArgInterval(NULL, x, Surface.EXTENDS))
        if label.tag is Tag.CON:
            if x == top and x not in inv_payloads:
                return None  # bound outside this level
            return ts.canonical_arg(cls, k, ArgInterval(x, top, Surface.SUPER))
        return ts.canonical_arg(cls, k, ArgInterval(x, x, Surface.INVARIANT))

    g = EdgeGraph()
    for p, prov in ((pcov, Provenance.COPY), (pcon, Provenance.FLIP)):
        mapped = {n: arg(n) for n in p.nodes}
        for a in mapped.values():
            if a is not None:
                g.add_node(a)
        for lo, hi in p.hasse():
            if mapped[lo] is not None and mapped[hi] is not None:
                g.add_edge(mapped[lo], mapped[hi], prov)
    for n in pinv.nodes:
        a = arg(n)
        g.add_node(a)
        x = n.payload
        g.add_edge(a, arg(Label(Tag.COV, x)), Provenance.MERGE)
        g.add_edge(a, arg(Label(Tag.CON, x)), Provenance.MERGE)
    return g


def _class_graph(ts: TypeSystem, cls: str, per_position, node_cap: int) -> EdgeGraph:
    arg_graphs = [_argument_graph(ts, cls, k, *triple) for k, triple in enumerate(per_position)]
    arg_nodes = [list(g.nodes) for g in arg_graphs]
    size = int(np.prod([len(a) for a in arg_nodes], dtype=object))
    if size > node_cap:
        raise ResourceLimit(f"{cls} would have {size} instantiations (node cap {node_cap})")
    g = EdgeGraph()
    for combo in itertools.product(*arg_nodes):
        g.add_node(ClassType(cls, tuple(combo)))
    for k, ag in enumerate(arg_graphs):
        others = arg_nodes[:k] + [None] + arg_nodes[k + 1:]
        for (lo, hi), prov in ag.edges.items():
            pools = [[lo] if o is None else o for o in others]
            for combo in itertools.product(*pools):
                up = combo[:k] + (hi,) + combo[k + 1:]
                g.add_edge(ClassType(cls, combo), ClassType(cls, up), prov)
    return g


def merge_transform(table: ValidatedClassTable, class_name: str, pcov, pcon, pinv) -> Poset:
    """Instantiations of ``class_name`` ordered by argument containment.

    For a one-parameter class the three inputs are labelled posets; for several
    parameters pass one sequence per input, indexed by parameter position.
    """
    ts = type_system(table)
    if isinstance(pcov, Poset):
        pcov, pcon, pinv = [pcov], [pcon], [pinv]
    g = _class_graph(ts, class_name, list(zip(pcov, pcon, pinv)), DEFAULT_NODE_CAP)
    return _flatten(ts, g)[0]


# --- one level step ---------------------------------------------------------

class LevelOrder:
    """Order queries on endpoints, answered from the previous level.

    Pairs inside the previous level are looked up; endpoints outside it (the
    implicit bound of a position, substituted superclass arguments) are
    unfolded structurally until the lookups apply.
    """

    def __init__(self, ts: TypeSystem, sigma: Poset):
        self.ts = ts
        self.sigma = sigma
        self._memo: dict = {}

    def leq(self, x: TypeTerm, y: TypeTerm, trust: frozenset = frozenset()) -> bool:
        if x == y or x is NULL:
            return True
        if y is NULL:
            return False
        if x in self.sigma.index and y in self.sigma.index:
            return self.sigma.le(x, y)
        key = (x, y, trust)
        if key in self._memo:
            return self._memo[key]
        ts = self.ts
        if isinstance(y, SelfBound):
            res = True if y in trust else self.leq(x, ts.cut(y), trust | {y})
        elif isinstance(x, SelfBound):
            res = self.leq(ts.cut(x), y, trust)
        elif y.name == "Object":
            res = True
        elif not ts.table.subclass(x.name, y.name):
            res = False
        else:
            v = ts.view_as(x, y.name)
            res = all(self.within(a, b, trust) for a, b in zip(v.args, y.args))
        self._memo[key] = res
        return res

    def within(self, a: ArgInterval, b: ArgInterval, trust: frozenset = frozenset()) -> bool:
        return self.leq(b.lower, a.lower, trust) and self.leq(a.upper, b.upper, trust)


@dataclass
class PositionInputs:
    cls: str
    index: int
    base: Poset
    pcov: Poset
    pcon: Poset
    pinv: Poset


@dataclass
class StepRecord:
    """Intermediate objects of one step, kept for law checking."""

    positions: list[PositionInputs]
    merged: dict[str, Poset]
    union: EdgeGraph
    result: Poset


def base_poset(ts: TypeSystem, order: LevelOrder, cls: str, k: int) -> tuple[Poset, list]:
    """Admissible endpoints at ``(cls, k)`` with Null below and the bound on top.

    Returns the base and the invariant-admissible subset.
    """
    sigma = order.sigma
    top = ts.top(cls, k)
    members = [x for x in sigma.nodes if x is not NULL and order.leq(x, top)]
    inv = [x for x in members
           if order.leq(x, ts.bound_for(cls, k, ArgInterval(x, x)))]
    nodes = [NULL] + members + ([] if top in members else [top])
    edges = [(NULL, x) for x in nodes[1:]] + [(x, top) for x in members if x != top]
    idx = [sigma.index[x] for x in members]
    sub = sigma.leq[np.ix_(idx, idx)]
    ii, jj = np.nonzero(sub)
    edges += [(members[i], members[j]) for i, j in zip(ii.tolist(), jj.tolist()) if i != j]
    return Poset.from_edges(nodes, edges), inv


def _frame(ts: TypeSystem, include_null: bool) -> EdgeGraph:
    table = ts.table
    g = EdgeGraph()
    if include_null:
        g.add_node(NULL)
    for n in table.nongeneric_classes:
        g.add_node(ClassType(n))
    return g


def _superclass_edges(ts: TypeSystem, order: LevelOrder, g: EdgeGraph) -> None:
    table = ts.table
    by_head = defaultdict(list)
    for n in g.nodes:
        if isinstance(n, ClassType):
            by_head[n.name].append(n)
    for n in list(g.nodes):
        if not isinstance(n, ClassType):
            continue
        for anc in table.ancestors(n.name)[1:]:
            if not table.is_generic(anc):
                g.add_edge(n, ClassType(anc), Provenance.SUPERCLASS)
                continue
            v = ts.view_as(n, anc)
            for m in by_head[anc]:
                if all(order.within(a, b) for a, b in zip(v.args, m.args)):
                    g.add_edge(n, m, Provenance.SUPERCLASS)


def _null_edges(g: EdgeGraph) -> None:
    if NULL in g.nodes:
        for n in list(g.nodes):
            g.add_edge(NULL, n, Provenance.CLOSURE)


def _step(ts: TypeSystem, sigma: Poset, node_cap: int, record: bool):
    order = LevelOrder(ts, sigma)
    g = _frame(ts, NULL in sigma.index)
    positions = []
    merged = {}
    for cls in ts.table.generic_classes:
        per_position = []
        for k in range(ts.table.arity[cls]):
            base, inv = base_poset(ts, order, cls, k)
            trip = (copy_transform(base), flip_transform(base), inv_transform(inv))
            per_position.append(trip)
            if record:
                positions.append(PositionInputs(cls, k, base, *trip))
        cg = _class_graph(ts, cls, per_position, node_cap)
        if record:
            merged[cls] = _flatten(ts, cg)[0]
        g.update(cg)
        if len(g.nodes) > node_cap:
            raise ResourceLimit(f"level exceeds node cap {node_cap} ({len(g.nodes)} nodes)")
    _superclass_edges(ts, order, g)
    _null_edges(g)
    poset, prov = _flatten(ts, g)
    rec = StepRecord(positions, merged, g, poset) if record else None
    return poset, prov, rec


def jsm_step(table: ValidatedClassTable, sigma: Poset, node_cap: int = DEFAULT_NODE_CAP) -> Poset:
    """Next level of the order from ``sigma`` (which it contains as an induced sub-order)."""
    return _step(type_system(table), sigma, node_cap, False)[0]


@dataclass
class SubtypingGraph:
    table: ValidatedClassTable
    levels: list[Poset]
    provenance: dict
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def top(self) -> Poset:
        return self.levels[-1]

    def level_of(self, node) -> int:
        for i, p in enumerate(self.levels):
            if node in p.index:
                return i
        raise KeyError(node)


def frame_level(table: ValidatedClassTable, include_null: bool = True) -> tuple[Poset, dict]:
    ts = type_system(table)
    g = _frame(ts, include_null)
    order = LevelOrder(ts, Poset.discrete([]))
    _superclass_edges(ts, order, g)
    _null_edges(g)
    return _flatten(ts, g)


def construct(table: ValidatedClassTable, depth: int, *, include_null: bool = True,
              node_cap: int = DEFAULT_NODE_CAP, record: bool = False) -> SubtypingGraph:
    """Levels 0..depth by iterating the step from the frame."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    ts = type_system(table)
    sigma, prov = frame_level(table, include_null)
    if len(sigma) > node_cap:
        raise ResourceLimit(f"frame exceeds node cap {node_cap}")
    levels = [sigma]
    steps = []
    for _ in range(depth):
        sigma, prov, rec = _step(ts, sigma, node_cap, record)
        levels.append(sigma)
        if rec is not None:
            steps.append(rec)
    first = {}
    for i, p in enumerate(levels):
        for n in p.nodes:
            first.setdefault(n, i)
    levels = [Poset(p.nodes, p.leq, {n: first[n] for n in p.nodes}) for p in levels]
    return SubtypingGraph(table, levels, prov, steps)


def self_similarity(graph: SubtypingGraph, cls: str, position: int = 0) -> dict[str, bool]:
    """Check that the last level re-embeds the previous one inside ``cls``'s arguments.

    ``x -> cls<? extends x>`` must be an order embedding and
    ``x -> cls<? super x>`` an order-reversing embedding, for every endpoint
    admissible at the position (other positions fixed to ``?``).
    """
    if graph.depth < 1:
        raise ValueError("need at least one step")
    ts = type_system(graph.table)
    prev, last = graph.levels[-2], graph.levels[-1]
    order = LevelOrder(ts, prev)
    top = ts.top(cls, position)
    xs = [x for x in prev.nodes if x is not NULL and order.leq(x, top)]
    rest = [ts.unbounded(cls, j) for j in range(ts.table.arity[cls])]

    def inst(a):
        args = list(rest)
        args[position] = a
        return ts.canonical(ClassType(cls, tuple(args)))

    cov = {x: inst(ArgInterval(NULL, x, Surface.EXTENDS)) for x in xs}
    con = {x: inst(ArgInterval(x, top, Surface.SUPER)) for x in xs}
    ok_cov = all(last.le(cov[x], cov[y]) == prev.le(x, y) for x in xs for y in xs)
    ok_con = all(last.le(con[y], con[x]) == prev.le(x, y) for x in xs for y in xs)
    present = all(v in last.index for v in list(cov.values()) + list(con.values()))
    return {"covariant": ok_cov and present, "contravariant": ok_con and present}
