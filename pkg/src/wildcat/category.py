"""Finite category presentations, set-valued functors and the Yoneda correspondence.

The class category has one object per class and one generator ``u_C_j`` from a
generic class ``C`` to the erasure of the bound of its ``j``-th parameter.
Hom-sets are generator paths (diagrammatic order, ``()`` is the identity) up to
a length cap, quotiented by the relations.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field

from .construct import SubtypingGraph, construct
from .errors import CapExceededWarning, ResourceLimit, UnknownClass, UnsupportedBound
from .model import NULL, ArgInterval, ClassType, NullType, RefType, Surface, ValidatedClassTable
from .parser import render_type
from .subtyping import type_system

Path = tuple[str, ...]


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    dst: str


@dataclass
class CategoryPresentation:
    objects: tuple[str, ...]
    generators: tuple[Generator, ...] = ()
    relations: tuple[tuple[Path, Path], ...] = ()
    hom_cap: int = 8
    _quotients: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.generators = tuple(g if isinstance(g, Generator) else Generator(*g) for g in self.generators)
        self.relations = tuple((tuple(p), tuple(q)) for p, q in self.relations)
        if self.hom_cap < 1:
            raise ValueError("hom cap must be >= 1")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator name")
        obj = set(self.objects)
        for g in self.generators:
            if g.src not in obj or g.dst not in obj:
                raise ValueError(f"generator {g.name} has an undeclared endpoint")
        self._gens = {g.name: g for g in self.generators}
        self._out: dict[str, list[Generator]] = {o: [] for o in self.objects}
        for g in self.generators:
            self._out[g.src].append(g)
        for p, q in self.relations:
            if not p and not q:
                raise ValueError("relation with two identity sides")
            ends_p, ends_q = self.ends(p), self.ends(q)
            if ends_p is None or ends_q is None:
                raise ValueError(f"relation side is not composable: {p} = {q}")
            if p and q and ends_p != ends_q:
                raise ValueError(f"relation sides are not parallel: {p} = {q}")
            if not p and ends_q[0] != ends_q[1] or not q and ends_p[0] != ends_p[1]:
                raise ValueError(f"identity relation needs a loop: {p} = {q}")

    def generator(self, name: str) -> Generator:
        return self._gens[name]

    def outgoing(self, obj: str) -> list[Generator]:
        return self._out[obj]

    def ends(self, path: Path) -> tuple[str, str] | None:
        """(src, dst) of a nonempty composable path, None otherwise."""
        if not path:
            return ("", "")
        gs = [self._gens.get(n) for n in path]
        if any(g is None for g in gs):
            return None
        for a, b in zip(gs, gs[1:]):
            if a.dst != b.src:
                return None
        return gs[0].src, gs[-1].dst

    def is_acyclic(self) -> bool:
        indeg = {o: 0 for o in self.objects}
        for g in self.generators:
            indeg[g.dst] += 1
        stack = [o for o, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            o = stack.pop()
            seen += 1
            for g in self._out[o]:
                indeg[g.dst] -= 1
                if indeg[g.dst] == 0:
                    stack.append(g.dst)
        return seen == len(self.objects)

    def to_dict(self) -> dict:
        return {
            "objects": sorted(self.objects),
            "generators": [[g.name, g.src, g.dst] for g in sorted(self.generators, key=lambda g: g.name)],
            "relations": sorted([list(p), list(q)] for p, q in self.relations),
            "hom_cap": self.hom_cap,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# -- hom-sets ------------------------------------------------------------


@dataclass
class _Quotient:
    rep: dict[Path, Path]  # every enumerated path -> class representative
    end: dict[Path, str]
    capped: bool


def _quotient(cat: CategoryPresentation, x: str) -> _Quotient:
    hit = cat._quotients.get(x)
    if hit is not None:
        return hit
    end: dict[Path, str] = {(): x}
    frontier = [()]
    capped = False
    for _ in range(cat.hom_cap):
        nxt = []
        for p in frontier:
            for g in cat.outgoing(end[p]):
                q = p + (g.name,)
                end[q] = g.dst
                nxt.append(q)
        frontier = nxt
    capped = any(cat.outgoing(end[p]) for p in frontier)

    parent = {p: p for p in end}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def key(p):
        return (len(p), p)

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if key(rb) < key(ra):
                ra, rb = rb, ra
            parent[rb] = ra

    for p in end:
        for lhs, rhs in cat.relations:
            for a, b in ((lhs, rhs), (rhs, lhs)):
                n = len(a)
                if n == 0:
                    continue
                for i in range(len(p) - n + 1):
                    if p[i:i + n] == a:
                        q = p[:i] + b + p[i + n:]
                        if q in end:
                            union(p, q)
                        elif len(q) > cat.hom_cap:
                            capped = True
    out = _Quotient({p: find(p) for p in end}, end, capped)
    cat._quotients[x] = out
    return out


def hom_set(cat: CategoryPresentation, x: str, y: str) -> list[Path]:
    """Representatives of the path classes ``x -> y`` (shortest, then lexicographic)."""
    for o in (x, y):
        if o not in cat._out:
            raise KeyError(f"unknown object {o}")
    q = _quotient(cat, x)
    if q.capped:
        warnings.warn(f"hom-sets out of {x} are cut at path length {cat.hom_cap}", CapExceededWarning, stacklevel=2)
    return sorted({q.rep[p] for p, e in q.end.items() if e == y}, key=lambda p: (len(p), p))


def compose(cat: CategoryPresentation, x: str, path: Path) -> Path:
    """Class representative of a path out of ``x``."""
    q = _quotient(cat, x)
    if path not in q.rep:
        raise ResourceLimit(f"path of length {len(path)} exceeds the hom cap {cat.hom_cap}")
    return q.rep[path]


# -- functors ------------------------------------------------------------


@dataclass
class FunctorInstance:
    object_map: dict[str, tuple]
    arrow_map: dict[str, dict]

    def apply(self, path: Path, element):
        for g in path:
            element = self.arrow_map[g][element]
        return element

    def to_dict(self) -> dict:
        def tok(e):
            return render_type(e) if isinstance(e, (ClassType, NullType)) else (
                "id" if e == () else ".".join(e) if isinstance(e, tuple) else str(e))

        return {
            "object_map": {o: sorted(tok(e) for e in es) for o, es in sorted(self.object_map.items())},
            "arrow_map": {g: sorted([tok(a), tok(b)] for a, b in m.items()) for g, m in sorted(self.arrow_map.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def functor_problems(cat: CategoryPresentation, f: FunctorInstance) -> list[str]:
    """Everything that keeps ``f`` from being a functor on ``cat`` (empty when valid)."""
    out = []
    for o in cat.objects:
        if o not in f.object_map:
            out.append(f"object {o} is not mapped")
    if out:
        return out
    for g in cat.generators:
        m = f.arrow_map.get(g.name)
        if m is None:
            out.append(f"generator {g.name} is not mapped")
            continue
        src, dst = set(f.object_map[g.src]), set(f.object_map[g.dst])
        if set(m) != src:
            out.append(f"{g.name} is not total on F({g.src})")
        if any(v not in dst for v in m.values()):
            out.append(f"{g.name} leaves F({g.dst})")
    if out:
        return out
    for p, q in cat.relations:
        src = cat.ends(p or q)[0]
        for e in f.object_map[src]:
            if f.apply(p, e) != f.apply(q, e):
                out.append(f"relation {'.'.join(p) or 'id'} = {'.'.join(q) or 'id'} fails at {e!r}")
    return out


def representable(cat: CategoryPresentation, c: str) -> FunctorInstance:
    """``hom(c, -)``: objects to path classes, generators act by post-composition."""
    homs = {y: tuple(hom_set(cat, c, y)) for y in cat.objects}
    q = _quotient(cat, c)
    arrows = {}
    for g in cat.generators:
        m = {}
        for p in homs[g.src]:
            ext = p + (g.name,)
            if ext not in q.rep:
                # post-composite longer than the cap; the check using this functor is cap-sensitive
                continue
            m[p] = q.rep[ext]
        arrows[g.name] = m
    return FunctorInstance(homs, arrows)


@dataclass(frozen=True)
class NaturalTransformation:
    components: tuple[tuple[str, tuple[tuple[object, object], ...]], ...]

    def at(self, obj: str) -> dict:
        return dict(dict(self.components)[obj])


def is_natural(cat: CategoryPresentation, f: FunctorInstance, g: FunctorInstance, alpha: NaturalTransformation) -> bool:
    comp = {o: alpha.at(o) for o in cat.objects}
    for o in cat.objects:
        if set(comp[o]) != set(f.object_map[o]) or any(v not in g.object_map[o] for v in comp[o].values()):
            return False
    for h in cat.generators:
        for e in f.object_map[h.src]:
            if e not in f.arrow_map[h.name]:
                continue
            if g.arrow_map[h.name].get(comp[h.src][e]) != comp[h.dst][f.arrow_map[h.name][e]]:
                return False
    return True


def natural_transformations(cat: CategoryPresentation, f: FunctorInstance, g: FunctorInstance,
                            limit: int = 1_000_000) -> list[NaturalTransformation]:
    """Every natural ``f => g``, by backtracking over (object, element) variables."""
    variables = [(o, e) for o in cat.objects for e in f.object_map[o]]
    index = {v: i for i, v in enumerate(variables)}
    # constraints checked once both ends of a square are assigned
    checks: list[list[tuple[str, int, int]]] = [[] for _ in variables]
    for h in cat.generators:
        fm = f.arrow_map[h.name]
        for e in f.object_map[h.src]:
            if e not in fm:
                continue
            i, j = index[(h.src, e)], index[(h.dst, fm[e])]
            checks[max(i, j)].append((h.name, i, j))
    domains = [tuple(g.object_map[o]) for o, _ in variables]
    values: list = [None] * len(variables)
    found = []
    steps = 0

    def ok(k):
        for name, i, j in checks[k]:
            if g.arrow_map[name].get(values[i], _MISSING) != values[j]:
                return False
        return True

    def go(k):
        nonlocal steps
        if k == len(variables):
            comps = tuple((o, tuple((e, values[index[(o, e)]]) for e in f.object_map[o])) for o in cat.objects)
            found.append(NaturalTransformation(comps))
            return
        for v in domains[k]:
            steps += 1
            if steps > limit:
                raise ResourceLimit(f"natural transformation search exceeded {limit} steps")
            values[k] = v
            if ok(k):
                go(k + 1)
        values[k] = None

    go(0)
    return found


_MISSING = object()


@dataclass
class YonedaReport:
    obj: str
    nat_count: int
    element_count: int
    injective: bool
    surjective: bool
    inverse_ok: bool
    cap_exceeded: bool
    witnesses: list[tuple[int, object]] = field(default_factory=list)

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective and self.inverse_ok

    @property
    def valid(self) -> bool:
        return not self.cap_exceeded

    @property
    def ok(self) -> bool:
        return self.valid and self.bijective


def yoneda_check(cat: CategoryPresentation, f: FunctorInstance, c: str, limit: int = 1_000_000) -> YonedaReport:
    """Check that ``alpha -> alpha_c(id_c)`` maps ``Nat(hom(c,-), f)`` bijectively onto ``f(c)``."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CapExceededWarning)
        h = representable(cat, c)
    capped = any(issubclass(w.category, CapExceededWarning) for w in caught)
    if capped:
        warnings.warn(f"Yoneda check at {c} is cap-sensitive and not valid", CapExceededWarning, stacklevel=2)
    problems = functor_problems(cat, f)
    if problems:
        raise ValueError("not a functor: " + "; ".join(problems))
    nats = natural_transformations(cat, h, f, limit)
    values = [a.at(c)[()] for a in nats]
    elems = list(f.object_map[c])
    # explicit inverse: e -> (p -> f(p)(e)) must be natural and land on e
    inverse_ok = True
    for e in elems:
        comps = tuple((o, tuple((p, f.apply(p, e)) for p in h.object_map[o])) for o in cat.objects)
        alpha = NaturalTransformation(comps)
        if not is_natural(cat, h, f, alpha) or alpha.at(c)[()] != e or alpha not in nats:
            inverse_ok = False
    return YonedaReport(
        obj=c,
        nat_count=len(nats),
        element_count=len(elems),
        injective=len(set(values)) == len(values),
        surjective=set(values) == set(elems),
        inverse_ok=inverse_ok,
        cap_exceeded=capped,
        witnesses=list(enumerate(values)),
    )


def random_functor(cat: CategoryPresentation, rng, max_size: int = 5, attempts: int = 1000) -> FunctorInstance:
    """A random functor with sets of at most ``max_size`` tokens (resampled until relations hold)."""
    for _ in range(attempts):
        omap = {o: tuple(f"{o.lower()}{i}" for i in range(rng.randint(0, max_size))) for o in cat.objects}
        amap = {}
        ok = True
        for g in cat.generators:
            if omap[g.src] and not omap[g.dst]:
                ok = False
                break
            amap[g.name] = {e: rng.choice(omap[g.dst]) for e in omap[g.src]}
        if ok:
            f = FunctorInstance(omap, amap)
            if not functor_problems(cat, f):
                return f
    raise ResourceLimit("no functor found; relations too restrictive for random sampling")


# -- classes as a category -------------------------------------------------


def generator_name(cls: str, j: int) -> str:
    return f"u_{cls}_{j + 1}"


def build_class_category(table: ValidatedClassTable, hom_cap: int = 8) -> CategoryPresentation:
    gens = []
    for c in table.generic_classes:
        for j, b in enumerate(table.bounds[c]):
            gens.append(Generator(generator_name(c, j), c, b.name))
    return CategoryPresentation(tuple(table.names), tuple(gens), (), hom_cap)


def _require_object_bounds(table: ValidatedClassTable) -> None:
    for c in table.generic_classes:
        for p in table.decls[c].params:
            if p.bound.name != "Object":
                raise UnsupportedBound(f"{c}.{p.name} is bounded by {p.bound.name}, not Object",
                                       p.bound.line, p.bound.col)


def instantiation_functor(table: ValidatedClassTable, depth: int,
                          graph: SubtypingGraph | None = None) -> FunctorInstance:
    """Classes to their instantiations in the level; ``u_C_j`` takes an argument's upper end."""
    _require_object_bounds(table)
    if graph is None:
        graph = construct(table, depth)
    types = [t for t in graph.top.nodes if not isinstance(t, NullType)]
    omap = {c: tuple(t for t in types if t.name == c) for c in table.names}
    omap["Object"] = tuple(types)
    amap = {}
    for c in table.generic_classes:
        for j in range(table.arity[c]):
            amap[generator_name(c, j)] = {t: t.args[j].upper for t in omap[c]}
    return FunctorInstance(omap, amap)


# -- Skolem templates ------------------------------------------------------


@dataclass(frozen=True)
class Placeholder:
    name: str
    bound: RefType


@dataclass(frozen=True)
class SkolemTemplate:
    cls: str
    placeholders: tuple[Placeholder, ...]
    param_names: tuple[str, ...]

    def render(self) -> str:
        if not self.placeholders:
            return self.cls
        ren = dict(zip(self.param_names, (p.name for p in self.placeholders)))
        parts = [f"{p.name} extends {render_ref(p.bound, ren)}" for p in self.placeholders]
        return f"{self.cls}<{', '.join(parts)}>"

    __str__ = render


def render_ref(ref: RefType, ren: dict) -> str:
    name = ren.get(ref.name, ref.name)
    if not ref.args:
        return name
    out = []
    for a in ref.args:
        if a.surface is Surface.UNBOUNDED:
            out.append("?")
            continue
        inner = "Null" if a.type is NULL else render_ref(a.type, ren)
        out.append({Surface.INVARIANT: inner, Surface.EXTENDS: f"? extends {inner}",
                    Surface.SUPER: f"? super {inner}"}[a.surface])
    return f"{name}<{', '.join(out)}>"


def skolem_template(table: ValidatedClassTable, c: str) -> SkolemTemplate:
    if c not in table.decls:
        raise UnknownClass(f"unknown class {c}")
    decl = table.decls[c]
    ph = tuple(Placeholder(f"X_{j + 1}", p.bound) for j, p in enumerate(decl.params))
    return SkolemTemplate(c, ph, decl.param_names)


def fill(table: ValidatedClassTable, template: SkolemTemplate, args) -> ClassType | None:
    """Substitute arguments for every placeholder; None if the result is ill-formed."""
    ts = type_system(table)
    if len(args) != len(template.placeholders):
        raise ValueError("one argument per placeholder")
    t = ClassType(template.cls, tuple(args))
    return ts.canonical(t) if ts.is_well_formed(t) else None


def fillings(table: ValidatedClassTable, template: SkolemTemplate, endpoints) -> set[ClassType]:
    """All well-formed canonical fillings using ``?``, invariant, extends and super arguments."""
    ts = type_system(table)
    endpoints = [e for e in endpoints if not isinstance(e, NullType)]
    options = []
    for k in range(len(template.placeholders)):
        top = ts.top(template.cls, k)
        opts = [ArgInterval(NULL, top, Surface.UNBOUNDED)]
        for x in endpoints:
            opts += [ArgInterval(x, x, Surface.INVARIANT), ArgInterval(NULL, x, Surface.EXTENDS),
                     ArgInterval(x, top, Surface.SUPER)]
        options.append(opts)
    out = set()
    for combo in itertools.product(*options):
        t = fill(table, template, combo)
        if t is not None:
            out.add(t)
    return out


__all__ = [
    "CategoryPresentation",
    "FunctorInstance",
    "Generator",
    "NaturalTransformation",
    "SkolemTemplate",
    "YonedaReport",
    "build_class_category",
    "fill",
    "fillings",
    "functor_problems",
    "hom_set",
    "instantiation_functor",
    "is_natural",
    "natural_transformations",
    "random_functor",
    "representable",
    "skolem_template",
    "yoneda_check",
]
