"""Declarative subtyping for ground wildcard types.

Type arguments are intervals ``[lower, upper]``; the three Java variance rules
collapse into interval containment (lower end contravariant, upper end
covariant).  Rules, for ground ``s <: t``:

  R1  s == t
  R2  s is Null
  R3  t is Object
  R4  same head class and pointwise containment of arguments
  R5  the substituted declared superclass of ``s`` is a subtype of ``t``

Recursively bounded parameters (``T extends Comparable<T>``) get a symbolic
upper endpoint, :class:`SelfBound`, which unfolds once to the bound
instantiated with ``?``; a nested occurrence of the same marker met while
unfolding is accepted (the cut).
"""

from __future__ import annotations

from .errors import IllFormedArgument
from .model import (
    NULL,
    OBJECT,
    ArgInterval,
    ClassType,
    NullType,
    RefArg,
    RefType,
    SelfBound,
    Surface,
    TypeTerm,
    ValidatedClassTable,
)

_WILD = object()  # env value: instantiate this parameter with the enclosing position's `?`


class TypeSystem:
    """Per-table decision procedure with memo tables."""

    def __init__(self, table: ValidatedClassTable):
        self.table = table
        self._recursive = self._recursive_positions()
        self._tops: dict[tuple[str, int], TypeTerm] = {}
        self._cuts: dict[SelfBound, ClassType] = {}
        self._cutting: set[SelfBound] = set()
        self._canon: dict[TypeTerm, TypeTerm] = {}
        self._views: dict[tuple[ClassType, str], ClassType | None] = {}
        self._memo: dict[tuple, bool] = {}

    # -- parameter positions ------------------------------------------

    def _recursive_positions(self) -> set[tuple[str, int]]:
        t = self.table
        deps: dict[tuple[str, int], set[tuple[str, int]]] = {}

        def collect(ref, out):
            if not isinstance(ref, RefType) or ref.name not in t.decls:
                return
            for k, a in enumerate(ref.args):
                out.add((ref.name, k))
                collect(a.type, out)

        for n in t.names:
            for j, b in enumerate(t.bounds[n]):
                out: set = set()
                collect(b, out)
                deps[(n, j)] = out

        rec = set()
        for p in deps:
            seen, stack = set(), list(deps[p])
            while stack:
                q = stack.pop()
                if q == p:
                    rec.add(p)
                    break
                if q in seen:
                    continue
                seen.add(q)
                stack.extend(deps.get(q, ()))
        return rec

    def is_recursive(self, cls: str, j: int) -> bool:
        return (cls, j) in self._recursive

    def top(self, cls: str, j: int) -> TypeTerm:
        """Upper endpoint of ``?`` at parameter position ``(cls, j)``."""
        key = (cls, j)
        if key not in self._tops:
            if key in self._recursive:
                self._tops[key] = SelfBound(cls, j)
            else:
                decl = self.table.decls[cls]
                p = decl.params[j]
                self._tops[key] = self.ground(p.bound, {p.name: _WILD})
        return self._tops[key]

    def unbounded(self, cls: str, j: int) -> ArgInterval:
        return ArgInterval(NULL, self.top(cls, j), Surface.UNBOUNDED)

    def cut(self, sb: SelfBound) -> ClassType:
        """The recursive bound instantiated once with ``?``."""
        if sb not in self._cuts:
            self._cutting.add(sb)
            try:
                p = self.table.decls[sb.owner].params[sb.index]
                self._cuts[sb] = self.ground(p.bound, {p.name: _WILD})
            finally:
                self._cutting.discard(sb)
        return self._cuts[sb]

    def bound_for(self, cls: str, j: int, arg: ArgInterval) -> TypeTerm:
        """Declared bound of ``(cls, j)`` with the parameter itself replaced by ``arg``."""
        if not self.table.f_bounded_params[(cls, j)]:
            return self.top(cls, j)
        p = self.table.decls[cls].params[j]
        return self.ground(p.bound, {p.name: arg})

    # -- grounding / substitution -------------------------------------

    def ground(self, ref: RefType, env: dict) -> ClassType:
        """Instantiate a header expression; parameters come from ``env``."""
        if not ref.args:
            return self.canonical(ClassType(ref.name))
        args = tuple(self._ground_arg(a, env, ref.name, k) for k, a in enumerate(ref.args))
        return self.canonical(ClassType(ref.name, args))

    def _ground_arg(self, a: RefArg, env: dict, cls: str, k: int) -> ArgInterval:
        if a.surface is Surface.UNBOUNDED or a.type is NULL:
            return self.unbounded(cls, k)
        r = a.type
        if r.name in env and not r.args:
            v = env[r.name]
            if v is _WILD:
                return self.unbounded(cls, k)
            if a.surface is Surface.INVARIANT:
                return v
            if a.surface is Surface.EXTENDS:
                return ArgInterval(NULL, v.upper, Surface.EXTENDS)
            return ArgInterval(v.lower, self.top(cls, k), Surface.SUPER)
        s = self.ground(r, env)
        if a.surface is Surface.INVARIANT:
            return ArgInterval(s, s, Surface.INVARIANT)
        if a.surface is Surface.EXTENDS:
            return ArgInterval(NULL, s, Surface.EXTENDS)
        return ArgInterval(s, self.top(cls, k), Surface.SUPER)

    def supertype(self, t: ClassType) -> ClassType | None:
        """Declared superclass of ``t`` with ``t``'s arguments substituted."""
        ref = self.table.superclass_ref(t.name)
        if ref is None:
            return None
        env = dict(zip(self.table.decls[t.name].param_names, t.args))
        return self.ground(ref, env)

    def view_as(self, t: ClassType, ancestor: str) -> ClassType | None:
        """``t`` seen as an instance of ``ancestor`` (None when not a subclass)."""
        key = (t, ancestor)
        if key not in self._views:
            cur: ClassType | None = t
            while cur is not None and cur.name != ancestor:
                cur = self.supertype(cur)
            self._views[key] = cur
        return self._views[key]

    # -- canonical form -------------------------------------------------

    def canonical(self, t: TypeTerm) -> TypeTerm:
        if not isinstance(t, ClassType) or not t.args:
            return t
        hit = self._canon.get(t)
        if hit is not None:
            return hit
        args = tuple(self.canonical_arg(t.name, k, a) for k, a in enumerate(t.args))
        out = ClassType(t.name, args)
        self._canon[t] = out
        self._canon[out] = out
        return out

    def canonical_arg(self, cls: str, k: int, a: ArgInterval) -> ArgInterval:
        lo = self.canonical(a.lower)
        hi = self.canonical(a.upper)
        top = self.top(cls, k)
        if isinstance(top, SelfBound) and isinstance(hi, ClassType) and top not in self._cutting:
            if hi == self.cut(top):
                hi = top
        if lo is NULL and hi == top:
            return ArgInterval(NULL, top, Surface.UNBOUNDED)
        if lo == hi:
            return ArgInterval(lo, hi, Surface.INVARIANT)
        if lo is NULL:
            return ArgInterval(NULL, hi, Surface.EXTENDS)
        if hi == top:
            return ArgInterval(lo, hi, Surface.SUPER)
        # two explicit endpoints: not produced by the surface syntax
        return ArgInterval(lo, hi, a.surface)

    # -- decision -------------------------------------------------------

    def is_subtype(self, s: TypeTerm, t: TypeTerm) -> bool:
        return self._sub(self.canonical(s), self.canonical(t), frozenset())

    def contains(self, a1: ArgInterval, a2: ArgInterval) -> bool:
        """Interval inclusion ``a1 ⊆ a2``."""
        c = self.canonical
        return self._contains(ArgInterval(c(a1.lower), c(a1.upper)), ArgInterval(c(a2.lower), c(a2.upper)),
                              frozenset())

    def _contains(self, a1: ArgInterval, a2: ArgInterval, trust: frozenset) -> bool:
        return self._sub(a2.lower, a1.lower, trust) and self._sub(a1.upper, a2.upper, trust)

    def _sub(self, s: TypeTerm, t: TypeTerm, trust: frozenset) -> bool:
        if s == t or s is NULL:
            return True
        if t is NULL:
            return False
        key = (s, t, trust)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(t, SelfBound):
            res = True if t in trust else self._sub(s, self.cut(t), trust | {t})
        elif isinstance(s, SelfBound):
            res = self._sub(self.cut(s), t, trust)
        elif t.name == "Object":
            res = True
        elif not self.table.subclass(s.name, t.name):
            res = False
        else:
            v = self.view_as(s, t.name)
            res = all(self._contains(a, b, trust) for a, b in zip(v.args, t.args))
        self._memo[key] = res
        return res

    # -- well-formedness --------------------------------------------------

    def problem(self, t: TypeTerm) -> str | None:
        """Why ``t`` is not a well-formed ground type, or None."""
        if isinstance(t, NullType):
            return None
        if isinstance(t, SelfBound):
            return "bound marker is not a type"
        if t.name not in self.table.decls:
            return f"unknown class {t.name}"
        if len(t.args) != self.table.arity[t.name]:
            return f"{t.name} expects {self.table.arity[t.name]} argument(s), got {len(t.args)}"
        for k, a in enumerate(t.args):
            top = self.top(t.name, k)
            lo, hi = self.canonical(a.lower), self.canonical(a.upper)
            if hi is NULL:
                return "Null cannot be an upper endpoint (invariant or '? extends Null')"
            if isinstance(lo, SelfBound) or (isinstance(hi, SelfBound) and hi != top):
                return "misplaced bound marker"
            for e in (lo, hi):
                if e is not NULL and e != top:
                    why = self.problem(e)
                    if why:
                        return why
            if isinstance(top, SelfBound) and isinstance(hi, ClassType) and hi == self.cut(top):
                hi = top
            if lo is NULL and hi == top:
                continue
            if lo == hi:
                bound = self.bound_for(t.name, k, ArgInterval(lo, lo))
                if not self._sub(lo, bound, frozenset()):
                    return f"{lo!r} is not within the bound of {t.name} parameter {k + 1}"
            elif lo is NULL:
                if not self._sub(hi, top, frozenset()):
                    return f"{hi!r} is not within the bound of {t.name} parameter {k + 1}"
            elif hi == top:
                if not self._sub(lo, top, frozenset()):
                    return f"{lo!r} is not within the bound of {t.name} parameter {k + 1}"
            else:
                return "argument interval has two explicit endpoints"
        return None

    def is_well_formed(self, t: TypeTerm) -> bool:
        return self.problem(t) is None


def type_system(table: ValidatedClassTable) -> TypeSystem:
    ts = getattr(table, "_type_system", None)
    if ts is None:
        ts = TypeSystem(table)
        table._type_system = ts
    return ts


def check_headers(table: ValidatedClassTable) -> None:
    """Reject headers whose bounds or superclass arguments are ill-formed."""
    ts = type_system(table)
    for name in table.names:
        decl = table.decls[name]
        for j, p in enumerate(decl.params):
            if not ts.is_recursive(name, j):
                why = ts.problem(ts.top(name, j))
                if why:
                    raise IllFormedArgument(f"bound of {name}.{p.name}: {why}", p.bound.line, p.bound.col)
        ref = table.superclass_ref(name)
        if ref is None or not ref.args:
            continue
        env = {p.name: ts.unbounded(name, j) for j, p in enumerate(decl.params)}
        why = ts.problem(ts.ground(ref, env))
        if why:
            raise IllFormedArgument(f"superclass of {name}: {why}", ref.line, ref.col)


def contains(table: ValidatedClassTable, a1: ArgInterval, a2: ArgInterval) -> bool:
    return type_system(table).contains(a1, a2)


def is_subtype(table: ValidatedClassTable, sub: TypeTerm, sup: TypeTerm) -> bool:
    return type_system(table).is_subtype(sub, sup)


def canonical_form(table: ValidatedClassTable, t: TypeTerm) -> TypeTerm:
    return type_system(table).canonical(t)


def is_well_formed(table: ValidatedClassTable, t: TypeTerm) -> bool:
    return type_system(table).is_well_formed(t)


__all__ = [
    "OBJECT",
    "TypeSystem",
    "canonical_form",
    "check_headers",
    "contains",
    "is_subtype",
    "is_well_formed",
    "type_system",
]
