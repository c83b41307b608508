"""Class tables, ground types and interval-encoded type arguments."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .errors import ArityMismatch, CyclicSubclassing, DuplicateClass, IllFormedArgument, UnknownClass
from .poset import Poset


class Surface(Enum):
    """Source syntax an argument interval came from."""

    INVARIANT = "Invariant"
    EXTENDS = "Extends"
    SUPER = "Super"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class NullType:
    def __repr__(self) -> str:
        return "Null"


NULL = NullType()


@dataclass(frozen=True)
class SelfBound:
    """Upper endpoint standing for the bound of a recursively-bounded parameter.

    Appears only as the upper end of an interval at position ``(owner, index)``.
    It unfolds to the owner's bound instantiated once with ``?``.
    """

    owner: str
    index: int

    def __repr__(self) -> str:
        return f"<bound {self.owner}#{self.index}>"


@dataclass(frozen=True)
class ArgInterval:
    lower: "TypeTerm"
    upper: "TypeTerm"
    surface: Surface = Surface.INVARIANT

    def __repr__(self) -> str:
        return f"[{self.lower!r},{self.upper!r}]"


@dataclass(frozen=True)
class ClassType:
    name: str
    args: tuple[ArgInterval, ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}<{', '.join(map(repr, self.args))}>"


TypeTerm = Union[NullType, ClassType, SelfBound]
OBJECT = ClassType("Object")


def invariant(t: TypeTerm) -> ArgInterval:
    return ArgInterval(t, t, Surface.INVARIANT)


def type_depth(t: TypeTerm) -> int:
    """Syntactic nesting depth.

    Endpoints left implicit by the surface form (the lower end of ``? extends``,
    the upper end of ``? super`` and both ends of ``?``) do not count.
    """
    if not isinstance(t, ClassType) or not t.args:
        return 0
    best = 0
    for a in t.args:
        if a.surface is Surface.INVARIANT or a.surface is Surface.SUPER:
            best = max(best, type_depth(a.lower))
        elif a.surface is Surface.EXTENDS:
            best = max(best, type_depth(a.upper))
    return best + 1


def erase_name(t: TypeTerm) -> str | None:
    return t.name if isinstance(t, ClassType) else None


# --- declarations -------------------------------------------------------

@dataclass(frozen=True)
class RefType:
    """A type expression inside a class header; names may be parameters."""

    name: str
    args: tuple["RefArg", ...] = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def mentions(self, names) -> bool:
        if self.name in names:
            return True
        return any(a.mentions(names) for a in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}<{', '.join(map(str, self.args))}>"


@dataclass(frozen=True)
class RefArg:
    surface: Surface
    type: RefType | NullType | None = None  # None only for UNBOUNDED

    def mentions(self, names) -> bool:
        return isinstance(self.type, RefType) and self.type.mentions(names)

    def __str__(self) -> str:
        if self.surface is Surface.UNBOUNDED:
            return "?"
        body = "Null" if self.type is NULL else str(self.type)
        if self.surface is Surface.EXTENDS:
            return f"? extends {body}"
        if self.surface is Surface.SUPER:
            return f"? super {body}"
        return body


OBJECT_REF = RefType("Object")


@dataclass(frozen=True)
class TypeParam:
    name: str
    bound: RefType = OBJECT_REF


@dataclass(frozen=True)
class ClassDecl:
    name: str
    params: tuple[TypeParam, ...] = ()
    superclass: RefType | None = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def header(self) -> str:
        s = f"class {self.name}"
        if self.params:
            ps = []
            for p in self.params:
                ps.append(p.name if p.bound == OBJECT_REF else f"{p.name} extends {p.bound}")
            s += f"<{', '.join(ps)}>"
        if self.superclass is not None and self.superclass != OBJECT_REF:
            s += f" extends {self.superclass}"
        return s


@dataclass(frozen=True)
class ClassTable:
    decls: tuple[ClassDecl, ...] = ()
    origin: str = "<inline>"


OBJECT_DECL = ClassDecl("Object")


class ValidatedClassTable:
    """A checked class table.  Compared and hashed by identity."""

    def __init__(self, table: ClassTable, decls: dict[str, ClassDecl]):
        self.table = table
        self.origin = table.origin
        self.decls = decls
        self.names = tuple(decls)
        self.arity = {n: len(d.params) for n, d in decls.items()}
        self.bounds = {n: tuple(p.bound for p in d.params) for n, d in decls.items()}
        self.f_bounded_params = {
            (n, j): p.bound.mentions({p.name}) for n, d in decls.items() for j, p in enumerate(d.params)
        }
        self.f_bounded = {n: any(self.f_bounded_params[(n, j)] for j in range(len(d.params)))
                          for n, d in decls.items()}
        self.parent = {n: (None if n == "Object" else (d.superclass.name if d.superclass else "Object"))
                       for n, d in decls.items()}
        self._ancestors: dict[str, tuple[str, ...]] = {}

    def __repr__(self) -> str:
        return f"ValidatedClassTable({self.origin!r}, {len(self.names)} classes)"

    def __contains__(self, name: str) -> bool:
        return name in self.decls

    def is_generic(self, name: str) -> bool:
        return self.arity[name] > 0

    @property
    def generic_classes(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if self.arity[n])

    @property
    def nongeneric_classes(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if not self.arity[n])

    def ancestors(self, name: str) -> tuple[str, ...]:
        """``name`` followed by its superclasses up to Object."""
        if name not in self._ancestors:
            chain = [name]
            while self.parent[chain[-1]] is not None:
                chain.append(self.parent[chain[-1]])
            self._ancestors[name] = tuple(chain)
        return self._ancestors[name]

    def subclass(self, a: str, b: str) -> bool:
        return b in self.ancestors(a)

    def superclass_ref(self, name: str) -> RefType | None:
        if name == "Object":
            return None
        return self.decls[name].superclass or OBJECT_REF


def _check_ref(ref, decls, scope, *, where, allow_param_head=True):
    """Resolve names in a header type expression against ``decls`` and ``scope``."""
    if ref is NULL:
        return
    if ref.name in scope:
        if not allow_param_head:
            raise UnknownClass(f"{where}: parameter {ref.name} cannot be a superclass", ref.line, ref.col)
        if ref.args:
            raise ArityMismatch(f"{where}: type parameter {ref.name} takes no arguments", ref.line, ref.col)
        return
    if ref.name not in decls:
        raise UnknownClass(f"{where}: unknown class {ref.name}", ref.line, ref.col)
    want = len(decls[ref.name].params)
    if len(ref.args) != want:
        raise ArityMismatch(f"{where}: {ref.name} expects {want} argument(s), got {len(ref.args)}",
                            ref.line, ref.col)
    for a in ref.args:
        if a.surface is Surface.UNBOUNDED:
            continue
        if a.type is NULL:
            if a.surface is not Surface.SUPER:
                raise IllFormedArgument(f"{where}: Null is only allowed as a '? super' bound", ref.line, ref.col)
            continue
        _check_ref(a.type, decls, scope, where=where)


def validate_class_table(table: ClassTable) -> ValidatedClassTable:
    """Check names, arities and acyclicity; annotate arity, bounds and F-bound flags."""
    decls: dict[str, ClassDecl] = {"Object": OBJECT_DECL}
    for d in table.decls:
        if d.name in decls or d.name == "Null":
            raise DuplicateClass(f"class {d.name} declared twice", d.line, d.col)
        names = d.param_names
        if len(set(names)) != len(names):
            raise DuplicateClass(f"class {d.name} repeats a type parameter name", d.line, d.col)
        decls[d.name] = d

    for d in table.decls:
        for p in d.params:
            others = set(d.param_names) - {p.name}
            if p.bound.name == p.name:
                raise UnknownClass(f"{d.name}.{p.name}: a parameter cannot bound itself directly",
                                   p.bound.line, p.bound.col)
            if p.bound.mentions(others):
                bad = sorted(n for n in others if p.bound.mentions({n}))
                raise UnknownClass(f"{d.name}.{p.name}: bound may only mention {p.name}, not {bad[0]}",
                                   p.bound.line, p.bound.col)
            _check_ref(p.bound, decls, {p.name}, where=f"bound of {d.name}.{p.name}")
        if d.superclass is not None:
            _check_ref(d.superclass, decls, set(d.param_names), where=f"superclass of {d.name}",
                       allow_param_head=False)

    vt = ValidatedClassTable(table, decls)
    # cycle detection along the unique parent pointers
    state: dict[str, int] = {}
    for start in vt.names:
        path = []
        n = start
        while n is not None and state.get(n) != 2:
            if state.get(n) == 1:
                cyc = path[path.index(n):] + [n]
                d = decls[start]
                raise CyclicSubclassing(" -> ".join(cyc), d.line, d.col)
            state[n] = 1
            path.append(n)
            n = vt.parent[n]
        for m in path:
            state[m] = 2

    from .subtyping import check_headers  # needs the validated structure

    check_headers(vt)
    return vt


def subclass_order(table: ValidatedClassTable) -> Poset:
    """Reflexive-transitive closure of the extends edges over class names."""
    names = table.names
    idx = {n: i for i, n in enumerate(names)}
    leq = np.zeros((len(names), len(names)), dtype=bool)
    for n in names:
        for a in table.ancestors(n):
            leq[idx[n], idx[a]] = True
    return Poset(names, leq)
