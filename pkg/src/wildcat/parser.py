"""Recursive-descent parser for the class-table DSL and type expressions.

Grammar (LL(1); ``//`` comments, free whitespace)::

    table   := decl* ;
    decl    := "class" IDENT tparams? ("extends" stype)? ;
    tparams := "<" tparam ("," tparam)* ">" ;
    tparam  := IDENT ("extends" stype)? ;
    stype   := IDENT targs? ;
    targs   := "<" targ ("," targ)* ">" ;
    targ    := "?" | "?" "extends" gtype | "?" "super" gtype | gtype ;
    gtype   := IDENT targs? | "Null" ;
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ArityMismatch, DslSyntaxError, IllFormedArgument, UnknownClass, WildcatError
from .model import (
    NULL,
    OBJECT_REF,
    ArgInterval,
    ClassDecl,
    ClassTable,
    ClassType,
    NullType,
    RefArg,
    RefType,
    SelfBound,
    Surface,
    TypeParam,
    TypeTerm,
    ValidatedClassTable,
)
from .subtyping import type_system

KEYWORDS = {"class", "extends", "super", "Null"}
_TOKEN = re.compile(r"(?P<ws>[ \t\r\n]+)|(?P<comment>//[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[<>,?])")


@dataclass(frozen=True)
class SourceText:
    text: str
    origin: str = "<inline>"

    @classmethod
    def from_path(cls, path) -> "SourceText":
        p = Path(path)
        return cls(p.read_text(encoding="utf-8"), str(p))


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, keyword text, punctuation text, or EOF
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                                 expected="token")
        kind = m.lastgroup
        s = m.group()
        if kind == "ident":
            out.append(Token(s if s in KEYWORDS else "IDENT", s, line, pos - line_start + 1))
        elif kind == "punct":
            out.append(Token(s, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    out.append(Token("EOF", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, kind: str) -> bool:
        return self.tok.kind == kind

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail(what or kind)
        return self.next()

    def fail(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise DslSyntaxError(f"expected {expected}, found {found}", t.line, t.col, expected=expected)

    # table := decl*
    def table(self, origin: str) -> ClassTable:
        decls = []
        while not self.at("EOF"):
            decls.append(self.decl())
        return ClassTable(tuple(decls), origin)

    def decl(self) -> ClassDecl:
        kw = self.expect("class", "'class'")
        name = self.expect("IDENT", "class name")
        params: list[TypeParam] = []
        if self.at("<"):
            self.next()
            params.append(self.tparam())
            while self.at(","):
                self.next()
                params.append(self.tparam())
            self.expect(">", "',' or '>'")
        sup = None
        if self.at("extends"):
            self.next()
            sup = self.stype()
        return ClassDecl(name.text, tuple(params), sup, kw.line, kw.col)

    def tparam(self) -> TypeParam:
        name = self.expect("IDENT", "type parameter name")
        if self.at("extends"):
            self.next()
            return TypeParam(name.text, self.stype())
        return TypeParam(name.text, OBJECT_REF)

    def stype(self) -> RefType:
        t = self.expect("IDENT", "class name")
        args = self.targs() if self.at("<") else ()
        return RefType(t.text, args, t.line, t.col)

    def targs(self) -> tuple[RefArg, ...]:
        self.expect("<")
        args = [self.targ()]
        while self.at(","):
            self.next()
            args.append(self.targ())
        self.expect(">", "',' or '>'")
        return tuple(args)

    def targ(self) -> RefArg:
        if self.at("?"):
            self.next()
            if self.at("extends"):
                self.next()
                return RefArg(Surface.EXTENDS, self.gtype())
            if self.at("super"):
                self.next()
                return RefArg(Surface.SUPER, self.gtype())
            return RefArg(Surface.UNBOUNDED, None)
        return RefArg(Surface.INVARIANT, self.gtype())

    def gtype(self) -> RefType | NullType:
        if self.at("Null"):
            self.next()
            return NULL
        if not self.at("IDENT"):
            self.fail("type")
        return self.stype()


def _text(src) -> tuple[str, str]:
    if isinstance(src, SourceText):
        return src.text, src.origin
    return src, "<inline>"


def parse_class_table(src: SourceText | str) -> ClassTable:
    """Parse DSL text into an unvalidated :class:`ClassTable`."""
    text, origin = _text(src)
    return _Parser(text).table(origin)


def load_table(path) -> ValidatedClassTable:
    from .model import validate_class_table

    return validate_class_table(parse_class_table(SourceText.from_path(path)))


def parse_type(src: SourceText | str, table: ValidatedClassTable) -> TypeTerm:
    """Parse a ground type; wildcards become intervals, surface syntax is kept."""
    text, _ = _text(src)
    p = _Parser(text)
    ref = p.gtype()
    p.expect("EOF", "end of input")
    if ref is NULL:
        return NULL
    return _resolve(ref, table)


def _resolve(ref: RefType, table: ValidatedClassTable) -> ClassType:
    ts = type_system(table)
    if ref.name not in table.decls:
        raise UnknownClass(f"unknown class {ref.name}", ref.line, ref.col)
    n = table.arity[ref.name]
    if len(ref.args) != n:
        raise ArityMismatch(f"{ref.name} expects {n} argument(s), got {len(ref.args)}", ref.line, ref.col)
    args = []
    for k, a in enumerate(ref.args):
        if a.surface is Surface.UNBOUNDED:
            args.append(ts.unbounded(ref.name, k))
            continue
        if a.type is NULL:
            if a.surface is Surface.SUPER:
                args.append(ArgInterval(NULL, ts.top(ref.name, k), Surface.SUPER))
                continue
            raise IllFormedArgument("Null is only allowed as a '? super' bound", ref.line, ref.col)
        e = _resolve(a.type, table)
        if a.surface is Surface.INVARIANT:
            args.append(ArgInterval(e, e, Surface.INVARIANT))
        elif a.surface is Surface.EXTENDS:
            args.append(ArgInterval(NULL, e, Surface.EXTENDS))
        else:
            args.append(ArgInterval(e, ts.top(ref.name, k), Surface.SUPER))
    t = ClassType(ref.name, tuple(args))
    why = ts.problem(t)
    if why:
        raise IllFormedArgument(why, ref.line, ref.col)
    return t


def render_type(t: TypeTerm) -> str:
    """Minimal surface syntax, driven by each argument's surface tag."""
    if isinstance(t, NullType):
        return "Null"
    if isinstance(t, SelfBound):
        return repr(t)
    if not t.args:
        return t.name
    return f"{t.name}<{', '.join(_render_arg(a) for a in t.args)}>"


def _render_arg(a: ArgInterval) -> str:
    if a.surface is Surface.UNBOUNDED:
        return "?"
    if a.surface is Surface.EXTENDS:
        return f"? extends {render_type(a.upper)}"
    if a.surface is Surface.SUPER:
        return f"? super {render_type(a.lower)}"
    return render_type(a.lower)


def render_table(table: ValidatedClassTable | ClassTable) -> str:
    decls = table.decls.values() if isinstance(table, ValidatedClassTable) else table.decls
    return "\n".join(d.header() for d in decls)


__all__ = [
    "SourceText",
    "WildcatError",
    "load_table",
    "parse_class_table",
    "parse_type",
    "render_table",
    "render_type",
    "tokenize",
]
