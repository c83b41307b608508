import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildcat.errors import ArityMismatch, DslSyntaxError, IllFormedArgument, UnknownClass, ValidationError
from wildcat.model import NULL, OBJECT, ArgInterval, ClassType, Surface, type_depth, validate_class_table
from wildcat.parser import SourceText, parse_class_table, parse_type, render_type, tokenize
from wildcat.subtyping import type_system

from conftest import corpus_table


class TestTableParsing:
    def test_list_with_explicit_bound(self):
        t = parse_class_table("class List<T extends Object>")
        (d,) = t.decls
        assert d.name == "List" and [p.name for p in d.params] == ["T"]
        assert d.params[0].bound.name == "Object" and d.superclass is None

    def test_linkedlist_super_applies_param(self):
        t = parse_class_table("class List<T>\nclass LinkedList<T> extends List<T>")
        sup = t.decls[1].superclass
        assert sup.name == "List" and sup.args[0].type.name == "T"
        assert sup.args[0].surface is Surface.INVARIANT

    def test_empty_source(self):
        assert parse_class_table("").decls == ()
        assert validate_class_table(parse_class_table("")).names == ("Object",)

    def test_comments_and_origin(self):
        src = SourceText("// header\nclass A // trailing\n", "x.wc")
        t = parse_class_table(src)
        assert t.origin == "x.wc" and t.decls[0].name == "A" and t.decls[0].line == 2

    @pytest.mark.parametrize("text,line,col", [
        ("class", 1, 6),
        ("class A<", 1, 9),
        ("class A<T extends>", 1, 18),
        ("clas A", 1, 1),
        ("class A\nclass B extends List<?", 2, 23),
        ("class A @", 1, 9),
    ])
    def test_syntax_errors_are_positioned(self, text, line, col):
        with pytest.raises(DslSyntaxError) as ei:
            parse_class_table(text)
        assert (ei.value.line, ei.value.col) == (line, col)
        assert str(ei.value).startswith(f"SyntaxError at {line}:{col}")


class TestTypeParsing:
    def test_extends_object(self, sample):
        t = parse_type("List<? extends Object>", sample)
        assert t == ClassType("List", (ArgInterval(NULL, OBJECT, Surface.EXTENDS),))

    def test_invariant(self, sample):
        s = ClassType("String")
        assert parse_type("LinkedList<String>", sample) == ClassType("LinkedList", (ArgInterval(s, s),))

    def test_super_gets_bound(self, sample):
        n = ClassType("Number")
        assert parse_type("List<? super Number>", sample) == ClassType("List", (ArgInterval(n, OBJECT, Surface.SUPER),))

    def test_null(self, sample):
        assert parse_type("Null", sample) is NULL

    @pytest.mark.parametrize("text,err", [
        ("Nope", UnknownClass),
        ("List", ArityMismatch),
        ("String<Integer>", ArityMismatch),
        ("List<Null>", IllFormedArgument),
        ("List<? extends Null>", IllFormedArgument),
        ("List<Integer", DslSyntaxError),
    ])
    def test_type_errors(self, sample, text, err):
        with pytest.raises(err) as ei:
            parse_type(text, sample)
        assert ei.value.positioned

    def test_bound_violation(self, variance):
        with pytest.raises(IllFormedArgument):
            parse_type("Box<Object>", variance)
        with pytest.raises(IllFormedArgument):
            parse_type("Box<? extends Sink<Cat>>", variance)
        assert parse_type("Box<? super Cat>", variance)


class TestRendering:
    def test_examples(self, sample):
        ts = type_system(sample)
        assert render_type(ClassType("List", (ts.unbounded("List", 0),))) == "List<?>"
        i = ClassType("Integer")
        assert render_type(ClassType("LinkedList", (ArgInterval(i, i),))) == "LinkedList<Integer>"
        assert render_type(NULL) == "Null"

    def test_f_bounded_wildcard(self, fbounded):
        ts = type_system(fbounded)
        t = ts.canonical(parse_type("Comparable<? extends Comparable<?>>", fbounded))
        assert render_type(t) == "Comparable<?>"


# -- random well-formed types ------------------------------------------------

ROUND_TRIP_TABLES = ("sample", "fbounded", "variance", "pair")


def random_type(rng: random.Random, table, depth: int):
    ts = type_system(table)
    classes = list(table.names) if depth > 0 else list(table.nongeneric_classes)
    cls = rng.choice(classes)
    if not table.is_generic(cls):
        return ClassType(cls)
    args = []
    for k in range(table.arity[cls]):
        form = rng.choice(["?", "inv", "ext", "sup"])
        if form == "?":
            args.append(ts.unbounded(cls, k))
            continue
        x = random_type(rng, table, rng.randint(0, depth - 1))
        if form == "inv":
            args.append(ArgInterval(x, x))
        elif form == "ext":
            args.append(ArgInterval(NULL, x, Surface.EXTENDS))
        else:
            args.append(ArgInterval(x, ts.top(cls, k), Surface.SUPER))
    return ClassType(cls, tuple(args))


def well_formed_samples(count: int, seed: int = 7, max_depth: int = 3):
    rng = random.Random(seed)
    tables = {n: corpus_table(n) for n in ROUND_TRIP_TABLES}
    out = []
    while len(out) < count:
        name = rng.choice(ROUND_TRIP_TABLES)
        table = tables[name]
        t = random_type(rng, table, rng.randint(0, max_depth))
        if type_system(table).is_well_formed(t):
            out.append((table, t))
    return out


def test_round_trip_thousand_random_types():
    samples = well_formed_samples(1000)
    assert max(type_depth(t) for _, t in samples) == 3
    for table, t in samples:
        ts = type_system(table)
        c = ts.canonical(t)
        text = render_type(c)
        back = parse_type(text, table)
        assert back == c, text
        assert ts.canonical(parse_type(render_type(t), table)) == c


def test_canonical_form_is_idempotent_on_random_types():
    for table, t in well_formed_samples(300, seed=11):
        ts = type_system(table)
        assert ts.canonical(ts.canonical(t)) == ts.canonical(t)


# -- fuzzing -------------------------------------------------------------------

VOCAB = ["class", "extends", "super", "Null", "?", "<", ">", ",", "List", "T", "A", "Object",
         "Number", "\n", " ", "// c\n", "@", "#", "1"]


def fuzz_strings(n: int, seed: int = 3):
    rng = random.Random(seed)
    for _ in range(n):
        yield " ".join(rng.choice(VOCAB) for _ in range(rng.randint(0, 14)))


def test_fuzz_table_parser_only_raises_positioned_syntax_errors():
    outcomes = {"ok": 0, "syntax": 0}
    for s in fuzz_strings(10_000):
        try:
            t = parse_class_table(s)
        except DslSyntaxError as e:
            assert e.positioned and e.line >= 1 and e.col >= 1, s
            outcomes["syntax"] += 1
            continue
        outcomes["ok"] += 1
        try:
            validate_class_table(t)
        except ValidationError as e:
            assert e.kind != "Error"
    assert outcomes["ok"] > 0 and outcomes["syntax"] > 0


def test_fuzz_type_parser(sample):
    for s in fuzz_strings(3_000, seed=5):
        try:
            parse_type(s, sample)
        except (DslSyntaxError, ValidationError) as e:
            assert e.positioned, s


@given(st.text(alphabet="<>,? \nAclassextendsuperNul/", max_size=40))
@settings(max_examples=500, deadline=None)
def test_tokenizer_total_on_its_alphabet(text):
    try:
        toks = tokenize(text)
    except DslSyntaxError as e:
        # only a lone '/' is outside the token set
        assert "/" in text and e.positioned
        return
    assert toks[-1].kind == "EOF"
