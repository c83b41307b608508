"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` (or without ``-s``; the
lines are written straight to the terminal either way).
"""

import importlib
import io
import random
import time

import pytest

from wildcat.category import (
    CategoryPresentation,
    build_class_category,
    instantiation_functor,
    random_functor,
    yoneda_check,
)
from wildcat.cli import main
from wildcat.construct import construct
from wildcat.erasure import galois_check, monad_laws_check
from wildcat.errors import DslSyntaxError
from wildcat.laws import check_intermediates, check_random
from wildcat.parser import parse_class_table, parse_type, render_type
from wildcat.subtyping import TypeSystem, type_system
from wildcat.universe import compare_with_oracle, enumerate_universe

from conftest import CORPUS, CORPUS_NAMES, corpus_table
from test_parser import fuzz_strings, well_formed_samples


@pytest.fixture
def report(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def _report(n: int, ok: bool, detail: str):
        line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}"
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
        assert ok, line

    return _report


def _cli(*argv):
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


GALOIS_TABLES = ("sample", "fbounded", "variance", "simple", "pair")


def test_criterion_1_galois(report):
    details, ok = [], True
    for name in GALOIS_TABLES:
        t0 = time.perf_counter()
        code, out = _cli("check", str(CORPUS / f"{name}.wc"), "--depth", "2", "--laws", "galois")
        rep = galois_check(corpus_table(name), 2)
        secs = time.perf_counter() - t0
        good = code == 0 and "PASS galois: 0 violation(s)" in out and rep.ok and secs < 60
        if name == "sample":
            linked = [w for w in rep.witnesses if w[0].startswith("LinkedList<") and w[1] == "List"]
            good = good and ("LinkedList<String>", "List") in linked
            details.append(f"{len(linked)} LinkedList<T>/List witnesses")
        ok = ok and good
        details.append(f"{name}: {rep.checked_pairs} pairs, {len(rep.violations)} violations, {secs:.1f}s")
    report(1, ok, "galois depth 2; " + "; ".join(details))


def test_criterion_2_monad(report):
    details, ok = [], True
    for name in GALOIS_TABLES:
        table = corpus_table(name)
        t0 = time.perf_counter()
        code, out = _cli("check", str(CORPUS / f"{name}.wc"), "--depth", "2", "--laws", "monad")
        rep = monad_laws_check(table, 2)
        secs = time.perf_counter() - t0
        counit = rep.count("CounitEqualityFailed") == 0 and rep.count("CounitFailed") == 0
        ok = ok and code == 0 and rep.ok and counit and rep.generic_pairs == len(table.generic_classes) and secs < 60
        details.append(f"{name}: {rep.checked_pairs} checks, {len(rep.violations)} violations, {secs:.1f}s")
    report(2, ok, "unit/counit-equality/closure depth 2; " + "; ".join(details))


def test_criterion_3_operad_laws(report):
    rnd = check_random(corpus_table("sample"), trials=100, seed=2024, max_nodes=8)
    inter = [check_intermediates(corpus_table(n), 2) for n in CORPUS_NAMES]
    failures = len(rnd.failures) + sum(len(r.failures) for r in inter)
    checked = sum(rnd.checked.values()) + sum(sum(r.checked.values()) for r in inter)
    ok = failures == 0 and all(v >= 100 for v in rnd.checked.values())
    report(3, ok, f"copy=id, flip2=copy, flatten2=flatten: {checked} checks "
                  f"(100 random posets <= 8 nodes + intermediates of {len(CORPUS_NAMES)} tables), {failures} failures")


def _oracle_sweep():
    results = {}
    for name in CORPUS_NAMES:
        table = corpus_table(name)
        g = construct(table, 2)
        for d in (0, 1, 2):
            results[(name, d)] = compare_with_oracle(table, g.levels[d], d)
    return results


def test_criterion_4_oracle_equivalence(report):
    # node count from the enumeration oracle, before anything is constructed
    expected = len(enumerate_universe(corpus_table("simple"), 1))
    t0 = time.perf_counter()
    results = _oracle_sweep()
    secs = time.perf_counter() - t0
    built = len(construct(corpus_table("simple"), 1).top)
    bad = [k for k, v in results.items() if not v.ok]
    ok = not bad and expected == built == 8 and secs < 120
    report(4, ok, f"{len(results)} (table, depth) cases, both inclusions on nodes and edges; "
                  f"simple depth 1: oracle {expected} / built {built} nodes; failing {bad}; {secs:.1f}s")


def _small_categories():
    return [
        CategoryPresentation(("A", "B", "C", "D"),
                             [("f", "A", "B"), ("g", "A", "C"), ("h", "B", "D"), ("k", "C", "D")],
                             [(("f", "h"), ("g", "k"))]),
        CategoryPresentation(("A", "B", "C", "D"),
                             [("f", "A", "B"), ("g", "A", "C"), ("h", "B", "D"), ("k", "C", "D"), ("d", "A", "D")]),
        CategoryPresentation(("X", "Y", "Z"), [("p", "X", "Y"), ("q", "Y", "Z"), ("r", "X", "Z")]),
        CategoryPresentation(("S", "T"), [("a", "S", "T"), ("b", "S", "T")]),
    ]


def test_criterion_5_yoneda(report):
    t0 = time.perf_counter()
    rng = random.Random(5)
    cases = bijective = 0
    cats = _small_categories()
    functors = 0
    for cat in cats:
        assert cat.is_acyclic() and len(cat.objects) <= 4 and len(cat.generators) <= 5
        for _ in range(5):
            f = random_functor(cat, rng, max_size=5)
            functors += 1
            for c in cat.objects:
                rep = yoneda_check(cat, f, c)
                cases += 1
                bijective += rep.ok and rep.nat_count == len(f.object_map[c])
    simple = corpus_table("simple")
    cat = build_class_category(simple)
    f = instantiation_functor(simple, 1)
    rep = yoneda_check(cat, f, "List")
    inst_ok = rep.ok and rep.nat_count == rep.element_count == 5
    secs = time.perf_counter() - t0
    ok = bijective == cases and inst_ok and len(cats) >= 3 and functors >= 5 and secs < 30
    report(5, ok, f"{bijective}/{cases} bijections over {len(cats)} categories and {functors} functors; "
                  f"instantiation functor |Nat| = {rep.nat_count}, |f(List)| = {rep.element_count}; {secs:.1f}s")


def test_criterion_6_parser(report):
    samples = well_formed_samples(1000)
    mismatches = 0
    for table, t in samples:
        c = type_system(table).canonical(t)
        mismatches += parse_type(render_type(c), table) != c
    crashes = unpositioned = syntax = 0
    for s in fuzz_strings(10_000):
        try:
            parse_class_table(s)
        except DslSyntaxError as e:
            syntax += 1
            unpositioned += not e.positioned
        except Exception:  # noqa: BLE001 - any other exception is a crash
            crashes += 1
    ok = mismatches == 0 and crashes == 0 and unpositioned == 0 and len(samples) == 1000
    report(6, ok, f"round trip 1000 types: {mismatches} mismatches; fuzz 10000 strings: "
                  f"{syntax} positioned syntax errors, {unpositioned} unpositioned, {crashes} crashes")


def test_criterion_7_mutation(report, monkeypatch):
    def reversed_lower(self, a1, a2, trust):
        return self._sub(a1.lower, a2.lower, trust) and self._sub(a1.upper, a2.upper, trust)

    monkeypatch.setattr(TypeSystem, "_contains", reversed_lower)
    decider = _oracle_sweep()
    monkeypatch.undo()

    C = importlib.import_module("wildcat.construct")

    def reversed_within(self, a, b, trust=frozenset()):
        return self.leq(a.lower, b.lower, trust) and self.leq(a.upper, b.upper, trust)

    monkeypatch.setattr(C.LevelOrder, "within", reversed_within)
    constructor = _oracle_sweep()
    monkeypatch.undo()

    bad_d = sum(not v.ok for v in decider.values())
    bad_c = sum(not v.ok for v in constructor.values())
    ok = bad_d > 0 and bad_c > 0 and sum(v.violations for v in decider.values()) > 0
    report(7, ok, f"reversed lower endpoint: decider mutant fails {bad_d}/{len(decider)} oracle cases, "
                  f"constructor mutant fails {bad_c}/{len(constructor)}")
