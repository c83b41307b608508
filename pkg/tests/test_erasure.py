import json

import pytest

from wildcat.erasure import (
    canonical_instantiation,
    erase,
    galois_check,
    monad_laws_check,
    monotonicity_check,
)
from wildcat.errors import NullHasNoErasure, UnknownClass
from wildcat.model import NULL, OBJECT
from wildcat.parser import parse_type, render_type
from wildcat.subtyping import is_subtype

from conftest import CORPUS_NAMES, corpus_table


class TestErase:
    def test_examples(self, sample):
        assert erase(parse_type("LinkedList<String>", sample)) == "LinkedList"
        assert erase(OBJECT) == "Object"
        assert erase(parse_type("List<? extends List<Integer>>", sample)) == "List"

    def test_null(self):
        with pytest.raises(NullHasNoErasure):
            erase(NULL)


class TestInstantiation:
    def test_list(self, sample):
        g = canonical_instantiation(sample, "List")
        assert render_type(g) == "List<?>"
        assert g == canonical_instantiation(sample, "List")
        from wildcat.subtyping import canonical_form

        assert canonical_form(sample, parse_type("List<? extends Object>", sample)) == g

    def test_non_generic(self, sample):
        assert canonical_instantiation(sample, "Object") == OBJECT

    def test_f_bounded(self, fbounded):
        g = canonical_instantiation(fbounded, "Comparable")
        assert render_type(g) == "Comparable<?>"
        from wildcat.subtyping import is_well_formed

        assert is_well_formed(fbounded, g)

    def test_bounded(self, variance):
        g = canonical_instantiation(variance, "Box")
        assert g.args[0].upper.name == "Animal"

    def test_unknown(self, sample):
        with pytest.raises(UnknownClass):
            canonical_instantiation(sample, "Nope")


class TestGalois:
    def test_linkedlist_list_instance(self, sample):
        rep = galois_check(sample, 1)
        assert rep.ok
        witnesses = {w for w in rep.witnesses if w[1] == "List"}
        assert ("LinkedList<String>", "List") in witnesses
        assert is_subtype(sample, parse_type("LinkedList<String>", sample), canonical_instantiation(sample, "List"))

    def test_both_sides_false(self, sample):
        a = parse_type("List<Integer>", sample)
        assert not sample.subclass("List", "String")
        assert not is_subtype(sample, a, canonical_instantiation(sample, "String"))

    @pytest.mark.parametrize("name", CORPUS_NAMES)
    def test_zero_violations_depth2(self, name):
        rep = galois_check(corpus_table(name), 2)
        assert rep.ok and rep.checked_pairs == rep.generic_pairs + rep.nongeneric_pairs > 0

    def test_report_json(self, sample):
        d = json.loads(galois_check(sample, 1).to_json())
        assert set(d) >= {"checked_pairs", "violations", "depth"}


class TestMonad:
    @pytest.mark.parametrize("name", CORPUS_NAMES)
    def test_zero_violations_depth2(self, name):
        assert monad_laws_check(corpus_table(name), 2).ok

    def test_unit_example(self, sample):
        a = parse_type("LinkedList<Integer>", sample)
        assert is_subtype(sample, a, canonical_instantiation(sample, erase(a)))
        assert render_type(canonical_instantiation(sample, erase(a))) == "LinkedList<?>"

    def test_counit_equality(self, sample):
        for b in sample.generic_classes:
            assert erase(canonical_instantiation(sample, b)) == b

    @pytest.mark.parametrize("name", CORPUS_NAMES)
    def test_monotone(self, name):
        assert monotonicity_check(corpus_table(name), 2).ok

    def test_detects_broken_counit(self, sample, monkeypatch):
        import wildcat.erasure as E

        # erasing to a proper subclass keeps F(G(b)) <= b but breaks equality
        monkeypatch.setattr(E, "erase", lambda t: "LinkedList" if t.name == "List" else t.name)
        rep = E.monad_laws_check(sample, 1)
        assert rep.count("CounitEqualityFailed") == 1 and rep.count("CounitFailed") == 0
        monkeypatch.setattr(E, "erase", lambda t: "Object" if t.name == "LinkedList" else t.name)
        assert E.monad_laws_check(sample, 1).count("CounitFailed") == 1
