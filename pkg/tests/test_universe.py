import pytest

from wildcat.construct import construct
from wildcat.parser import render_type
from wildcat.subtyping import TypeSystem
from wildcat.universe import compare_with_oracle, enumerate_universe

from conftest import CORPUS_NAMES, corpus_table


def test_simple_depth1_universe_has_eight_types():
    # computed by enumeration alone, before any construction
    u = enumerate_universe(corpus_table("simple"), 1)
    assert len(u) == 8
    assert {render_type(t) for t in u} == {"Null", "A", "Object", "List<A>", "List<Object>",
                                           "List<? extends A>", "List<? super A>", "List<?>"}


@pytest.mark.parametrize("name", CORPUS_NAMES)
@pytest.mark.parametrize("depth", [0, 1, 2])
def test_construction_matches_oracle(name, depth):
    table = corpus_table(name)
    cmp = compare_with_oracle(table, construct(table, depth).top, depth)
    assert cmp.ok, (cmp.missing_nodes[:5], cmp.extra_nodes[:5], cmp.missing_edges[:5], cmp.extra_edges[:5])


def test_oracle_catches_reversed_lower_endpoint(monkeypatch):
    def broken(self, a1, a2, trust):
        return self._sub(a1.lower, a2.lower, trust) and self._sub(a1.upper, a2.upper, trust)

    table = corpus_table("simple")
    level = construct(table, 1).top
    monkeypatch.setattr(TypeSystem, "_contains", broken)
    fresh = corpus_table("simple")
    cmp = compare_with_oracle(fresh, level, 1)
    assert not cmp.ok and cmp.violations > 0
