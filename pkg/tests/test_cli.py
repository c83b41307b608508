import importlib
import json
import subprocess
import sys

import pytest

from wildcat.cli import RunConfig, main

from conftest import CORPUS


@pytest.fixture
def write(tmp_path):
    def _w(text, name="t.wc"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _w


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParse:
    def test_sample_summary(self, capsys):
        code, out, _ = run(capsys, "parse", str(CORPUS / "sample.wc"))
        assert code == 0 and out.startswith("6 classes")
        assert "LinkedList/1; bounds: T extends Object; extends List<T>" in out

    def test_cycle(self, capsys, write):
        code, _, err = run(capsys, "parse", write("class A extends B\nclass B extends A"))
        assert code == 2 and "CyclicSubclassing" in err

    def test_f_bounded_flagged(self, capsys):
        code, out, _ = run(capsys, "parse", str(CORPUS / "fbounded.wc"))
        assert code == 0
        assert "Comparable/1; bounds: T extends Comparable<T>; extends Object; f-bounded" in out

    def test_syntax_error_position(self, capsys, write):
        code, _, err = run(capsys, "parse", write("class A<"))
        assert code == 2 and "SyntaxError at 1:9" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "parse", str(tmp_path / "nope.wc"))
        assert code == 2


class TestBuild:
    def test_json_eight_nodes(self, capsys, tmp_path):
        out = tmp_path / "g.json"
        code, log, _ = run(capsys, "build", str(CORPUS / "simple.wc"), "--depth", "1", "--format", "json", "-o", str(out))
        assert code == 0 and "level 1: 8 nodes" in log
        data = json.loads(out.read_text())
        assert len(data["nodes"]) == 8 and data["meta"] == {"depth": 1, "table": "simple"}
        assert [n["id"] for n in data["nodes"]] == list(range(8))
        assert [n["text"] for n in data["nodes"]] == sorted(n["text"] for n in data["nodes"])

    def test_depth0_frame(self, capsys, tmp_path):
        out = tmp_path / "g.json"
        assert run(capsys, "build", str(CORPUS / "sample.wc"), "--depth", "0", "-o", str(out))[0] == 0
        texts = {n["text"] for n in json.loads(out.read_text())["nodes"]}
        assert texts == {"Null", "Object", "Number", "Integer", "String"}

    def test_dot_contains_linkedlist_edge(self, capsys, tmp_path):
        out = tmp_path / "g.dot"
        assert run(capsys, "build", str(CORPUS / "sample.wc"), "--depth", "1", "--format", "dot", "-o", str(out))[0] == 0
        dot = out.read_text()
        assert '"LinkedList<String>" -> "List<?>" [color=black' in dot
        assert "color=blue" in dot and "color=red" in dot and "color=green" in dot

    def test_stdout_and_no_null(self, capsys):
        code, out, err = run(capsys, "build", str(CORPUS / "simple.wc"), "--no-null")
        assert code == 0 and len(json.loads(out)["nodes"]) == 7 and "level 1" in err

    def test_node_cap(self, capsys):
        code, _, err = run(capsys, "build", str(CORPUS / "sample.wc"), "--depth", "2", "--node-cap", "20")
        assert code == 3 and "ResourceLimit" in err

    def test_bad_depth(self, capsys):
        assert run(capsys, "build", str(CORPUS / "simple.wc"), "--depth", "-1")[0] == 2


class TestCheck:
    def test_sample_all_laws(self, capsys):
        code, out, _ = run(capsys, "check", str(CORPUS / "sample.wc"), "--depth", "2")
        assert code == 0
        for law in ("galois", "monad", "operad", "oracle"):
            assert f"PASS {law}: 0 violation(s)" in out

    def test_empty_table(self, capsys, write):
        code, out, _ = run(capsys, "check", write(""), "--depth", "2")
        assert code == 0 and "FAIL" not in out

    def test_corrupted_constructor(self, capsys, monkeypatch):
        C = importlib.import_module("wildcat.construct")

        def reversed_lower(self, a, b, trust=frozenset()):
            return self.leq(a.lower, b.lower, trust) and self.leq(a.upper, b.upper, trust)

        monkeypatch.setattr(C.LevelOrder, "within", reversed_lower)
        code, out, _ = run(capsys, "check", str(CORPUS / "sample.wc"), "--depth", "1", "--laws", "oracle")
        assert code == 1 and "FAIL oracle" in out and "extra_edges" in out

    def test_non_reversing_flip(self, capsys, monkeypatch):
        C = importlib.import_module("wildcat.construct")

        original = C.flip_transform
        monkeypatch.setattr(C, "flip_transform", lambda p: original(p).dual())
        code, out, _ = run(capsys, "check", str(CORPUS / "simple.wc"), "--depth", "1", "--laws", "oracle")
        # flip without order reversal makes the merged argument order cyclic
        assert code == 1 and "FAIL construction" in out and "QuotientNotAntisymmetric" in out

    def test_unknown_law(self, capsys):
        assert run(capsys, "check", str(CORPUS / "simple.wc"), "--laws", "bogus")[0] == 2


class TestYoneda:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "yoneda", str(CORPUS / "simple.wc"), "--class", "List", "--depth", "1")
        assert code == 0
        assert "template: List<X_1 extends Object>" in out
        assert "|f(List)| = 5" in out and "|Nat(hom(List,-), f)| = 5" in out and "bijective" in out

    def test_object(self, capsys):
        code, out, _ = run(capsys, "yoneda", str(CORPUS / "simple.wc"), "--class", "Object")
        assert code == 0 and "placeholders: 0" in out

    def test_number_bound(self, capsys, write):
        code, _, err = run(capsys, "yoneda", write("class Number\nclass Box<T extends Number>"), "--class", "Box")
        assert code == 4 and "UnsupportedBound" in err

    def test_unknown_class(self, capsys):
        assert run(capsys, "yoneda", str(CORPUS / "simple.wc"), "--class", "Nope")[0] == 2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("x", "build", node_cap=0)
    with pytest.raises(ValueError):
        RunConfig("x", "check", laws=("nope",))


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "wildcat.cli", "parse", str(CORPUS / "simple.wc")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "3 classes" in r.stdout
