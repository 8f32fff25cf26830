import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from ellipsing.cli import run

CORPUS = Path(__file__).resolve().parents[1] / "src" / "ellipsing" / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def graph_file(tmp_path):
    def write(text, name="g.graph"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


class TestClassify:
    @pytest.mark.parametrize("path", sorted(CORPUS.glob("*.graph")), ids=lambda p: p.stem)
    def test_corpus_matches_golden(self, path):
        code, out, err = call("classify", str(path), "--json")
        assert code == 0 and err == ""
        assert out == (GOLDEN / f"{path.stem}.json").read_text(encoding="utf-8")

    def test_corpus_is_complete(self):
        assert {p.stem for p in CORPUS.glob("*.graph")} == {p.stem for p in GOLDEN.glob("*.json")}

    def test_text(self):
        code, out, _ = call("classify", str(CORPUS / "cu_2_5.graph"))
        assert code == 0
        assert "class: Cu(2,5)" in out and "degree (formula): 3" in out

    def test_not_negative_definite(self, graph_file):
        p = graph_file("vertex a weight=-2\nvertex b weight=-2\nedge a b mult=2\n")
        code, out, err = call("classify", p)
        assert code == 2 and out == ""
        assert err.startswith("error: ") and err.count("\n") == 1

    def test_parse_error(self, graph_file):
        p = graph_file("vertex a weight=-2\nedge a zz\n")
        code, out, err = call("classify", p)
        assert code == 1 and out == ""
        assert "line 2" in err and err.count("\n") == 1

    def test_missing_file(self, tmp_path):
        code, out, err = call("classify", str(tmp_path / "nope.graph"))
        assert code == 1 and out == "" and err.startswith("error: ")


class TestCycle:
    def test_json(self):
        code, out, _ = call("cycle", str(CORPUS / "no_1.graph"), "--json")
        rep = json.loads(out)
        assert code == 0
        assert rep["fundamental_cycle"] == [6, 3, 2, 1]
        assert rep["self_intersection"] == -1 and rep["chi"] == 0

    def test_text(self):
        code, out, _ = call("cycle", str(CORPUS / "cu_2_5.graph"))
        assert code == 0 and "Z.Z = -3" in out and "singular points of E: 2" in out

    def test_not_negative_definite(self, graph_file):
        p = graph_file("vertex a weight=-2\nvertex b weight=-2\nedge a b mult=2\n")
        assert call("cycle", p)[0] == 2


class TestHJ:
    def test_wahl(self):
        code, out, _ = call("hj", "9/2", "--json")
        rep = json.loads(out)
        assert code == 0
        assert rep["expansion"] == [5, 2]
        assert (rep["multiplicity"], rep["embedding_dimension"], rep["ell"]) == (5, 6, 2)
        assert rep["wahl"] == {"n": 3, "q": 1} and rep["artin"] is None

    def test_artin(self):
        rep = json.loads(call("hj", "4/1", "--json")[1])
        assert rep["artin"] == {"t": 4, "artin": 3, "non_artin": 1}

    def test_text(self):
        code, out, _ = call("hj", "9/2")
        assert code == 0 and "9/2 = [5,2]" in out and "Wahl: n=3, q=1" in out

    @pytest.mark.parametrize("arg", ["9/3", "x", "2/9"])
    def test_bad(self, arg):
        code, out, err = call("hj", arg)
        assert code == 1 and out == "" and err.count("\n") == 1


class TestMoves:
    def test_constant(self):
        code, out, _ = call("moves", "Tr(3,3,3)", "--json")
        assert code == 0
        assert sorted(m["target"] for m in json.loads(out)) == ["Cu(3,3,3)", "Ta(3,4)"]

    def test_marked(self):
        code, out, _ = call("moves", "Cu(2,[5,2],3,4,5)", "--json")
        (mv,) = json.loads(out)
        assert code == 0
        assert mv == {"source": "Cu(2,3,4,5,2,5)", "target": "Cu(4,4,5)",
                      "rule": "wahl-fuse", "chains": ["[5,2]"], "degree_drop": 2}

    def test_catalog(self):
        code, out, _ = call("moves", "Cu(4,5)", "--chains", "[4]")
        assert code == 0 and "El(4)" in out and "wahl-el" in out

    def test_non_wahl(self):
        code, out, err = call("moves", "Cu(3,[5],4)")
        assert code == 1 and out == "" and "5/1" in err

    def test_none(self):
        assert call("moves", "El(3)")[1] == "no moves\n"


class TestReach:
    def test_found(self):
        code, out, _ = call("reach", "Cu(2,5)", "Cu(3)", "--max-steps", "1")
        assert code == 0 and out.startswith("Cu(2,5) -> Cu(3)")

    def test_unreachable(self):
        code, out, err = call("reach", "El(3)", "Cu(3)", "--max-steps", "5")
        assert code == 3 and out == "none\n" and err == ""

    def test_json(self):
        code, out, _ = call("reach", "Tr(3,3,3)", "El(3)", "--max-steps", "4", "--json")
        assert code == 0
        assert [m["target"] for m in json.loads(out)] == ["Cu(3,3,3)", "Cu(3,4)", "Cu(3)", "El(3)"]

    def test_wahl_catalog_flag(self):
        code, _, _ = call("reach", "Cu(4,5)", "El(4)", "--max-steps", "1", "--wahl-max-n", "2")
        assert code == 0

    def test_missing_steps(self):
        code, out, err = call("reach", "Cu(2,5)", "Cu(3)")
        assert code == 1 and out == "" and err.count("\n") == 1

    def test_bad_class(self):
        assert call("reach", "Cu(2,2)", "Cu(3)", "--max-steps", "1")[0] == 1


class TestDag:
    def test_writes_files(self, tmp_path):
        dot, js = tmp_path / "a.dot", tmp_path / "a.json"
        code, out, _ = call("dag", "--max-degree", "3", "--max-length", "3", "--dot", str(dot), "--json", str(js))
        assert code == 0 and "acyclic: True" in out
        assert dot.read_text(encoding="utf-8").startswith("digraph")
        doc = json.loads(js.read_text(encoding="utf-8"))
        assert "Cu(3)" in doc["nodes"]

    def test_bound_overflow(self, tmp_path):
        code, out, err = call("dag", "--max-degree", "50", "--max-length", "3", "--dot", str(tmp_path / "x.dot"))
        assert code == 1 and out == "" and "bounds" in err


class TestQuotient:
    def test_json(self):
        code, out, _ = call("quotient", "z2", "--cusp", "2,3", "--json")
        rep = json.loads(out)
        assert code == 0
        assert rep["cover"]["class"] == "Cu(2,4)" and rep["cover"]["minimally_elliptic"]
        assert not rep["quotient"]["minimally_elliptic"]
        assert "vertex L1 weight=-2" in rep["quotient"]["graph"]

    def test_text_is_graph_format(self):
        code, out, _ = call("quotient", "z2", "--cusp", "2,2,3")
        assert code == 0 and "# cover: Cu(2,2,2,4)" in out

    @pytest.mark.parametrize("arg", ["2,2", "a,b", "3"])
    def test_bad(self, arg):
        assert call("quotient", "z2", "--cusp", arg)[0] == 1


class TestFixtures:
    def test_text(self):
        code, out, _ = call("fixtures", "mu3")
        assert code == 0 and "FAIL" not in out and "T1=12" in out

    def test_json(self):
        code, out, _ = call("fixtures", "mu3", "--json")
        doc = json.loads(out)
        assert code == 0 and len(doc["fixtures"]) == 2
        assert all(c["passed"] for c in doc["checks"])


class TestStability:
    @pytest.mark.parametrize("argv", [
        ("hj", "25/9", "--json"),
        ("moves", "Tr(2,3,4)", "--json", "--wahl-max-n", "4"),
        ("fixtures", "mu3", "--json"),
        ("quotient", "z2", "--cusp", "3,2,4", "--json"),
    ])
    def test_json_byte_stable(self, argv):
        assert call(*argv)[1] == call(*argv)[1]

    def test_unknown_command(self):
        code, out, err = call("frobnicate")
        assert code == 1 and out == "" and err.count("\n") == 1

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "ellipsing", "hj", "9/2", "--json"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and json.loads(proc.stdout)["ell"] == 2
