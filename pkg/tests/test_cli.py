import json

import pytest

from compident import reparametrization_from_json, verify_reparametrization
from compident.cli import main


@pytest.fixture
def chain4_file(tmp_path, chain4):
    path = tmp_path / "chain4.json"
    path.write_text(chain4.to_json())
    return str(path)


@pytest.fixture
def broken4_file(tmp_path, broken4):
    path = tmp_path / "broken4.json"
    path.write_text(broken4.to_json())
    return str(path)


@pytest.fixture
def wheel5_file(tmp_path, wheel5):
    path = tmp_path / "wheel5.json"
    path.write_text(wheel5.to_json())
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_chain4_json(self, capsys, chain4_file):
        code, out, _ = run(capsys, "analyze", chain4_file, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["strongly_connected"] is True
        assert doc["exchange"] == 2
        assert doc["isc_ordering"] == [1, 2, 3, 4]
        assert doc["dimension"]["d"] == 7 and doc["dimension"]["verdict"] is True

    def test_reduces_non_strongly_connected_input(self, capsys, tmp_path):
        path = tmp_path / "dangling.json"
        path.write_text('{"n":3,"edges":[[1,2],[2,1],[2,3]]}')
        code, out, _ = run(capsys, "analyze", str(path), "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["strongly_connected"] is False
        assert doc["reduced"] == {"n": 2, "edges": [[1, 2], [2, 1]]}
        assert doc["dimension"]["n"] == 2

    def test_human_readable(self, capsys, chain4_file):
        code, out, _ = run(capsys, "analyze", chain4_file)
        assert code == 0
        assert "strongly connected: yes" in out
        assert "d=7" in out

    def test_bad_file_is_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        code, _, err = run(capsys, "analyze", str(path))
        assert code == 2
        assert "error:" in err


class TestReparam:
    def test_chain4_success(self, capsys, chain4_file):
        code, out, _ = run(capsys, "reparam", chain4_file, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["matrix"][1][0] == "a12*a21"
        assert doc["cycle_basis"] == ["a12*a21", "a23*a32", "a23*a34*a42"]

    def test_broken4_exit_code(self, capsys, broken4_file):
        code, out, _ = run(capsys, "reparam", broken4_file, "--json")
        assert code == 1
        doc = json.loads(out)
        assert doc["reparametrization"] is None
        assert doc["dimension"]["d"] == 6

    def test_edge_bound_exit_code(self, capsys, tmp_path):
        path = tmp_path / "k3.json"
        path.write_text('{"n":3,"edges":[[1,2],[1,3],[2,1],[2,3],[3,1],[3,2]]}')
        code, out, _ = run(capsys, "reparam", str(path), "--json")
        assert code == 1
        assert json.loads(out)["reason"] == "edge-bound"

    def test_explicit_tree(self, capsys, wheel5_file):
        code, out, _ = run(
            capsys, "reparam", wheel5_file, "--tree", "a32,a43,a54,a15", "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tree_edges"] == [[5, 1], [2, 3], [3, 4], [4, 5]]
        assert doc["matrix"][1][0] == "a15*a21*a32*a43*a54"

    def test_bad_tree_flag(self, capsys, chain4_file):
        code, _, err = run(capsys, "reparam", chain4_file, "--tree", "a12,zz,a34")
        assert code == 2 and "error:" in err

    def test_round_trip(self, capsys, wheel5, wheel5_file):
        code, out, _ = run(capsys, "reparam", wheel5_file, "--json")
        assert code == 0
        rebuilt = reparametrization_from_json(wheel5, json.loads(out))
        assert verify_reparametrization(wheel5, rebuilt)


class TestIoEquation:
    def test_exchange_pair(self, capsys, tmp_path):
        path = tmp_path / "pair.json"
        path.write_text('{"n":2,"edges":[[1,2],[2,1]]}')
        code, out, _ = run(capsys, "io-equation", str(path))
        assert code == 0
        assert out.strip() == "y'' - (a11 + a22)*y' + (a11*a22 - a12*a21)*y = u1' - a22*u1"

    def test_non_strongly_connected_is_exit_2(self, capsys, tmp_path):
        path = tmp_path / "oneway.json"
        path.write_text('{"n":2,"edges":[[1,2]]}')
        code, _, err = run(capsys, "io-equation", str(path))
        assert code == 2 and "error:" in err


class TestCensus:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "census", "3", "4")
        assert code == 0
        assert out == "n,m,A,B,C,D,E,F\n3,4,9,7,5,4,4,4\n"

    def test_json_detail(self, capsys):
        code, out, _ = run(capsys, "census", "3", "3", "--detail")
        assert code == 0
        doc = json.loads(out)
        assert doc["A"] == 2 and doc["C"] == 1
        assert len(doc["classes"]) == 1
        assert doc["classes"][0]["size"] == 2

    def test_guardrail_maps_to_exit_2(self, capsys):
        code, _, err = run(capsys, "census", "7", "7")
        assert code == 2 and "guardrail" in err


class TestConjectures:
    def test_n3(self, capsys):
        code, out, _ = run(capsys, "conjectures", "3", "--json")
        assert code == 0
        doc = json.loads(out)
        assert {r["conjecture"] for r in doc} == {"collapse-2n-4", "collapse-n-1"}
        assert all(r["holds"] for r in doc)


class TestDeterminism:
    def test_identical_invocations_identical_bytes(self, capsys, chain4_file):
        _, first, _ = run(capsys, "analyze", chain4_file, "--json", "--seed", "3")
        _, second, _ = run(capsys, "analyze", chain4_file, "--json", "--seed", "3")
        assert first == second
        _, third, _ = run(capsys, "reparam", chain4_file, "--json")
        _, fourth, _ = run(capsys, "reparam", chain4_file, "--json")
        assert third == fourth
