import io
import json

import pytest

from weyrform import Matrix, cli
from weyrform.harness import brute_force_commutant
from weyrform.io import (DocumentError, dumps, loads, matrix_from_document, matrix_to_document,
                         pair_from_document, pair_to_document)
from weyrform.linalg import conjugate, jordan_block, mat_mul
from weyrform.normal_form import CommutingPair
from weyrform.structure import SegreStructure, build_weyr_matrix, jordan_matrix, weyr_characteristic

from conftest import F5, GOLDEN


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_doc(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(dumps(doc), encoding="utf-8")
    return str(path)


# -- documents -------------------------------------------------------------------

def test_matrix_document_round_trip():
    m = Matrix([[1, "-1/2"], [0, 2**70]])
    text = dumps(matrix_to_document(m))
    assert text.endswith("\n")
    assert '["1", "-1/2"]' in text
    back = matrix_from_document(loads(text))
    assert back == m
    assert dumps(matrix_to_document(back)) == text


def test_pair_document_round_trip():
    pair = CommutingPair(jordan_block(3, F5), Matrix.zeros(3, 3, F5))
    doc = pair_to_document(pair)
    assert doc["field"] == "prime:5"
    assert pair_from_document(loads(dumps(doc))) == pair


def test_canonicalization_of_entries():
    doc = {"field": "rational", "matrix": [["2/4", 3], ["-0", "7"]]}
    m = matrix_from_document(doc)
    assert matrix_to_document(m)["matrix"] == [["1/2", "3"], ["0", "7"]]
    assert matrix_from_document({"field": "prime:5", "matrix": [["7", "-1"]]}).to_strings() == [["2", "4"]]


@pytest.mark.parametrize("doc", [
    {"matrix": [[1.5]]},
    {"matrix": [[True]]},
    {"matrix": [["1.5"]]},
    {"matrix": [["x"]]},
    {"matrix": [[1, 2], [3]]},
    {"matrix": "1"},
    {"field": "prime:4", "matrix": [["1"]]},
    {"field": "prime:5", "matrix": [["1/5"]]},
    {"rows": []},
])
def test_bad_matrix_documents(doc):
    with pytest.raises(DocumentError):
        matrix_from_document(doc)


def test_bad_pair_documents():
    with pytest.raises(DocumentError):
        pair_from_document({"m": [["0"]]})
    with pytest.raises(DocumentError):
        pair_from_document({"m": [["0"]], "n": [["0", "0"]]})
    with pytest.raises(DocumentError):
        loads("{not json")


# -- weyr -------------------------------------------------------------------------

def test_cmd_weyr_j2(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["weyr"], dumps(matrix_to_document(jordan_block(2))))
    assert code == 0
    doc = json.loads(out)
    assert doc["structure"]["r"] == [1, 1]
    assert doc["W"]["matrix"] == [["0", "1"], ["0", "0"]]
    assert doc["S"]["matrix"] == [["1", "0"], ["0", "1"]]


def test_cmd_weyr_11a(capsys, monkeypatch, tmp_path):
    # the W of the (4,3,2,1) normal form: [I;0] blocks of shapes 4x3, 3x2, 2x1
    J = jordan_matrix(SegreStructure.from_lists([4, 3, 2, 1]))
    path = write_doc(tmp_path, "j.json", matrix_to_document(J))
    code, out, _ = run(capsys, monkeypatch, ["weyr", path])
    assert code == 0
    W = matrix_from_document(json.loads(out)["W"])
    assert set(W.support()) == {(0, 4), (1, 5), (2, 6), (4, 7), (5, 8), (7, 9)}
    assert json.loads(out)["structure"]["segre"] == [[4, 1], [3, 1], [2, 1], [1, 1]]


def test_cmd_weyr_conjugated(capsys, monkeypatch, tmp_path):
    W0 = build_weyr_matrix(weyr_characteristic(SegreStructure(((3, 2), (1, 1)))))
    R = Matrix.identity(7).to_lists()
    R[0][3], R[6][2], R[4][1] = 2, -1, 3
    M = conjugate(W0, Matrix(R))
    code, out, _ = run(capsys, monkeypatch, ["weyr", write_doc(tmp_path, "m.json", matrix_to_document(M))])
    doc = json.loads(out)
    assert code == 0 and matrix_from_document(doc["W"]) == W0
    S = matrix_from_document(doc["S"])
    assert mat_mul(M, S) == mat_mul(S, W0)


def test_cmd_weyr_errors(capsys, monkeypatch, tmp_path):
    bad = write_doc(tmp_path, "id.json", matrix_to_document(Matrix.identity(2)))
    code, _, err = run(capsys, monkeypatch, ["weyr", bad])
    assert code == 2 and "nilpotent" in err
    code, _, _ = run(capsys, monkeypatch, ["weyr"], "[[1")
    assert code == 1
    code, _, _ = run(capsys, monkeypatch, ["weyr", str(tmp_path / "missing.json")])
    assert code == 1


def test_cmd_weyr_field_override(capsys, monkeypatch):
    doc = dumps(matrix_to_document(jordan_block(2)))
    code, out, _ = run(capsys, monkeypatch, ["weyr", "--field", "prime:7"], doc)
    assert code == 0 and json.loads(out)["W"]["field"] == "prime:7"


# -- commutant ----------------------------------------------------------------------

def test_cmd_commutant_golden(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["commutant", "--k", "7,4,2"])
    doc = json.loads(out)
    assert code == 0
    assert doc["K"] == [[0, -3, -5], [3, 0, -2], [5, 2, 0]]
    assert "\n".join(doc["H"]) + "\n" == (GOLDEN / "h_7_4_2.txt").read_text(encoding="utf-8")
    assert doc["dimension"] == 7 + 4 + 2 + 2 * (4 + 2 + 2)


def test_cmd_commutant_text(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["commutant", "--k", "4,3,2,1", "--text"])
    assert code == 0
    assert out.split("H =\n")[1] == (GOLDEN / "h_4_3_2_1.txt").read_text(encoding="utf-8")
    assert out.startswith("K =\n 0 -1 -2 -3\n")


def test_cmd_commutant_trivial(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["commutant", "--k", "1", "--p", "1"])
    doc = json.loads(out)
    assert code == 0 and doc["K"] == [[0]] and doc["H"] == ["×"] and doc["dimension"] == 1


def test_cmd_commutant_basis(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch,
                       ["commutant", "--k", "3,1", "--p", "1,2", "--basis", "--field", "prime:5"])
    doc = json.loads(out)
    W = build_weyr_matrix(weyr_characteristic(SegreStructure.from_lists([3, 1], [1, 2])), F5)
    assert doc["dimension"] == len(doc["basis"]) == len(brute_force_commutant(W))
    for b in doc["basis"]:
        X = matrix_from_document(b)
        assert mat_mul(W, X) == mat_mul(X, W)


@pytest.mark.parametrize("argv", [["commutant", "--k", "2,3"], ["commutant", "--k", "2", "--p", "0"],
                                  ["commutant", "--k", "2,1", "--p", "1"], ["commutant", "--k", "x"],
                                  ["commutant"], ["nonsense"]])
def test_cmd_commutant_invalid(capsys, monkeypatch, argv):
    with pytest.raises(SystemExit) as exc:
        code, _, _ = run(capsys, monkeypatch, argv)
        raise SystemExit(code)
    assert exc.value.code == 1


# -- reduce / verify ----------------------------------------------------------------------

def test_cmd_reduce_fixed_point(capsys, monkeypatch):
    J = jordan_block(3)
    pair = CommutingPair(J, mat_mul(J, J))
    code, out, err = run(capsys, monkeypatch, ["reduce"], dumps(pair_to_document(pair)))
    doc = json.loads(out)
    assert code == 0 and doc["verification"]["ok"]
    assert matrix_from_document(doc["W"]) == J and matrix_from_document(doc["B"]) == mat_mul(J, J)
    assert "reduced" in err


def test_cmd_reduce_preconditions(capsys, monkeypatch):
    J = jordan_block(2)
    JJ = Matrix([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    code, out, err = run(capsys, monkeypatch, ["reduce"],
                         dumps(pair_to_document(CommutingPair(JJ, Matrix.zeros(4, 4)))))
    assert code == 2 and "common kernel dimension 2" in err and out == ""
    code, _, err = run(capsys, monkeypatch, ["reduce"], dumps(pair_to_document(CommutingPair(J, J.T))))
    assert code == 2 and "commute" in err
    code, _, err = run(capsys, monkeypatch, ["reduce"],
                       dumps(pair_to_document(CommutingPair(J, Matrix.identity(2)))))
    assert code == 2 and "N is not nilpotent" in err


def test_cmd_verify(capsys, monkeypatch):
    J = jordan_block(3)
    good = dumps(pair_to_document(CommutingPair(J, mat_mul(J, J))))
    assert run(capsys, monkeypatch, ["verify"], good)[0] == 0
    bad = dumps(pair_to_document(CommutingPair(J, Matrix.from_entries(3, 3, {(0, 1): 2}))))
    code, out, err = run(capsys, monkeypatch, ["verify"], bad)
    assert code == 4 and "commute" in err
    report = json.loads(out)
    assert not report["ok"] and report["checks"]["commute"] is False


# -- gen -----------------------------------------------------------------------------------

def test_cmd_gen_replay_and_pipeline(capsys, monkeypatch, tmp_path):
    argv = ["gen", "--k", "3,1", "--p", "2,1", "--seed", "42"]
    _, first, _ = run(capsys, monkeypatch, argv)
    _, second, _ = run(capsys, monkeypatch, argv)
    assert first == second
    assert "ground_truth" not in json.loads(first)
    code, out, _ = run(capsys, monkeypatch, ["reduce"], first)
    assert code == 0
    doc = json.loads(out)
    pair = pair_from_document(json.loads(first))
    S = matrix_from_document(doc["S"])
    assert mat_mul(pair.m, S) == mat_mul(S, matrix_from_document(doc["W"]))
    assert mat_mul(pair.n, S) == mat_mul(S, matrix_from_document(doc["B"]))


def test_cmd_gen_ground_truth(capsys, monkeypatch, tmp_path):
    out_path = tmp_path / "pair.json"
    code, out, _ = run(capsys, monkeypatch, ["gen", "--k", "3", "--p", "2", "--seed", "7",
                                             "--nonzero", "--out", str(out_path)])
    assert code == 0 and out == ""
    gen = json.loads(out_path.read_text(encoding="utf-8"))
    code, out, _ = run(capsys, monkeypatch, ["reduce", str(out_path)])
    assert code == 0
    assert json.loads(out)["B"]["matrix"] == gen["ground_truth"]["B"]


def test_cmd_gen_bad_seed(capsys, monkeypatch):
    with pytest.raises(SystemExit) as exc:
        cli.run(["gen", "--k", "2", "--seed", "-1"])
    assert exc.value.code == 1


# -- selftest ----------------------------------------------------------------------------------

def test_cmd_selftest_empty(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["selftest", "--trials", "0"])
    assert code == 0 and out == ""


def test_cmd_selftest_fault(capsys, monkeypatch):
    code, out, err = run(capsys, monkeypatch, ["selftest", "--trials", "2", "--inject-fault"])
    assert code == 4 and "FAIL" in err
    lines = out.splitlines()
    assert len(lines) == 2 and json.loads(lines[0])["outcome"] == "fail"


@pytest.mark.slow
def test_cmd_selftest_default(capsys, monkeypatch):
    code, out, err = run(capsys, monkeypatch, ["selftest"])
    lines = out.splitlines()
    assert code == 0, err
    assert len(lines) == 200
    assert all(json.loads(x)["outcome"] == "pass" for x in lines)


def test_cmd_selftest_prime_field(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["selftest", "--trials", "10", "--field", "prime:5"])
    assert code == 0
    assert all(json.loads(x)["field"] == "prime:5" for x in out.splitlines())


def test_entry_point_exits(monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["weyrform", "commutant", "--k", "2"])
    with pytest.raises(SystemExit) as exc:
        cli.main()
    assert exc.value.code == 0
    assert json.loads(capsys.readouterr().out)["dimension"] == 2



def test_cmd_reduce_internal_error(capsys, monkeypatch):
    from weyrform.exceptions import ReductionError

    def broken(pair):
        raise ReductionError("vanishing superdiagonal entry b_1,2 of B_11")

    monkeypatch.setattr(cli, "reduce_pair", broken)
    J = jordan_block(2)
    code, out, err = run(capsys, monkeypatch, ["reduce"],
                         dumps(pair_to_document(CommutingPair(J, Matrix.zeros(2, 2)))))
    assert code == 3 and "vanishing" in err and out == ""
