import json
import math
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from znshift.cli import MAX_SAFE_INT, _jsonable, main, parse_range
from znshift.errors import InputError
from znshift.intlin import from_csv

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def _schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kgroups_json(capsys):
    code, out, _ = run(capsys, "kgroups", "--n", "3", "--max-level", "8", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, _schema("kgroups"))
    assert data["K0"] == {"torsion": [3], "free_rank": 1}
    assert data["K1"] == {"torsion": [], "free_rank": 0}
    assert data["connecting_map"] == [[1, 0, 0], [0, 1, 1], [0, 0, 0]]


def test_entropy_text_and_json(capsys):
    code, out, _ = run(capsys, "entropy", "--n", "2")
    assert code == 0 and "3.0636078246" in out
    code, out, _ = run(capsys, "entropy", "--n-range", "1..3", "--format", "json")
    data = json.loads(out)
    assert [d["N"] for d in data] == [1, 2, 3]
    for d in data:
        jsonschema.validate(d, _schema("entropy"))
        assert abs(d["entropy_log"] - math.log(d["beta"])) < 1e-12
    assert abs(data[1]["beta"] - 3.063607825) < 1e-8


def test_matrices_csv(capsys):
    code, out, _ = run(capsys, "matrices", "--n", "1", "--level", "2", "--format", "csv")
    assert code == 0
    blocks = out.strip().split("\n\n")
    m, i = from_csv(blocks[0]), from_csv(blocks[1])
    assert len(m) == 7 and len(m[0]) == 9
    assert len(i) == 7 and len(i[0]) == 9
    assert m[0][0] == 2  # b + c


def test_matrices_text(capsys):
    code, out, _ = run(capsys, "matrices", "--n", "2", "--level", "2")
    assert code == 0 and "a1+a2" in out


def test_kms_json(capsys):
    code, out, _ = run(capsys, "kms", "--n", "2", "--depth", "8", "--at", "growth", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, _schema("kms"))
    assert data["residuals"]["eigen_max"] < 1e-10


def test_count_words_big_ints_are_strings(capsys):
    code, out, _ = run(capsys, "count-words", "--n", "2", "--kmax", "40", "--json")
    data = json.loads(out)
    theta = data["theta"]
    assert theta[9] == 210144
    assert isinstance(theta[-1], str) and int(theta[-1]) >= MAX_SAFE_INT
    code, out, _ = run(capsys, "count-words", "--n", "1", "--kmax", "5", "--format", "csv")
    assert out.splitlines()[1:] == ["1,1,3", "1,2,9", "1,3,25", "1,4,67", "1,5,177"]


def test_count_words_brute_budget(capsys):
    code, _, err = run(capsys, "count-words", "--n", "2", "--kmax", "12", "--mode", "brute", "--brute-budget", "100")
    assert code == 1 and "budget" in err


def test_code_check(capsys):
    code, out, _ = run(capsys, "code-check", "--n", "1", "--max-len", "6", "--json")
    assert json.loads(out)["uniquely_decipherable"] is True


def test_report(capsys):
    code, out, _ = run(capsys, "report", "--n-range", "1..2", "--json", "--kmax", "10", "--depth", "10")
    assert code == 0
    data = json.loads(out)
    for d in data:
        jsonschema.validate(d, _schema("report"))
    assert "not flow equivalent" in data[0]["flow"]
    assert data[1]["kms"]["eigen_max"] < 1e-10


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["kgroups"],
        ["kgroups", "--n-range", "5..2"],
        ["kgroups", "--n-range", "a..b"],
        ["entropy", "--n", "1", "--tol", "-1"],
        ["entropy", "--n", "1", "--unknown"],
        ["matrices", "--n", "1", "--level", "1"],
        ["kgroups", "--n", "2", "--max-level", "3"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and "error" in err


def test_consistency_failure_exit_2(capsys, monkeypatch):
    from znshift import ktheory
    from znshift.errors import ConsistencyError

    def boom(*a, **k):
        raise ConsistencyError("forced")

    monkeypatch.setattr(ktheory, "invariants", boom)
    code, _, err = run(capsys, "kgroups", "--n", "2")
    assert code == 2 and "forced" in err


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ZN_N", "4")
    monkeypatch.setenv("ZN_FORMAT", "json")
    code, out, _ = run(capsys, "kgroups")
    assert json.loads(out)["K0"]["torsion"] == [4]
    # explicit flags win
    code, out, _ = run(capsys, "kgroups", "--n", "5", "--format", "text")
    assert out.startswith("N=5")


@pytest.mark.parametrize("argv", [["report", "--n", "3"], ["entropy", "--n-range", "1..4", "--format", "csv"]])
def test_output_is_deterministic(argv):
    outs = {
        subprocess.run([sys.executable, "-m", "znshift", *argv], capture_output=True, check=True).stdout
        for _ in range(2)
    }
    assert len(outs) == 1


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("2..4") == [2, 3, 4]
    with pytest.raises(InputError):
        parse_range("0..2")


def test_jsonable():
    assert _jsonable({"a": [2**60, 3, True]}) == {"a": [str(2**60), 3, True]}
