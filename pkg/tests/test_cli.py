import io
import json
import subprocess
import sys

import pytest

from padic_sl2.cli import main

SCHEMA = "padic-sl2/1"


def run(argv, stdin=None, capsys=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(capsys, monkeypatch):
    def _run(argv, stdin=None):
        return run(argv, stdin, capsys, monkeypatch)

    return _run


def matrix_doc(rows, p=5, **extra):
    return json.dumps({"p": p, "precision": 32, "matrix": rows, **extra})


def test_classify_anisotropic(cli):
    code, out, _ = cli(["classify", "--input", "-"], matrix_doc([["3", "2"], ["4", "3"]]))
    rep = json.loads(out)
    assert code == 0
    assert (rep["kind"], rep["delta"], rep["schema"]) == ("anisotropic", "2", SCHEMA)


def test_classify_identity(cli):
    code, out, _ = cli(["classify", "--input", "-"], matrix_doc([["1", "0"], ["0", "1"]]))
    rep = json.loads(out)
    assert (rep["kind"], rep["sign"]) == ("central", "+")


def test_malformed_json_reports_position(cli):
    code, _, err = cli(["classify", "--input", "-"], '{"p": 5,\n  "matrix": [1,')
    assert code == 1
    assert "line 2" in err and "column" in err


def test_usage_errors(cli):
    assert cli(["classify", "--input", "-"], matrix_doc([["1", "2"], ["3", "4"]]))[0] == 1
    assert cli(["classify", "--input", "-"], matrix_doc([["1", "0"], ["0", "1"]], p=6))[0] == 1
    assert cli(["classify", "--input", "-", "--precision", "3"], json.dumps({"p": 5, "matrix": [[1, 0], [0, 1]]}))[0] == 1
    assert cli(["nonsense"])[0] == 1


@pytest.mark.parametrize("exc, code", [("PrecisionExhausted", 2), ("InternalInconsistency", 3), ("NoCoverIndex", 3)])
def test_error_exit_codes(cli, monkeypatch, exc, code):
    # rational inputs stay exact, so these paths are reached by patching a command
    from padic_sl2 import cli as cli_mod, errors

    def boom(args):
        raise getattr(errors, exc)("forced")

    monkeypatch.setitem(cli_mod.COMMANDS, "classify", boom)
    assert cli(["classify", "--input", "-"], matrix_doc([["1", "0"], ["0", "1"]]))[0] == code


def test_cover_check_deterministic(cli, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = cli(["cover-check", "--p", "5", "--samples", "500", "--seed", "1", "--output", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["failures"] == 0 and rep["checked"] == 500 and rep["seed"] == 1
    assert sum(rep["indices_histogram"].values()) == 500


def test_member_and_filtration(cli):
    doc = matrix_doc([["3", "2"], ["4", "3"]])
    code, out, _ = cli(["member", "--input", "-", "--variant", "Qdelta", "--delta", "2"], doc)
    assert code == 0 and json.loads(out)["member"] is True
    code, out, _ = cli(["member", "--input", "-"], matrix_doc([["1", "1"], ["0", "1"]], descriptor={"variant": "Congruence", "gamma": 1, "eta1": 1, "eta2": 1}))
    assert json.loads(out)["member"] is False
    code, out, _ = cli(["filtration", "--input", "-", "--delta", "2"], doc)
    assert json.loads(out)["level"] == 0
    code, out, _ = cli(["filtration", "--input", "-"], matrix_doc([["1", "0"], ["0", "1"]], delta=5))
    assert json.loads(out)["level"] == "inf"


def test_bruhat(cli):
    code, out, _ = cli(["bruhat", "--input", "-"], matrix_doc([["1", "0"], ["1", "1"]]))
    rep = json.loads(out)
    assert code == 0 and rep["cell"] == "BwB" and "right" in rep


def test_escape(cli):
    code, out, _ = cli(["escape", "--p", "5"])
    rep = json.loads(out)
    assert code == 0 and rep["x"] == "25/1" and len(rep["translates"]) == 4
    doc = json.dumps({"p": 5, "translates": [[["1", "0"], ["0", "1"]]]})
    code, out, _ = cli(["escape", "--input", "-"], doc)
    assert json.loads(out)["x"] == "5/1"


def test_interpret(cli):
    code, out, _ = cli(["interpret", "--p", "5", "--op", "mul", "--x", "2", "--y", "3"])
    rep = json.loads(out)
    assert code == 0 and rep["result"] == "6/1" and set(rep["words"]) == {"x", "y", "combined"}
    code, out, _ = cli(["interpret", "--p", "5", "--op", "add", "--x", "1/3", "--y=-2/7"])
    assert json.loads(out)["result"] == "1/21"


def test_oracle_verify(cli):
    code, out, err = cli(["oracle-verify", "--p", "3", "--k", "2"])
    rep = json.loads(out)
    assert code == 0 and rep["failures"] == 0
    assert "PASS" in err and "FAIL" not in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "padic_sl2", "interpret", "--p", "7", "--op", "add", "--x", "2", "--y", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"] == "5/1"
