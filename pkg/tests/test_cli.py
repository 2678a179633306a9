import json
import subprocess
import sys

import pytest

from matroid_ms0.cli import main
from matroid_ms0.logic import minor_sentence, public_names, to_text
from matroid_ms0.matroid import gen_uniform


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    u24 = tmp_path / "u24.json"
    u24.write_text(json.dumps(gen_uniform(2, 4).to_json()))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"elements": ["a", "b", "c"], "def": {
        "kind": "independent_sets", "sets": [[], ["a"], ["b"], ["c"], ["a", "b"]]}}))
    minor = tmp_path / "minor.txt"
    minor.write_text(to_text(public_names(minor_sentence(gen_uniform(1, 2)))))
    return tmp_path, u24, bad, minor


def test_check_reports_counts(capsys):
    code, out, err = run(capsys, "check", "--text", "Max(X1)")
    rep = json.loads(out)
    assert code == 0 and rep["verdicts"]["valid"]
    assert rep["result"]["fr"] == ["X1"] and rep["result"]["fresh_variables"] == 3
    assert rep["result"]["k"] == 4 and "valid formula" in err


def test_check_errors(capsys):
    code, _, err = run(capsys, "check", "--text", "exists Y. Ind(X)")
    assert code == 2 and "Y" in err
    code, _, err = run(capsys, "check", "--text", "Ind(X")
    assert code == 2 and "position" in err


def test_eval_true_false(capsys, files):
    _, u24, bad, minor = files
    code, out, _ = run(capsys, "eval", str(u24), str(minor))
    rep = json.loads(out)
    assert code == 0 and rep["verdicts"]["satisfied"] is True
    assert set(rep["inputs"]) == {str(u24), str(minor)} and rep["inputs"][str(u24)].startswith("sha256:")
    code, out, _ = run(capsys, "eval", str(bad), "--text",
                       "forall X1. forall X2. Ind(X1) & X2 <= X1 -> Ind(X2)")
    assert code == 0
    code, out, _ = run(capsys, "eval", str(u24), "--text", "Ind(A)", "--assign", "A=e1,e2,e3")
    assert code == 1 and json.loads(out)["verdicts"]["satisfied"] is False


def test_eval_axioms_on_non_matroid(capsys, files):
    _, _, bad, _ = files
    from matroid_ms0.logic import axioms_conjunction
    code, out, _ = run(capsys, "eval", str(bad), "--text", to_text(public_names(axioms_conjunction())))
    assert code == 1 and json.loads(out)["verdicts"]["satisfied"] is False


def test_budget_refusal(capsys, files):
    _, u24, _, minor = files
    code, out, err = run(capsys, "eval", str(u24), str(minor), "--budget", "10")
    assert code == 3 and json.loads(out)["refused"] and "refused" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "eval", str(tmp_path / "nope.json"), "--text", "Ind(X)")
    assert code == 2 and "cannot read" in err


def test_gen_kinds(capsys, tmp_path):
    sizes = {}
    for kind in ["uniform", "pg2", "gamma", "delta", "glue"]:
        code, out, _ = run(capsys, "gen", kind)
        assert code == 0
        sizes[kind] = len(json.loads(out)["elements"])
    assert sizes == {"uniform": 4, "pg2": 7, "gamma": 13, "delta": 20, "glue": 28}
    code, _, err = run(capsys, "gen", "delta", "--p", "13")
    assert code == 2 and "order" in err
    target = tmp_path / "f.json"
    code, out, _ = run(capsys, "gen", "pg2", "--q", "3", "--out", str(target))
    assert code == 0 and len(json.loads(target.read_text())["elements"]) == 13
    assert json.loads(out)["output"] == str(target)


def test_gen_amalgam(capsys, tmp_path):
    m1 = tmp_path / "m1.json"
    m2 = tmp_path / "m2.json"
    m1.write_text(json.dumps({"elements": ["l1", "l2", "c"], "def": {"kind": "circuits", "circuits": []}}))
    m2.write_text(json.dumps({"elements": ["l1", "l2", "d"], "def": {"kind": "circuits", "circuits": []}}))
    code, out, _ = run(capsys, "gen", "amalgam", "--m1", str(m1), "--m2", str(m2))
    assert code == 0 and json.loads(out)["def"]["kind"] == "amalgam"
    code, _, _ = run(capsys, "gen", "amalgam")
    assert code == 2


def test_represent_and_partition(capsys, tmp_path):
    g = tmp_path / "gamma.json"
    run(capsys, "gen", "gamma", "--out", str(g))
    code, out, _ = run(capsys, "represent", str(g))
    mat = json.loads(out)
    assert code == 0 and len(mat["def"]["rows"]) == 4 and len(mat["elements"]) == 13
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(gen_uniform(1, 1).to_json()))
    b.write_text(json.dumps(gen_uniform(0, 1).to_json()))
    code, out, _ = run(capsys, "partition", str(a), str(b), "--k", "1")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["block_count"] == 2 and rep["result"]["bound"] == "4096"
    code, _, err = run(capsys, "partition", str(a), "--variant", "2")
    assert code == 2 and "hoop" in err


def test_tree_dump(capsys, tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps(gen_uniform(0, 0).to_json()))
    code, out, _ = run(capsys, "tree", str(a), "--k", "1")
    assert code == 0 and json.loads(out) == [[["T"], ["<"], ["T"]]]


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "alcove", "--orders", "1..20")
    rep = json.loads(out)
    assert code == 0 and rep["verdicts"]["alcove"] is True
    code, _, _ = run(capsys, "verify", "nonsense")
    assert code == 2


def test_console_script_version():
    res = subprocess.run([sys.executable, "-m", "matroid_ms0.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
