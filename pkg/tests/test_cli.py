"""The command-line front end: outputs, exit codes and reports."""

import json
import subprocess
import sys

import pytest

from cohdiff.cli import main, parse_context

from conftest import CORPUS


def prog(tmp_path, text, name="p.pcfd"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_check(capsys):
    assert main(["check", str(CORPUS / "succ.pcfd")]) == 0
    assert capsys.readouterr().out.strip() == "Nat -> Nat"


def test_check_type_error(tmp_path, capsys):
    assert main(["check", prog(tmp_path, "succ^0 (\\x:Nat. x)")]) == 1
    assert "type error" in capsys.readouterr().err


def test_parse_error_and_missing_file(tmp_path, capsys):
    assert main(["check", prog(tmp_path, "succ^0 (")]) == 2
    assert main(["check", str(tmp_path / "missing.pcfd")]) == 2
    err = capsys.readouterr().err
    assert "parse error" in err and "cannot read" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 2
    assert main(["run", str(CORPUS / "numeral.pcfd"), "--fuel", "-1"]) == 2


def test_run(capsys):
    assert main(["run", str(CORPUS / "deriv_succ.pcfd")]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_run_fuel(capsys):
    assert main(["run", str(CORPUS / "diverge.pcfd"), "--fuel", "50"]) == 1
    assert capsys.readouterr().out.strip() == "fuel-exhausted"


def test_run_rejects_functions(capsys):
    assert main(["run", str(CORPUS / "succ.pcfd")]) == 1
    assert "expected Nat" in capsys.readouterr().err


def test_run_trace(tmp_path, capsys):
    out = tmp_path / "trace.json"
    assert main(["run", str(CORPUS / "succ3.pcfd"), "--trace", str(out)]) == 0
    trace = json.loads(out.read_text())
    assert trace and isinstance(trace, list)
    assert set(trace[0]) == {"step", "word", "term", "stack", "rule-name", "branch-id"}
    assert trace[0]["rule-name"] == "push-succ"


def test_diff(tmp_path, capsys):
    p = prog(tmp_path, "-- context: y : Nat\nsucc^0 y\n")
    assert main(["diff", p, "--var", "y"]) == 0
    assert capsys.readouterr().out.strip() == "succ^1 y"
    assert main(["diff", p, "--var", "z"]) == 2


def test_denote(capsys):
    assert main(["denote", str(CORPUS / "sum_tangent.pcfd")]) == 0
    assert capsys.readouterr().out.strip() == "e:4 1"
    assert main(["denote", str(CORPUS / "mismatch.pcfd")]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_axioms_coh(capsys):
    assert main(["axioms", "coh", "--max-web", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 17 and all(l.startswith("PASS") for l in lines)


def test_corpus_and_report_bytes(tmp_path, capsys):
    r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["corpus", str(CORPUS), "--report", str(r1)]) == 0
    assert main(["corpus", str(CORPUS), "--report", str(r2)]) == 0
    out = capsys.readouterr().out
    assert "33/33 pass" in out
    assert r1.read_bytes() == r2.read_bytes()
    rep = json.loads(r1.read_text())
    assert rep["schema_version"] == 1 and rep["verdict"] == "ok"
    assert rep["input_digest"].startswith("sha256:")
    assert rep["statistics"]["files"] == 33


def test_corpus_failure(tmp_path, capsys):
    prog(tmp_path, "-- expect: 5\n3\n", "wrong.pcfd")
    assert main(["corpus", str(tmp_path)]) == 1
    assert "FAIL wrong.pcfd" in capsys.readouterr().out


def test_adequacy_directory(capsys):
    assert main(["adequacy", str(CORPUS), "--schedule", "4,2,4;8,3,8"]) in (0, 1)
    out = capsys.readouterr().out
    assert "contradiction" not in out.replace("contradictions", "")
    assert out.strip().splitlines()[-1].startswith("verdict: ")


def test_parse_context():
    ctx = parse_context("x : Nat, f : (Nat -> Nat) -> Nat")
    assert [x for x, _ in ctx] == ["x", "f"]
    assert parse_context(None) == ()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "cohdiff", "run", str(CORPUS / "add22.pcfd")],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout.strip() == "4"
