import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from shintani.cli import load_schema, main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def write(tmp_path, doc, name="problem.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def report_ok(path):
    doc = json.loads(Path(path).read_text())
    jsonschema.validate(doc, load_schema("report.schema.json"))
    return doc


def test_compute_f4(tmp_path):
    out = tmp_path / "a.json"
    assert main(["compute", "--problem", str(PROBLEMS / "sqrt5_f4.json"), "--out", str(out)]) == 0
    doc = report_ok(out)
    assert doc["status"] == "PASSED"
    assert doc["zeta_at_0"] == "1/4"
    assert doc["log_X"]["value"].startswith("-1.0612750619050356520")
    assert doc["datum"]["mu"] == ["-1-2*sqrt(5)", "-1+2*sqrt(5)"]


def test_compute_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["compute", "--problem", str(PROBLEMS / "sqrt5_f2.json"), "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timing_is_opt_in(tmp_path):
    out = tmp_path / "a.json"
    main(["compute", "--problem", str(PROBLEMS / "sqrt5_f2.json"), "--out", str(out), "--timing"])
    assert "seconds" in report_ok(out)["timing"]


def test_schema_errors_exit_2(tmp_path, capsys):
    bad = write(tmp_path, {"field": {"mode": "quadratic"}})
    assert main(["compute", "--problem", bad]) == 2
    assert "schema error" in capsys.readouterr().err
    assert main(["compute", "--problem", str(tmp_path / "missing.json")]) == 2
    assert main(["compute", "--problem", str(PROBLEMS / "unit_modulus.json")]) == 2
    assert main(["compute", "--problem", str(PROBLEMS / "synthetic.json")]) == 2


def test_precision_exhausted_exit_3(tmp_path, capsys):
    assert main(["compute", "--problem", str(PROBLEMS / "sqrt5_f4.json"), "--precision", "40"]) == 3
    assert "precision exhausted" in capsys.readouterr().err


def test_failed_identity_exit_4_still_writes(tmp_path):
    out = tmp_path / "a.json"
    code = main(["compute", "--problem", str(PROBLEMS / "sqrt5_f4.json"), "--out", str(out),
                 "--tolerance-scale", "0"])
    assert code == 4
    assert report_ok(out)["status"] == "FAILED"


@pytest.mark.parametrize("which", ["factorization", "independence", "relation"])
def test_verify_field(tmp_path, which):
    out = tmp_path / "v.json"
    assert main(["verify", which, "--problem", str(PROBLEMS / "sqrt5_f4.json"), "--out", str(out)]) == 0
    doc = report_ok(out)
    assert doc["which"] == which and doc["residuals"]
    assert all(r["passed"] for r in doc["residuals"])


def test_verify_field_needs_field(tmp_path):
    assert main(["verify", "relation", "--problem", str(PROBLEMS / "synthetic.json")]) == 2


def test_verify_small_combinatorics(tmp_path):
    prob = write(tmp_path, {"synthetic": {"dims": [2], "trials": 60}, "seed": 3})
    out = tmp_path / "v.json"
    assert main(["verify", "combinatorics", "--problem", prob, "--out", str(out)]) == 0
    doc = report_ok(out)
    assert doc["seed"] == 3
    assert {s["name"] for s in doc["suites"]} >= {"cocycle n=2"}
    assert all(s["passed"] for s in doc["suites"])


def test_verify_sine_oracles(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "sine-oracles", "--out", str(out), "--seed", "4"]) == 0
    assert report_ok(out)["status"] == "PASSED"


def test_eval(capsys):
    assert main(["eval", "multiple-sine", "--z", "1/2", "--omega", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"].startswith("2.000000000000000000")
    assert doc["exact"] is False
    assert main(["eval", "shintani-zeta0", "--x", "1", "--omega", "2,3"]) == 0
    assert json.loads(capsys.readouterr().out) == {"function": "shintani-zeta0", "value": "-1/2", "exact": True}
    assert main(["eval", "barnes-zeta-deriv0", "--z", "1", "--omega", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"].startswith("-0.918938533204672741")


def test_eval_rejects_bad_arguments():
    assert main(["eval", "multiple-sine", "--z", "1/2"]) == 2
    assert main(["eval", "multiple-sine", "--z", "x", "--omega", "1"]) == 2
    assert main(["eval", "shintani-zeta0", "--x", "1,1", "--omega", "2,3"]) == 2


def test_module_entry_point():
    run = subprocess.run([sys.executable, "-m", "shintani", "eval", "shintani-zeta0", "--x", "1/2", "--omega", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(run.stdout)["value"] == "0"
