import io
import json
import os
import subprocess
import sys

import pytest

from sl4cybe.cli import main, validate_report
from sl4cybe.report import clear_caches, run_all


def _run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def report_json():
    return run_all(jobs=1).to_json()


def test_report_validates_against_schema(report_json):
    doc = json.loads(report_json)
    validate_report(doc)
    assert list(doc) == sorted(doc)
    assert doc["summary"]["pass"] + doc["summary"]["fail"] + doc["summary"]["info"] == len(doc["checks"])


def test_parallel_run_is_byte_identical(report_json):
    clear_caches()
    assert run_all(jobs=2).to_json() == report_json


def test_text_mirrors_json(report_json):
    doc = json.loads(report_json)
    text = run_all(jobs=1).to_text().splitlines()
    body = [line for line in text if line[:4] in ("PASS", "FAIL", "INFO")]
    assert len(body) == len(doc["checks"])
    assert [line.split()[1] for line in body] == [c["id"] for c in doc["checks"]]


def test_strict_promotes_mismatches(report_json):
    doc = json.loads(report_json)
    strict = run_all(jobs=1, strict=True)
    mismatches = sum(1 for c in doc["checks"] if c["mismatch"])
    assert mismatches
    assert strict.summary()["required_failures"] == doc["summary"]["required_failures"] + mismatches


def test_verify_exit_code_follows_required_failures(report_json):
    code, text = _run(["verify", "--format", "json"])
    doc = json.loads(text)
    assert text == report_json
    assert code == (1 if doc["summary"]["required_failures"] else 0)


def test_params_are_recorded_and_substituted():
    rep = run_all(params=["lam=0", "a=2"], sections=["section_catalog", "section_oracle"])
    doc = json.loads(rep.to_json())
    assert doc["params"] == {"a": "2", "lam": "0"}
    validate_report(doc)
    dims = {c["subject"]: c["witness"] for c in doc["checks"] if c["id"] == "02.catalog.carrier_dim"}
    assert dims["r12"].startswith("carrier dimension 9")


def test_check_reports_repair():
    code, text = _run(["check", "r10_1b"])
    assert code == 0
    assert "printed form fails" in text and "pass after adjudication" in text
    code, _ = _run(["check", "r10_1b", "--strict"])
    assert code == 1


def test_check_solution():
    code, text = _run(["check", "r10_1a"])
    assert code == 0 and "CYBE: pass (zero residual)" in text


def test_derive_and_schouten():
    code, text = _run(["derive", "g1a", "P1"])
    assert code == 0 and "matches r10_1a with scalar 1" in text
    code, text = _run(["derive", "e1* + e3*", "P2"])
    assert code == 1 and "singular" in text
    code, text = _run(["schouten", "h1^e1", "h1^e1"])
    assert code == 0 and text.strip() == "0"


@pytest.mark.parametrize("argv", [["frobnicate"], ["verify", "--bogus"], ["report", "--format", "xml"], []])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [["check", "r99"], ["derive", "g1a", "P7"], ["schouten", "e1", "h1^e1"],
                                  ["verify", "--params", "zz=1"], ["check", "r12", "--params", "lam"]])
def test_bad_arguments_exit_2(argv):
    code, _ = _run(argv)
    assert code == 2


def test_catalog_override(tmp_path, monkeypatch):
    path = tmp_path / "cat.txt"
    path.write_text("r12 = h1^e1\nr10_1a = e1^ ^e2\n", encoding="utf-8")
    monkeypatch.setenv("CYBE_CATALOG", str(path))
    code, _ = _run(["check", "r12"])
    assert code == 2
    code, _ = _run(["check", "r12", "--catalog", str(tmp_path / "missing.txt")])
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sl4cybe", "schouten", "e1^em1", "e1^em1"],
                          capture_output=True, text=True, env={**os.environ, "PYTHONHASHSEED": "0"})
    assert proc.returncode == 0 and "e1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "sl4cybe", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
