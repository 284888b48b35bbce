import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from lapsum.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
JOIN = "F~zf?"


def run(argv, stdin=""):
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin), stdout=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_config_echoed_first():
    code, out = run(["--seed", "4", "--tol-scale", "1e-7", "spectrum"], "@\n")
    cfg = records(out)[0]["config"]
    assert code == 0
    assert cfg == {"command": "spectrum", "tol_scale": 1e-7, "subset_limit": 10**7, "format": "json", "seed": 4, "eigensolver": "lapack"}


def test_tolerance_env(monkeypatch):
    monkeypatch.setenv("LAPSUM_TOL_SCALE", "1e-6")
    _, out = run(["spectrum"], "@\n")
    assert records(out)[0]["config"]["tol_scale"] == 1e-6


def test_spectrum():
    code, out = run(["spectrum"], f"{JOIN}\n@\n")
    recs = records(out)[1:]
    assert code == 0
    assert recs[0]["spectrum"] == [7, 7, 7, 3, 3, 3, 0]
    assert recs[0]["degrees"] == [6, 6, 6, 3, 3, 3, 3] and recs[0]["e"] == 15
    assert recs[1]["spectrum"] == [0]


def test_spectrum_parse_error_continues():
    code, out = run(["spectrum"], "Bw\nnot graph6!\n@\n")
    recs = records(out)[1:]
    assert code == 2
    assert "error" in recs[1] and recs[1]["line"] == 2 and "byte offset" in recs[1]["error"]
    assert recs[2]["spectrum"] == [0]


def test_jacobi_spectrum_twelve_digits():
    _, out = run(["--eigensolver", "jacobi", "spectrum"], "DhC\n")
    values = records(out)[1]["spectrum"]
    for v in values:
        assert len(repr(v).replace(".", "").replace("-", "").lstrip("0")) <= 12


def test_bound_join_equality():
    code, out = run(["bound", "--id", "eq5", "--subset", "0,1,2"], JOIN)
    recs = records(out)[1:]
    assert code == 0
    upper = next(r for r in recs if r["bound_id"] == "eq5_upper")
    assert upper["equality"] and upper["rhs_exact"] == "21/1"


def test_bound_examples():
    code, out = run(["bound", "--id", "eq4", "--m", "2"], "DhC")
    assert code == 0 and records(out)[1]["holds"]
    code, out = run(["bound", "--id", "eq10", "--subset", "0,2"], "Cl")
    assert code == 0 and records(out)[1]["holds"]


def test_bound_strategies():
    _, out = run(["bound", "--id", "eq5_upper", "--m", "3", "--strategy", "exhaustive"], JOIN)
    assert records(out)[1]["subset"] == [0, 1, 2]
    _, out = run(["bound", "--id", "eq7", "--m", "4"], JOIN)
    assert records(out)[1]["subset"] == [3, 4, 5, 6]
    a = run(["bound", "--id", "eq9", "--m", "3", "--strategy", "random", "--samples", "5", "--seed", "9"], JOIN)
    b = run(["bound", "--id", "eq9", "--m", "3", "--strategy", "random", "--samples", "5", "--seed", "9"], JOIN)
    assert a == b


def test_bound_precondition_error():
    code, out = run(["bound", "--id", "eq10", "--subset", "0,1,2"], "Cl")
    assert code == 2 and "error" in records(out)[1]


def test_bound_dump_incidence():
    _, out = run(["bound", "--id", "eq13", "--subset", "0", "--dump-incidence"], "Cl")
    inc = records(out)[1]["incidence"]
    assert set(inc) == {"Q", "arcs", "M", "B1", "B"}
    assert len(inc["B"]) == 2


def test_certify():
    code, out = run(["certify", "--subset", "0,1,2"], JOIN)
    recs = records(out)[1:]
    assert code == 0
    up = next(r for r in recs if r["certificate"]["side"] == "upper")
    assert up["certificate"]["certified"] and up["certificate"]["b"] == "3/1" and up["agrees"]


def test_verify_small():
    code, out = run(["verify", "--n-max", "2"])
    assert code == 0 and records(out)[-1]["summary"]["violations"] == 0
    code, _ = run(["verify", "--n-max", "8"])
    assert code == 2


def test_verify_corrupted_fixture():
    code, out = run(["verify", "--mode", "corpus_file", "--corpus", str(FIXTURES / "reports_corrupted.jsonl")])
    assert code == 1
    assert any("violation" in r for r in records(out))
    code, _ = run(["verify", "--mode", "corpus_file", "--corpus", str(FIXTURES / "reports_good.jsonl")])
    assert code == 0


def test_verify_deterministic():
    args = ["--seed", "3", "verify", "--mode", "gnp_sample", "--count", "15"]
    assert run(args) == run(args)


def test_gen():
    assert run(["gen", "join", "--p", "3", "--q", "4"]) == (0, JOIN + "\n")
    assert run(["gen", "multipartite", "--parts", "2,2,2"])[1] == "E]~o\n"
    a = run(["gen", "gnp", "--n", "10", "--p", "0.5", "--seed", "42"])
    assert a == run(["gen", "gnp", "--n", "10", "--p", "0.5", "--seed", "42"])
    assert a[1] == "IV}OLLDo_\n"
    assert len(run(["gen", "labeled", "--n", "4"])[1].split()) == 38
    assert run(["gen", "join", "--p", "3"])[0] == 2


def test_apps():
    code, out = run(["apps", "--edge-connectivity", "--isoperimetric", "--kdom", "2", "--dom-set", "0,1", "--expected-cut", "2"], "E]~o")
    rec = records(out)[1]
    assert code == 0
    assert rec["edge_connectivity"]["exact"] == 4
    assert rec["kdom"]["rhs_exact"] == "10/1" and rec["kdom"]["lhs"] == 12
    assert rec["expected_cut"]["expected"] == "32/5"
    assert run(["apps"], "Bw")[0] == 2


def test_apps_isoperimetric_rational():
    _, out = run(["apps", "--isoperimetric"], "GhCGKC")
    assert records(out)[1]["isoperimetric"]["value"] == "1/2"


def test_tsv_format():
    code, out = run(["--format", "tsv", "bound", "--id", "eq9", "--m", "1"], "Bg")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# {") and lines[1].split("\t")[0] == "line"
    assert lines[2].split("\t")[-1] == "[1]"


def test_usage_errors():
    assert run([])[0] == 2
    assert run(["bound", "--id", "eq99", "--m", "1"], "Bw")[0] == 2
    assert run(["nonsense"])[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lapsum", "spectrum"], input="Bw\n", capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout.splitlines()[1])["spectrum"] == [3, 3, 0]
