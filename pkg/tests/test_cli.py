import json
import subprocess
import sys

import pytest

from chernweil import liealg
from chernweil.cli import main

BROKEN_JACOBI = {
    "dim": 3,
    "names": ["a", "b", "c"],
    "bracket": [[0, 1, 1, "1"], [0, 2, 1, "1"], [1, 2, 0, "1"]],
    "bilinear": [[0, 0, "1"], [1, 1, "1"], [2, 2, "1"]],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert out.split() == sorted(liealg.catalog())


def test_validate_broken_jacobi(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(BROKEN_JACOBI))
    code, out, err = run(capsys, "--input", str(p), "validate")
    assert code == 1
    assert "FAIL  validate: jacobi" in out
    assert "witness: triple (" in out
    # the sample also breaks invariance of B; stderr names the first failure by name
    assert err.startswith("chernweil: FAILED validate: invariant_form [")


def test_validate_catalog_passes(capsys):
    code, out, _ = run(capsys, "--catalog", "fxh1", "validate")
    assert code == 0 and "FAIL" not in out


def test_dirac_square_abelian(capsys):
    code, out, _ = run(capsys, "--catalog", "abelian2", "dirac-square")
    assert code == 0
    assert "dirac_square: 1/2 Cas = e0*e1" in out
    assert "dirac_square: D^2 = e0^*e1^" in out
    assert "trace term tr(Cas)/48 = 0" in out


def test_quantize_command(capsys):
    code, out, _ = run(capsys, "--catalog", "sl2", "quantize", "x0", "bx1", "hx2")
    assert code == 0 and "summary: 3 passed, 0 failed" in out


def test_duflo_command(capsys):
    code, out, _ = run(capsys, "duflo", "2")
    assert code == 0
    assert "J^1/2 = 1 + 1/6*e**f* + 1/6*h*^2" in out
    # no product of Casimir powers fits in degree 2, so nothing is claimed about it
    assert "multiplicative" not in out
    code, out, _ = run(capsys, "duflo", "4")
    assert code == 0
    assert "PASS  duflo: control: sym_U alone is not multiplicative" in out


@pytest.mark.parametrize("argv", [
    ("--catalog", "e8", "validate"),
    ("--catalog", "sl2", "quantize", "q1"),
    ("--catalog", "sl2", "quantize", "x7"),
    ("--catalog", "abelian2", "hc"),
    ("--catalog", "sl2", "rouviere"),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("chernweil: error:")


def test_malformed_files_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "--input", str(bad), "validate")[0] == 2
    assert run(capsys, "--input", str(tmp_path / "missing.json"), "validate")[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"dim": 2, "bracket": [[0, 1, 5, "1"]]}))
    assert run(capsys, "--input", str(wrong), "validate")[0] == 2


def test_invalid_input_for_other_commands_exit_2(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(BROKEN_JACOBI))
    code, _, err = run(capsys, "--input", str(p), "dirac")
    assert code == 2 and "jacobi" in err


def test_degenerate_form_exit_2(tmp_path, capsys):
    p = tmp_path / "heis.json"
    p.write_text(json.dumps({"dim": 3, "bracket": [[0, 1, 2, "1"]]}))
    code, out, err = run(capsys, "--input", str(p), "validate")
    assert code == 1 and "FAILED validate: nondegenerate" in err
    assert "PASS  validate: jacobi" in out
    assert run(capsys, "--input", str(p), "dirac")[0] == 2


def test_argument_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--max-degree", "0", "validate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_flags_before_and_after_command(capsys):
    a = run(capsys, "--catalog", "abelian2", "--format", "json", "dirac")
    b = run(capsys, "dirac", "--catalog", "abelian2", "--format", "json")
    assert a == b and a[0] == 0


def test_json_is_deterministic_across_jobs(capsys):
    _, one, _ = run(capsys, "--format", "json", "verify", "--suite", "core")
    _, two, _ = run(capsys, "--format", "json", "--jobs", "2", "verify", "--suite", "core")
    assert one == two
    report = json.loads(one)
    names = [r["name"] for r in report["checks"]]
    assert names == sorted(names)
    assert all(r["wall_time"] is None for r in report["checks"])
    assert report["summary"]["failed"] == 0 and report["summary"]["seconds"] is None
    for r in report["checks"]:
        assert set(r) == {"name", "paper_anchor", "status", "witness", "wall_time"}


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "--format", "json", "--timings", "dirac")
    report = json.loads(out)
    assert all(isinstance(r["wall_time"], float) for r in report["checks"])
    assert isinstance(report["summary"]["seconds"], float)


def test_verify_relative_on_symmetric_pair(capsys):
    code, out, _ = run(capsys, "--catalog", "s_sstar", "--max-degree", "3",
                       "verify", "--suite", "relative")
    assert code == 0
    assert "rouviere:" in out and "FAIL" not in out


def test_entry_point_module():
    r = subprocess.run([sys.executable, "-m", "chernweil", "--catalog", "abelian2",
                        "dirac"], capture_output=True, text=True)
    assert r.returncode == 0 and "summary:" in r.stdout
