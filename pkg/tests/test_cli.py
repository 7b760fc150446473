import json
import math

import numpy as np
import pytest

from mubkit import cli, mub
from mubkit.documents import read_document


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out + out.err


def test_gen_complete_prime(tmp_path, capsys):
    code, out = run(capsys, "mub", "gen", "-d", "5", "--complete", "-o", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == 6
    code, out = run(capsys, "mub", "verify", *map(str, files))
    assert code == 0 and "15/15 pairs unbiased" in out


def test_gen_d2_hadamard_document(tmp_path, capsys):
    code, _ = run(capsys, "mub", "gen", "-d", "2", "-a", "0", "--exact", "-o", str(tmp_path))
    assert code == 0
    doc = read_document(next(tmp_path.glob("*.json")))
    assert np.allclose(doc.matrix(), np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def test_gen_complete_composite_refuses(tmp_path, capsys):
    code, out = run(capsys, "mub", "gen", "-d", "4", "--complete", "-o", str(tmp_path))
    assert code != 0 and "NotPrime" in out


def test_gen_all_a_composite(tmp_path, capsys):
    code, _ = run(capsys, "mub", "gen", "-d", "9", "--all-a", "-o", str(tmp_path))
    assert code == 0 and len(list(tmp_path.glob("*.json"))) == 9
    code, out = run(capsys, "mub", "verify", str(tmp_path / "basis_d9_r0_a0.json"), str(tmp_path / "basis_d9_r0_a3.json"))
    assert code == 1 and "NOT unbiased" in out


def test_gen_hadamard_csv(tmp_path, capsys):
    code, _ = run(capsys, "mub", "gen", "-d", "3", "--hadamard", "--all-a", "--format", "csv", "-o", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("*.csv"))
    assert len(files) == 3
    code, out = run(capsys, "mub", "verify", *map(str, files))
    assert code == 0


def test_verify_dimension_mismatch(tmp_path, capsys):
    run(capsys, "mub", "gen", "-d", "2", "-o", str(tmp_path))
    run(capsys, "mub", "gen", "-d", "3", "-o", str(tmp_path))
    code, out = run(capsys, "mub", "verify", *map(str, sorted(tmp_path.glob("*.json"))))
    assert code != 0 and "DimensionMismatch" in out


def test_verify_bad_file(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{")
    code, out = run(capsys, "mub", "verify", str(bad))
    assert code != 0 and "ParseError" in out


def test_census_and_report(tmp_path, capsys):
    report = tmp_path / "census.json"
    code, out = run(capsys, "mub", "verify", "--census", "-d", "9", "--report", str(report))
    assert code == 0 and "a=4: 6 unbiased partners" in out
    assert json.loads(report.read_text())["metadata"]["counts"] == [6] * 9


def test_verify_generated_set(capsys):
    code, out = run(capsys, "mub", "verify", "-d", "7")
    assert code == 0 and "28/28" in out


def test_gauss_commands(capsys):
    code, out = run(capsys, "gauss", "2", "2", "8")
    assert code == 0 and "|S| = 4.4" in out
    code, out = run(capsys, "gauss", "1", "1", "3", "--identity")
    assert code == 0 and "|S| = 1.73205080756888" in out and "sign case" in out
    code, out = run(capsys, "gauss", "1", "2", "3")
    assert code != 0 and "ParityViolation" in out
    with pytest.warns(UserWarning, match="outside the uw\\+v even domain"):
        code, out = run(capsys, "gauss", "1", "2", "3", "--force")
    assert code == 0
    code, out = run(capsys, "gauss", "--sum-rule", "-d", "7", "--all")
    assert code == 0 and "156/156" in out


def test_envelop(capsys):
    code, out = run(capsys, "envelop", "-j", "1", "--check-cases")
    assert code == 0 and "b[1,-1] = 1.732050807569" in out and "b[1,+1] = -1.732050807569" in out
    code, out = run(capsys, "envelop", "-j", "2")
    assert code == 0 and "b[2,-2] = 2.236067977500" in out and "b[1,+1] = -2.449489742783" in out
    code, out = run(capsys, "envelop", "-j", "4", "-a", "1")
    assert code == 0
    code, out = run(capsys, "envelop", "-j", "13")
    assert code != 0 and "RangeError" in out


def test_op_dump(tmp_path, capsys):
    code, out = run(capsys, "op", "v", "-j", "1", "-r", "1")
    assert code == 0
    data = json.loads(out)
    assert data["entries"][1][0] == [-1.0, 0.0] and data["metadata"]["row_labels"] == "k=1,0"
    code, _ = run(capsys, "op", "casimir", "-j", "3", "-o", str(tmp_path / "c.json"))
    assert code == 0
    assert np.allclose(read_document(tmp_path / "c.json").matrix(), 3.75 * np.eye(4))


def test_tol_env_override(monkeypatch, capsys):
    monkeypatch.setenv("MUBKIT_TOL", "1e-20")
    code, _ = run(capsys, "mub", "verify", "-d", "5")
    assert code == 1


@pytest.mark.parametrize("suite", ["quon", "gauss"])
def test_selftest_suites(capsys, suite):
    code, out = run(capsys, "selftest", "--suite", suite, "--seed", "3")
    assert code == 0 and "FAIL" not in out


def test_selftest_fault_injection(monkeypatch, capsys):
    real = mub.hadamard_matrix

    def corrupted(d, a):
        h = real(d, a)
        h.exponents[1, 1] = (h.exponents[1, 1] + 1) % (2 * d)
        return h

    monkeypatch.setattr(mub, "hadamard_matrix", corrupted)
    code, out = run(capsys, "selftest", "--suite", "mub")
    assert code == 1
    assert "[FAIL] hadamard-eigen" in out
