import json

import pytest

from fermat_regulator.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_jacobi_json(capsys):
    code, out, _ = run(capsys, "jacobi", "--N", "3", "--p", "7", "--a", "1", "--b", "1")
    assert code == 0
    rec = json.loads(out)
    assert rec["weil_check"] is True and rec["q"] == 7
    assert rec["coeffs"] == [[1, 1], [3, 1]]
    assert rec["meta"]["command"] == "jacobi"


@pytest.mark.parametrize("args", [
    ("jacobi", "--N", "3", "--p", "7", "--a", "1", "--b", "1"),
    ("lvalue", "--N", "5", "--a", "1", "--b", "2", "--prime-bound", "500"),
    ("ftilde", "--N", "7", "--a", "1", "--b", "2", "--method", "all"),
    ("regmatrix", "--N", "5", "--a", "1", "--b", "1"),
    ("beilinson", "--N", "5", "--a", "1", "--b", "1", "--prime-bound", "500"),
])
def test_json_roundtrip_is_byte_identical(capsys, args):
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert json.dumps(json.loads(out), sort_keys=True, indent=2) == out


def test_p_divides_N(capsys):
    code, _, err = run(capsys, "jacobi", "--N", "3", "--p", "3", "--a", "1", "--b", "1")
    assert code == 2 and "p divides N" in err


@pytest.mark.parametrize("args", [
    ("jacobi", "--N", "3", "--p", "8", "--a", "1", "--b", "1"),
    ("jacobi", "--N", "5", "--p", "7", "--f", "1", "--a", "1", "--b", "1"),
    ("lvalue", "--N", "3", "--a", "1", "--b", "2"),
    ("lvalue", "--N", "3", "--a", "1"),
    ("regmatrix", "--N", "4", "--a", "1", "--b", "1"),
    ("beilinson", "--N", "11", "--a", "1", "--b", "1", "--prime-bound", "100"),
    ("nonsense",),
])
def test_usage_errors(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_csv_has_header_and_one_row(capsys):
    code, out, _ = run(capsys, "jacobi", "--N", "3", "--p", "7", "--a", "1", "--b", "1", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2 and lines[0].startswith("N,p,f,q")


def test_text_format(capsys):
    code, out, _ = run(capsys, "ftilde", "--N", "2", "--a", "1", "--b", "1", "--format", "text")
    assert code == 2  # (1,1) is not in I_2
    code, out, _ = run(capsys, "ftilde", "--N", "3", "--a", "1", "--b", "1", "--format", "text")
    assert code == 0 and out.startswith("N: 3")


def test_lvalue_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FERMAT_REGULATOR_CACHE", str(tmp_path))
    run(capsys, "lvalue", "--N", "3", "--a", "1", "--b", "1", "--prime-bound", "300")
    assert any(tmp_path.iterdir())
    _, out, _ = run(capsys, "lvalue", "--N", "3", "--a", "1", "--b", "1", "--prime-bound", "300")
    rec = json.loads(out)
    assert rec["cache_hits"] == rec["primes_used"] > 0


def test_beilinson_n3_reports_sharp_ratio(capsys):
    code, out, _ = run(capsys, "beilinson", "--N", "3", "--a", "1", "--b", "1", "--prime-bound", "10000")
    rec = json.loads(out)
    assert code == 0 and rec["candidate_confirmed"] is False
    assert rec["sharp_ratio"] == pytest.approx(0.0517134593183504, rel=1e-12)


def test_version(capsys):
    assert main(["--version"]) == 0
