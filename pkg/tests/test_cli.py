from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from kahler_dirac import cli
from kahler_dirac.cli import ParseError, UsageError, evaluate_program, main, parse_j, split_statements, tokenize

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"
SCHEMA = json.loads((ROOT / "docs" / "schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- spectrum ------------------------------------------------------------
def test_spin_half_example(capsys):
    code, out, _ = run(capsys, "spectrum", "--operator", "spin_s3", "--j-max", "0.5", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    rep = next(r for r in doc["reports"] if r["j"] == 0.5)
    pairs = {(e["im"], e["mult"]) for e in rep["eigenvalues"]}
    assert (1.5, 2) in pairs and (-0.5, 6) in pairs
    assert rep["shift_im"] == -0.75


def test_s2_example(capsys):
    code, out, _ = run(capsys, "spectrum", "--operator", "kahler_s2", "--j-max", "1", "--format", "json")
    assert code == 0
    rep = next(r for r in json.loads(out)["reports"] if r["j"] == 1)
    assert {(e["im"], e["mult"]) for e in rep["eigenvalues"]} == {(round(2 ** 0.5, 10), 3), (-round(2 ** 0.5, 10), 3)}


def test_s2_half_integer_is_usage_error(capsys):
    code, _, err = run(capsys, "spectrum", "--operator", "kahler_s2", "--j-max", "0.5")
    assert code == 2
    assert "usage error" in err


@pytest.mark.parametrize("argv", [["spectrum", "--operator", "nope", "--j-max", "1"], ["spectrum", "--operator", "spin_s3", "--j-max", "1/3"], ["spectrum", "--operator", "spin_s3", "--j-max", "-1"], ["spectrum"], []])
def test_bad_arguments(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("op", cli.OPERATORS)
def test_goldens_bit_identical(capsys, op, tmp_path):
    out = tmp_path / "o.json"
    assert main(["spectrum", "--operator", op, "--j-max", "2", "--format", "json", "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / f"{op}_jmax2.json").read_bytes()
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)


def test_csv_format(capsys):
    code, out, _ = run(capsys, "spectrum", "--operator", "kahler_s3", "--j-max", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == cli.CSV_COLUMNS
    assert {r[1] for r in rows[1:]} == {"0", "0.5", "1"}
    assert all(r[-1] == "true" for r in rows[1:])


def test_table_format(capsys):
    code, out, _ = run(capsys, "spectrum", "--operator", "spin_s3", "--j-max", "1")
    assert code == 0
    assert "verdict" in out and "MISMATCH" not in out
    assert "-0.75i" in out


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("DIRAC_THREADS", "3")
    assert cli.thread_count() == 3
    monkeypatch.setenv("DIRAC_THREADS", "zero")
    with pytest.raises(UsageError):
        cli.thread_count()


def test_thread_count_does_not_change_output(capsys, monkeypatch):
    outs = []
    for n in ("1", "4"):
        monkeypatch.setenv("DIRAC_THREADS", n)
        outs.append(run(capsys, "spectrum", "--operator", "spin_ideal_s3", "--j-max", "1.5", "--format", "json")[1])
    assert outs[0] == outs[1]


def test_parse_j():
    assert parse_j("3/2") == Fraction(3, 2)
    assert parse_j("1.5") == Fraction(3, 2)
    with pytest.raises(UsageError):
        parse_j("x")


# --- verify --------------------------------------------------------------
def test_verify_seeds_give_identical_verdicts():
    from kahler_dirac.verification import run_suites

    fast = ["kahler_atiyah.anticommutation", "kahler_atiyah.hodge_sign_rule", "spin_modules.adjoint_isometry", "su2_harmonics.ladder_commutators"]
    verdicts = {tuple(r.passed for r in run_suites(seed, only=fast)) for seed in range(10)}
    assert verdicts == {(True,) * len(fast)}


def test_verify_exit_codes(capsys, monkeypatch):
    from kahler_dirac import verification

    real = verification.run_suites
    only = ["spin_modules.gamma_anticommutation"]
    monkeypatch.setattr(verification, "run_suites", lambda seed, fault: real(seed, fault, only=only))
    assert run(capsys, "verify")[0] == 0
    code, out, _ = run(capsys, "verify", "--inject-fault", "--format", "json")
    assert code == 1
    assert json.loads(out)["passed"] is False


# --- algebra -------------------------------------------------------------
@pytest.mark.parametrize(
    "src,want",
    [
        ("metric euclid 3; e1 ∨ e1", ["1"]),
        ("metric euclid 3; star(e1 ∧ e2)", ["e3"]),
        ("metric euclid 3; e1 ∧ e1", ["0"]),
        ("metric euclid 2\ne1 v e2 + e2 v e1", ["0"]),
        ("metric euclid 2; orientation -1; star(e1)", ["-e2"]),
        ("metric lorentz 2; e1 * e1", ["-1"]),
        ("metric euclid 3; 1/2 * (e1 + e2) ^ e3  # comment", ["1/2*e1^e3 + 1/2*e2^e3"]),
        ("metric euclid 2; i v e1 v e1", ["i"]),
    ],
)
def test_algebra_programs(src, want):
    assert evaluate_program(src) == want


def test_algebra_file_and_stdin(tmp_path, capsys, monkeypatch):
    f = tmp_path / "p.txt"
    f.write_text("metric euclid 3; e1 ∨ e2\n")
    code, out, _ = run(capsys, "algebra", str(f))
    assert (code, out) == (0, "e1^e2\n")
    monkeypatch.setattr("sys.stdin", io.StringIO("metric euclid 2; e2 ^ e1"))
    code, out, _ = run(capsys, "algebra", "-")
    assert (code, out) == (0, "-e1^e2\n")


@pytest.mark.parametrize(
    "src,code",
    [
        ("metric euclid 3; e1 ∨", 2),
        ("metric euclid 3; (e1", 2),
        ("e1 ^ e2", 2),
        ("metric euclid 3; e4", 3),
        ("metric banana 3; e1", 2),
        ("metric euclid 3; e1 $ e2", 2),
    ],
)
def test_algebra_errors(tmp_path, capsys, src, code):
    f = tmp_path / "p.txt"
    f.write_text(src)
    got, _, err = run(capsys, "algebra", str(f))
    assert got == code
    assert err


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        evaluate_program("metric euclid 3\ne1 ^ ^ e2")
    assert exc.value.line == 2 and exc.value.column == 6


def test_missing_file(capsys):
    assert run(capsys, "algebra", "/nonexistent/x")[0] == 2


def test_tokenizer_and_splitter():
    assert [t.text for t in tokenize("e1∧e2", 1) if t.kind != "end"] == ["e1", "^", "e2"]
    assert split_statements("a; b # c\n d") == [("a", 1, 1), (" b ", 1, 3), (" d", 2, 1)]
