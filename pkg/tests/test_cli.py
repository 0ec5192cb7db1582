import json
import subprocess
import sys
from fractions import Fraction

import pytest

from mordellfam.cli import main
from mordellfam.curves import parse_point
from mordellfam.family import FamilyParams, build_instance


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out = capsys.readouterr() if capsys else None
    return code, out


# -- gen ------------------------------------------------------------------------

def test_gen_golden_json(capsys):
    code, out = run_cli("gen", "1", "2", "3", capsys=capsys)
    assert code == 0
    record = json.loads(out.out)
    assert record["k"] == "28592640"
    assert record["d"] == str(28592640**2)
    assert record["points"] == [
        "(97920, 41909760)",
        "(195840, 91261440)",
        "(293760, 161763840)",
    ]
    assert record["flags"] == []


def test_gen_with_heights(capsys):
    code, out = run_cli("gen", "1", "2", "3", "--with-heights", capsys=capsys)
    assert code == 0
    record = json.loads(out.out)
    reg = float(record["height_report"]["regulator"])
    assert abs(reg - 33.9574760167017) < 1e-6
    assert record["height_report"]["independent"] is True
    assert record["verdict"] == "rank >= 3 witnessed"


def test_gen_degenerate_without_heights_is_fine(capsys):
    code, out = run_cli("gen", "1", "1", "1", capsys=capsys)
    assert code == 0
    record = json.loads(out.out)
    assert record["flags"] == ["CoincidentPoints"]
    assert "height_report" not in record


def test_gen_degenerate_with_heights_exit_code(capsys):
    code, out = run_cli("gen", "1", "1", "1", "--with-heights", capsys=capsys)
    assert code == 2


def test_gen_all_zero_usage_error(capsys):
    code, out = run_cli("gen", "0", "0", "0", capsys=capsys)
    assert code == 1


def test_gen_json_round_trip(capsys):
    code, out = run_cli("gen", "2", "3", "4", capsys=capsys)
    record = json.loads(out.out)
    instance = build_instance(FamilyParams(2, 3, 4))
    assert int(record["k"]) == instance.k
    assert int(record["d"]) == instance.curve.d
    for text, point in zip(record["points"], instance.points):
        assert parse_point(text) == point
    assert Fraction(record["k"]) ** 2 == Fraction(record["d"])


def test_gen_csv(capsys):
    code, out = run_cli("gen", "1", "2", "3", "--format", "csv", capsys=capsys)
    assert code == 0
    lines = out.out.strip().splitlines()
    assert lines[0].startswith("a,b,c,k,d,x1,y1")
    assert "28592640" in lines[1]


def test_usage_error_exit_code_is_one():
    # argparse with a bad subcommand must exit 1, not 2
    proc = subprocess.run(
        [sys.executable, "-m", "mordellfam.cli", "no-such-command"],
        capture_output=True,
    )
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "mordellfam.cli"], capture_output=True)
    assert proc.returncode == 1


# -- verify-identities -------------------------------------------------------------

def test_verify_identities_passes(capsys):
    code, out = run_cli("verify-identities", capsys=capsys)
    assert code == 0
    assert "FAIL" not in out.out
    assert "11/11 identities hold" in out.out


def test_verify_identities_print_poly(capsys):
    code, out = run_cli("verify-identities", "--print-poly", capsys=capsys)
    assert code == 0
    assert "residual terms: 0" in out.out


def test_verify_identities_perturbed_fails(capsys):
    code, out = run_cli(
        "verify-identities", "--perturb", "p1_curve_identity:a^2", capsys=capsys
    )
    assert code == 3
    assert "FAIL" in out.out


def test_verify_identities_bad_perturb_usage(capsys):
    code, out = run_cli("verify-identities", "--perturb", "nonsense", capsys=capsys)
    assert code == 1


# -- scan --------------------------------------------------------------------------

def test_scan_csv_contains_golden_row(tmp_path, capsys):
    out_file = tmp_path / "scan.csv"
    code, _ = run_cli(
        "scan", "--a", "1:3", "--b", "1:3", "--c", "1:3", "--ordered",
        "--format", "csv", "--out", str(out_file), capsys=capsys,
    )
    assert code == 0
    text = out_file.read_text()
    lines = text.splitlines()
    golden = [l for l in lines if l.startswith("1,2,3,")]
    assert len(golden) == 1
    fields = golden[0].split(",")
    assert fields[3] == "28592640"
    assert abs(float(fields[8]) - 33.9574760167017) < 1e-6
    assert fields[10] == "true"


def test_scan_deterministic_byte_identical(tmp_path, capsys):
    f1, f2 = tmp_path / "s1.json", tmp_path / "s2.json"
    for f in (f1, f2):
        code, _ = run_cli(
            "scan", "--a", "1:3", "--b", "1:3", "--c", "2:4",
            "--format", "json", "--out", str(f), capsys=capsys,
        )
        assert code == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_scan_parallel_matches_serial(tmp_path, capsys):
    f1, f2 = tmp_path / "serial.csv", tmp_path / "par.csv"
    args = ["scan", "--a", "1:3", "--b", "1:3", "--c", "1:3", "--format", "csv"]
    code, _ = run_cli(*args, "--out", str(f1), capsys=capsys)
    assert code == 0
    code, _ = run_cli(*args, "--jobs", "3", "--out", str(f2), capsys=capsys)
    assert code == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_scan_degenerate_section(tmp_path, capsys):
    out_file = tmp_path / "scan.json"
    code, _ = run_cli(
        "scan", "--a", "2:2", "--b", "2:2", "--c", "2:4",
        "--out", str(out_file), capsys=capsys,
    )
    assert code == 0
    payload = json.loads(out_file.read_text())
    degenerate = {(r["a"], r["b"], r["c"]): r["flags"] for r in payload["degenerate"]}
    assert ("2", "2", "2") in degenerate
    assert "CoincidentPoints" in degenerate[("2", "2", "2")]
    clean = {(r["a"], r["b"], r["c"]) for r in payload["rows"]}
    assert ("2", "2", "4") not in clean  # a = b stays coincident
    assert ("2", "2", "3") not in clean


def test_scan_a_equals_b_rows_all_flagged(tmp_path, capsys):
    out_file = tmp_path / "scan.json"
    code, _ = run_cli(
        "scan", "--a", "3:3", "--b", "3:3", "--c", "1:6",
        "--out", str(out_file), capsys=capsys,
    )
    payload = json.loads(out_file.read_text())
    assert payload["rows"] == []
    assert all("CoincidentPoints" in r["flags"] for r in payload["degenerate"])


def test_scan_empty_range_yields_empty_table(capsys):
    code, out = run_cli("scan", "--a", "3:1", "--b", "1:2", "--c", "1:2", capsys=capsys)
    assert code == 0
    payload = json.loads(out.out)
    assert payload["rows"] == [] and payload["degenerate"] == []
    code, out = run_cli(
        "scan", "--a", "3:1", "--b", "1:2", "--c", "1:2", "--format", "csv",
        capsys=capsys,
    )
    assert code == 0
    assert out.out.strip().splitlines() == [
        "a,b,c,k,k_digits,x1,x2,x3,regulator,regulator_error,independent,error"
    ]


def test_scan_malformed_range_is_usage_error(capsys):
    code, _ = run_cli("scan", "--a", "1-3", "--b", "1:2", "--c", "1:2", capsys=capsys)
    assert code == 1


def test_scan_plot_written(tmp_path, capsys):
    out_file = tmp_path / "scan.csv"
    plot_file = tmp_path / "scan.png"
    code, _ = run_cli(
        "scan", "--a", "1:2", "--b", "2:3", "--c", "3:4", "--format", "csv",
        "--out", str(out_file), "--plot", str(plot_file), capsys=capsys,
    )
    assert code == 0
    assert plot_file.exists()
    assert plot_file.stat().st_size > 1000
    assert plot_file.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


# -- torsion ------------------------------------------------------------------------

def test_torsion_command(capsys):
    code, out = run_cli("torsion", str(28592640**2), capsys=capsys)
    assert code == 0
    record = json.loads(out.out)
    assert record["structure"] == "Z3"
    assert record["generator"] == "(0, 28592640)"
    assert len(record["elements"]) == 3


def test_torsion_zero_d_usage_error(capsys):
    code, _ = run_cli("torsion", "0", capsys=capsys)
    assert code == 1


# -- regulator ----------------------------------------------------------------------

def test_regulator_command_golden(capsys):
    code, out = run_cli(
        "regulator", str(28592640**2),
        "(97920, 41909760)", "(195840, 91261440)", "(293760, 161763840)",
        capsys=capsys,
    )
    assert code == 0
    record = json.loads(out.out)
    assert abs(float(record["regulator"]) - 33.9574760167017) < 1e-6
    assert record["independent"] is True


def test_regulator_command_rejects_torsion(capsys):
    code, _ = run_cli(
        "regulator", str(28592640**2), "(0, 28592640)", capsys=capsys
    )
    assert code == 2


def test_regulator_command_off_curve_point(capsys):
    code, _ = run_cli("regulator", "17", "(1, 1)", capsys=capsys)
    assert code == 1


def test_regulator_command_bad_point_syntax(capsys):
    code, _ = run_cli("regulator", "17", "(1; 2)", capsys=capsys)
    assert code == 1


# -- global flags ---------------------------------------------------------------------

def test_precision_flag_validated(capsys):
    code, _ = run_cli("gen", "1", "2", "3", "--precision", "0", capsys=capsys)
    assert code == 1


def test_precision_flag_changes_reported_digits(capsys):
    code, out = run_cli(
        "gen", "1", "2", "3", "--with-heights", "--precision", "40", capsys=capsys
    )
    assert code == 0
    record = json.loads(out.out)
    reg = record["height_report"]["regulator"]
    assert len(reg.replace(".", "").replace("-", "")) >= 35
