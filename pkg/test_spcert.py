"""
Test set files, set families, settings, sweeps and the spcert command line
"""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings as hyp_settings
from openpyxl import load_workbook

from conftest import nonzero_gaussians
from exactnum import GaussianRational, format_gaussian
from pipeline_settings import PipelineSettings, SettingsError, load_settings, save_settings
from set_families import (
    FamilyParameterError, arithmetic_progression, gaussian_grid, generate,
    geometric_progression, random_set,
)
from set_files import (
    SetFileParseError, format_set_file, load_set_file, parse_gaussian, parse_set_text,
    save_set_file,
)
from setcore import ComplexSet
from spcert import run_subcommand
from sweep import CSV_COLUMNS, exponent_trend, format_sweep_csv, run_sweep, sweep_sizes
from sweep_export import export_sweep_to_excel

I = GaussianRational.unit()


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


# ---------------------------------------------------------------------------
# Set files
# ---------------------------------------------------------------------------

def test_parse_terms():
    assert parse_gaussian("3") == g(3)
    assert parse_gaussian("-1/2") == g(Fraction(-1, 2))
    assert parse_gaussian("i") == I
    assert parse_gaussian("2/3i") == g(0, Fraction(2, 3))
    assert parse_gaussian("-1i") == g(0, -1)
    assert parse_gaussian("1+2i") == g(1, 2)
    assert parse_gaussian("1-i") == g(1, -1)
    assert parse_gaussian(" -3/4+5/6i ") == g(Fraction(-3, 4), Fraction(5, 6))


@pytest.mark.parametrize("text", ["", "1/0", "2*i", "1+", "i2", "1.5", "1 + i", "--1"])
def test_parse_rejects_malformed_terms(text):
    with pytest.raises(ValueError):
        parse_gaussian(text)


@hyp_settings(max_examples=200, derandomize=True)
@given(nonzero_gaussians)
def test_printed_values_parse_back(z):
    assert parse_gaussian(format_gaussian(z)) == z


def test_set_file_with_comments():
    text = "# ap(3)\n1\n\n2  # second\n3\n"
    assert parse_set_text(text) == arithmetic_progression(3)


def test_set_file_errors_carry_line_numbers():
    with pytest.raises(SetFileParseError) as info:
        parse_set_text("1\n2\nfoo\n")
    assert info.value.line_number == 3

    with pytest.raises(SetFileParseError) as info:
        parse_set_text("1\n0\n")
    assert info.value.line_number == 2

    with pytest.raises(SetFileParseError) as info:
        parse_set_text("1\n2/2\n")
    assert info.value.line_number == 2
    assert "line 1" in str(info.value)


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n", "  # indented\n\n"])
def test_set_file_without_elements_is_rejected(text):
    with pytest.raises(SetFileParseError) as info:
        parse_set_text(text)
    assert info.value.line_number is None
    assert "no elements" in str(info.value)


def test_set_file_round_trip(tmp_path):
    path = tmp_path / "grid.txt"
    a = gaussian_grid(2)
    assert save_set_file(a, path, comment="grid(2)")
    assert path.read_text().startswith("# grid(2)\n")
    assert load_set_file(path) == a


def test_format_set_file_is_canonical():
    assert format_set_file(ComplexSet([I, 2, 1])) == "i\n1\n2\n"


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def test_families():
    assert generate("ap", 4) == ComplexSet([1, 2, 3, 4])
    assert generate("gp", 3) == ComplexSet([2, 4, 8])
    assert generate("gp", 3, ratio=g(1, 1)) == ComplexSet([g(1, 1), g(0, 2), g(-2, 2)])
    assert generate("grid", 4) == ComplexSet([g(1, 1), g(1, 2), g(2, 1), g(2, 2)])
    assert len(generate("random", 7, bound=5, seed=1)) == 7


def test_family_errors():
    with pytest.raises(FamilyParameterError):
        generate("grid", 5)
    with pytest.raises(FamilyParameterError):
        generate("ap", 0)
    with pytest.raises(FamilyParameterError):
        generate("cubes", 3)
    with pytest.raises(FamilyParameterError):
        geometric_progression(3, g(1))
    with pytest.raises(FamilyParameterError):
        geometric_progression(5, I)
    with pytest.raises(FamilyParameterError):
        random_set(3, 0, 0)
    with pytest.raises(FamilyParameterError):
        random_set(500, 1, 0)


def test_random_sets_are_seeded():
    assert random_set(8, 10, 4) == random_set(8, 10, 4)
    assert random_set(8, 10, 4) != random_set(8, 10, 5)
    for z in random_set(12, 3, 9):
        assert not z.is_zero()
        assert abs(z.re.numerator) <= 3 and abs(z.im.numerator) <= 3


# ---------------------------------------------------------------------------
# Settings
# ---------------------------------------------------------------------------

def test_settings_defaults_and_round_trip(tmp_path):
    assert load_settings(None) == PipelineSettings()
    assert load_settings(tmp_path / "missing.json") == PipelineSettings()

    path = tmp_path / "settings.json"
    custom = PipelineSettings(retries=7, partner_rule="spanning-tree")
    assert save_settings(custom, path)
    assert load_settings(path) == custom


def test_settings_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SettingsError):
        load_settings(path)

    path.write_text(json.dumps({"retries": 4, "colour": "blue"}))
    with pytest.raises(SettingsError):
        load_settings(path)

    path.write_text(json.dumps({"partner_rule": "nearest"}))
    with pytest.raises(SettingsError):
        load_settings(path)

    with pytest.raises(SettingsError):
        PipelineSettings().override(retries=0)


def test_override_ignores_unset_flags():
    base = PipelineSettings(seed=4)
    assert base.override(seed=None, retries=3) == PipelineSettings(seed=4, retries=3)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def test_sweep_sizes():
    assert sweep_sizes("ap", 2, 5) == [2, 3, 4, 5]
    assert sweep_sizes("grid", 1, 10) == [1, 4, 9]


def test_sweep_rows_and_csv():
    rows = run_sweep("ap", 1, 4, seed=0)
    assert [r.n for r in rows] == [1, 2, 3, 4]
    assert rows[2].sumset_size == 5 and rows[2].productset_size == 6 and rows[2].energy == 15
    assert rows[0].theorem_constant is None

    text = format_sweep_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 5
    assert lines[3].startswith("ap,3,3,5,6,15,9,")


def test_sweep_is_deterministic():
    first = format_sweep_csv(run_sweep("random", 2, 5, seed=11))
    second = format_sweep_csv(run_sweep("random", 2, 5, seed=11))
    assert first == second


def test_sweep_workbook(tmp_path):
    rows = run_sweep("gp", 2, 4, seed=0)
    path = export_sweep_to_excel(rows, str(tmp_path / "sweep.xlsx"))
    wb = load_workbook(path)
    assert wb.sheetnames == ["Summary", "Sweep"]
    sweep_sheet = wb["Sweep"]
    assert [c.value for c in sweep_sheet[1]] == CSV_COLUMNS
    assert sweep_sheet.max_row == len(rows) + 1
    assert wb["Summary"]["B4"].value == len(rows)

    summary = wb["Summary"]
    assert summary["A12"].value == "Exponent by |A|"
    trend = [(summary.cell(13 + k, 1).value, summary.cell(13 + k, 2).value) for k in range(len(rows))]
    assert trend == [(r.set_size, r.effective_exponent) for r in rows]


def test_exponent_trend_skips_undefined_sizes():
    rows = run_sweep("ap", 1, 4, seed=0)
    trend = exponent_trend(rows)
    assert rows[0].effective_exponent is None
    assert list(trend.index) == [2, 3, 4]
    assert list(trend) == [r.effective_exponent for r in rows[1:]]


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

@pytest.fixture
def ap3_file(tmp_path):
    path = tmp_path / "ap3.txt"
    path.write_text("1\n2\n3\n")
    return path


def test_cli_analyze(ap3_file, capsys):
    assert run_subcommand(["analyze", str(ap3_file)]) == 0
    out = capsys.readouterr().out
    assert "|A+A| = 5" in out
    assert "|A*A| = 6" in out
    assert "E = 15" in out


def test_cli_analyze_json(ap3_file, capsys):
    assert run_subcommand(["analyze", str(ap3_file), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['energy'] == 15
    assert report['eq1'] == {'bound': "27/2", 'holds': True}
    assert report['dyadic']['k'] == 1
    assert [c['mass'] for c in report['dyadic']['classes']] == [6, 9]
    assert report['theorem_bound'] is True
    assert report['violations'] == []


def test_cli_oracle_check(ap3_file, capsys):
    assert run_subcommand(["oracle-check", str(ap3_file)]) == 0
    assert capsys.readouterr().out.strip() == "15 == 15"
    assert run_subcommand(["oracle-check", str(ap3_file), "--cap", "2"]) == 2


def test_cli_gen_then_parse(tmp_path):
    out = tmp_path / "grid.txt"
    assert run_subcommand(["gen", "--family", "grid", "--n", "4", "--out", str(out)]) == 0
    assert load_set_file(out) == gaussian_grid(2)

    out = tmp_path / "gp.txt"
    assert run_subcommand(["gen", "--family", "gp", "--n", "3", "--ratio", "1+i", "--out", str(out)]) == 0
    assert load_set_file(out) == geometric_progression(3, g(1, 1))


def test_cli_certify(ap3_file, tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert run_subcommand(["certify", str(ap3_file), "--seed", "2", "--out", str(out)]) == 0
    cert = json.loads(out.read_text())
    assert cert['energy'] == 15
    assert cert['seed'] == 2

    assert run_subcommand(["certify", str(ap3_file), "--seed", "2"]) == 0
    assert json.loads(capsys.readouterr().out) == cert


def test_cli_sweep(tmp_path):
    csv_path = tmp_path / "sweep.csv"
    again_path = tmp_path / "again.csv"
    args = ["sweep", "--family", "ap", "--n-min", "1", "--n-max", "4", "--seed", "5"]
    assert run_subcommand(args + ["--csv", str(csv_path)]) == 0
    assert run_subcommand(args + ["--csv", str(again_path)]) == 0
    assert csv_path.read_bytes() == again_path.read_bytes()

    xlsx = tmp_path / "sweep.xlsx"
    assert run_subcommand(args + ["--csv", str(csv_path), "--xlsx", str(xlsx)]) == 0
    assert xlsx.exists()


def test_cli_sweep_logs_exponent_trend(tmp_path, capsys):
    args = ["sweep", "--family", "ap", "--n-min", "1", "--n-max", "3", "--csv", str(tmp_path / "s.csv")]
    assert run_subcommand(args) == 0
    err = capsys.readouterr().err
    assert "effective exponent by |A|: 2: " in err
    assert ", 3: " in err

    assert run_subcommand(["--quiet"] + args) == 0
    assert "effective exponent" not in capsys.readouterr().err


def test_cli_usage_errors(tmp_path, ap3_file):
    assert run_subcommand([]) == 2
    assert run_subcommand(["frobnicate"]) == 2
    assert run_subcommand(["analyze", str(tmp_path / "missing.txt")]) == 2
    assert run_subcommand(["gen", "--family", "grid", "--n", "5"]) == 2
    assert run_subcommand(["gen", "--family", "gp", "--n", "5", "--ratio", "i"]) == 2
    assert run_subcommand(["certify", str(ap3_file), "--retries", "0"]) == 2
    assert run_subcommand(["sweep", "--family", "ap", "--n-min", "4", "--n-max", "2"]) == 2

    bad = tmp_path / "bad.txt"
    bad.write_text("1\n1/0\n")
    assert run_subcommand(["analyze", str(bad)]) == 2

    settings = tmp_path / "settings.json"
    settings.write_text('{"oracle_cap": "many"}')
    assert run_subcommand(["--settings", str(settings), "oracle-check", str(ap3_file)]) == 2


def test_cli_rejects_empty_set_files(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing here\n\n")
    for command in ("analyze", "certify", "oracle-check"):
        assert run_subcommand([command, str(empty)]) == 2
    assert capsys.readouterr().out == ""


def test_cli_settings_file_sets_defaults(tmp_path, ap3_file):
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({"oracle_cap": 2}))
    assert run_subcommand(["--settings", str(settings), "oracle-check", str(ap3_file)]) == 2
    assert run_subcommand(["--settings", str(settings), "oracle-check", str(ap3_file), "--cap", "3"]) == 0
