"""
Tests for the command-line interface.

Runs the commands through click's CliRunner with small grids and shot
counts; machine output is read back from --out files.
"""

import json
import math

import pytest
from click.testing import CliRunner

from cli.main import cli


@pytest.fixture
def runner():
    """Click test runner."""
    return CliRunner()


def invoke(runner, *args):
    """Run the CLI with the given arguments."""
    return runner.invoke(cli, list(args))


def test_report_bell_state(runner, tmp_path):
    """Test C = D = 1 at R = kappa_h = 1."""
    out = tmp_path / "report.json"
    result = invoke(runner, "report", "--R", "1", "--kh", "1", "--out", str(out))
    assert result.exit_code == 0, result.output

    payload = json.loads(out.read_text())
    assert payload['report']['concurrence'] == pytest.approx(1.0, abs=1e-12)
    assert payload['report']['discord'] == pytest.approx(1.0, abs=1e-9)
    assert payload['params'] == {'R': 1.0, 'kappa_h': 1.0, 'kappa_v': 0.0}


def test_report_maximally_mixed_state(runner, tmp_path):
    """Test a = 1/4, w = z = 0 carries no correlations."""
    out = tmp_path / "report.json"
    result = invoke(runner, "report", "--a", "0.25", "--w", "0", "--z", "0", "--out", str(out))
    assert result.exit_code == 0, result.output

    report = json.loads(out.read_text())['report']
    for key in ('concurrence', 'discord', 'mutual_information', 'classical_information'):
        assert report[key] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("args", [
    ("report", "--R", "1", "--kh", "1", "--a", "0.25", "--w", "0", "--z", "0"),
    ("report", "--a", "0.25", "--w", "0", "--z", "0", "--kv", "0.3"),
    ("report", "--a", "0.2", "--w", "0.3", "--z", "0"),
    ("report", "--R", "1.2", "--kh", "1"),
    ("cut", "--p1", "0.7", "--points", "3"),
    ("mc", "--R", "1", "--p1", "0.5", "--p2", "0.5", "--shots", "10"),
    ("sweep-prep", "--grid", "1x5"),
])
def test_invalid_input_exits_with_status_2(runner, args):
    """Test bad parameters are reported instead of raising."""
    result = invoke(runner, *args)
    assert result.exit_code == 2
    assert "Error" in result.output


def test_sweep_prep_writes_table_and_boundaries(runner, tmp_path):
    """Test the CSV table and its boundary companion."""
    out = tmp_path / "prep.csv"
    result = invoke(runner, "sweep-prep", "--grid", "5x5", "--out", str(out))
    assert result.exit_code == 0, result.output

    lines = out.read_text().splitlines()
    assert lines[0] == "R,kappa_h,C,E,D,I,J,branch"
    assert len(lines) == 26

    boundaries = (tmp_path / "prep_boundaries.csv").read_text().splitlines()
    assert boundaries[0] == "kappa_h,R_separable,R_werner,R_werner_like"
    assert len(boundaries) == 6


def test_sweep_prep_from_config(runner, tmp_path):
    """Test a YAML sweep with the grid overridden."""
    config = tmp_path / "sweep.yml"
    config.write_text(
        "axis1: {name: R, start: 0.0, stop: 1.0, points: 201}\n"
        "axis2: {name: kappa_h, start: 0.0, stop: 1.0, points: 201}\n"
    )
    result = invoke(runner, "sweep-prep", "--config", str(config), "--grid", "3x2", "--format", "json")
    assert result.exit_code == 0, result.output
    assert "Max D" in result.output


def test_sweep_advantage_json(runner, tmp_path):
    """Test JSON records of the advantage grid."""
    out = tmp_path / "advantage.json"
    result = invoke(runner, "sweep-advantage", "--grid", "3x3", "--format", "json", "--out", str(out))
    assert result.exit_code == 0, result.output

    records = json.loads(out.read_text())
    assert len(records) == 9
    best = max(records, key=lambda record: record['dI'])
    assert (best['R'], best['p1']) == (1.0, 0.25)
    assert best['dI'] == pytest.approx(1.0, abs=1e-6)
    assert (tmp_path / "advantage_boundaries.json").exists()
    assert "Max dI with C=0 before encoding" in result.output


def test_cut_reports_maximum(runner, tmp_path):
    """Test the cut table and the located maximum."""
    out = tmp_path / "cut.csv"
    result = invoke(runner, "cut", "--p1", "0.5", "--points", "11", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert "Max dI" in result.output
    assert out.read_text().splitlines()[0] == "R,C,D,dI"


def test_mc_superdense(runner, tmp_path):
    """Test joint decoding of the Bell state never errs."""
    out = tmp_path / "mc.json"
    result = invoke(
        runner, "mc", "--R", "1", "--uniform", "--shots", "2000", "--seed", "7",
        "--strategy", "joint", "--out", str(out),
    )
    assert result.exit_code == 0, result.output

    payload = json.loads(out.read_text())
    assert payload['stats']['success_rate'] == 1.0
    assert payload['theory']['i_q'] == pytest.approx(2.0, abs=1e-9)
    assert payload['click_deviation']['within_bound']


def test_mc_quasi_optimal_family(runner, tmp_path):
    """Test --p1 alone selects (p1, p1, 1/2 - p1, 1/2 - p1)."""
    out = tmp_path / "mc.json"
    result = invoke(runner, "mc", "--R", "0.5", "--p1", "0.5", "--shots", "500", "--out", str(out))
    assert result.exit_code == 0, result.output

    distribution = json.loads(out.read_text())['config']['distribution']
    assert distribution == {'p1': 0.5, 'p2': 0.5, 'p3': 0.0, 'p4': 0.0}



def test_mc_folds_negative_polar_angle(runner, tmp_path):
    """Test --ms -pi/2 0 measures along -x rather than z."""
    out = tmp_path / "mc.json"
    result = invoke(
        runner, "mc", "--R", "1", "--uniform", "--shots", "10", "--strategy", "local",
        "--ms", "-1.5707963", "0", "--out", str(out),
    )
    assert result.exit_code == 0, result.output

    m_s = json.loads(out.read_text())['config']['m_s']
    assert m_s['theta'] == pytest.approx(math.pi / 2, abs=1e-6)
    assert m_s['phi'] == pytest.approx(math.pi, abs=1e-12)

def test_verify_selected_checks(runner, tmp_path):
    """Test a passing subset exits 0."""
    out = tmp_path / "verify.json"
    result = invoke(runner, "verify", "--only", "vanishing_cases", "--only", "bell_extremum", "--out", str(out))
    assert result.exit_code == 0, result.output

    names = [r['name'] for r in json.loads(out.read_text())]
    assert names == ['vanishing_cases', 'bell_extremum']


def test_verify_unknown_check(runner):
    """Test an unknown check name exits with status 2."""
    result = invoke(runner, "verify", "--only", "nonexistent")
    assert result.exit_code == 2


def test_log_dir_records_runs(runner, tmp_path):
    """Test --log-dir appends one JSON line per command."""
    logs = tmp_path / "logs"
    out = tmp_path / "report.json"
    result = invoke(
        runner, "--log-dir", str(logs), "--run-id", "test",
        "report", "--a", "0.25", "--w", "0", "--z", "0", "--out", str(out),
    )
    assert result.exit_code == 0, result.output

    entry = json.loads((logs / "test_runs.jsonl").read_text().splitlines()[0])
    assert entry['command'] == "report"
    assert entry['output'] == str(out)
    assert entry['summary']['discord'] == pytest.approx(0.0, abs=1e-12)
