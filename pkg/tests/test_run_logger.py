"""
Unit tests for RunLogger.
"""

from qadvantage.run_logger import RunLogger


def test_log_run_appends_json_lines(tmp_path):
    """Test each run becomes one line that loads back."""
    logger = RunLogger(str(tmp_path / "logs"), "session")
    logger.log_run("cut", {'p1': 0.5, 'points': 11}, summary={'max_dI': 0.32}, output="cut.csv")
    logger.log_run("report", {'r': 1.0})

    assert logger.log_file == tmp_path / "logs" / "session_runs.jsonl"
    assert len(logger.log_file.read_text().splitlines()) == 2

    entries = RunLogger.load_from_file(str(logger.log_file))
    assert [e.command for e in entries] == ["cut", "report"]
    assert entries[0].parameters == {'p1': 0.5, 'points': 11}
    assert entries[0].summary == {'max_dI': 0.32}
    assert entries[0].output == "cut.csv"
    assert entries[1].output is None
    assert all(e.run_id == "session" for e in entries)


def test_log_file_is_shared_across_loggers(tmp_path):
    """Test a second logger with the same run id appends."""
    RunLogger(str(tmp_path), "shared").log_run("verify", {})
    second = RunLogger(str(tmp_path), "shared")
    second.log_run("verify", {})

    assert len(RunLogger.load_from_file(str(second.log_file))) == 2
    assert len(second.get_entries()) == 1


def test_summary_counts_commands(tmp_path):
    """Test per-command counts of the session."""
    logger = RunLogger(str(tmp_path), "counts")
    for command in ("mc", "mc", "cut"):
        logger.log_run(command, {})

    summary = logger.summary()
    assert summary['total_runs'] == 3
    assert summary['commands'] == {'mc': 2, 'cut': 1}
    assert summary['log_file'].endswith("counts_runs.jsonl")
