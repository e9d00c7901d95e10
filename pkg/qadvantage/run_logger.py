"""
Run logging for reproducible CLI invocations.

Each command appends one JSON line with its flags, a short result summary and
the output path, so any table or report can be regenerated later.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from qadvantage.models import RunLogEntry


class RunLogger:
    """
    Appends CLI runs to a JSONL log.

    Entries are also kept in memory for the summary of the session.
    """

    def __init__(self, log_dir: str, run_id: str):
        """
        Initialize run logger.

        Args:
            log_dir: Directory to store log files
            run_id: Identifier shared by all runs of a session
        """
        self.log_dir = Path(log_dir)
        self.run_id = run_id
        self.log_file = self.log_dir / f"{run_id}_runs.jsonl"
        self.entries: List[RunLogEntry] = []

        self.log_dir.mkdir(parents=True, exist_ok=True)

    def log_run(
        self,
        command: str,
        parameters: Dict[str, Any],
        summary: Optional[Dict[str, Any]] = None,
        output: Optional[str] = None
    ) -> RunLogEntry:
        """
        Log a single command run.

        Args:
            command: Subcommand name (e.g., "sweep-prep")
            parameters: Flag values the command ran with
            summary: Headline results
            output: Path the machine-readable output went to, if any

        Returns:
            The written entry
        """
        entry = RunLogEntry(
            run_id=self.run_id,
            command=command,
            parameters=parameters,
            summary=summary or {},
            output=output,
        )
        self.entries.append(entry)
        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write(entry.model_dump_json() + '\n')
        return entry

    def get_entries(self) -> List[RunLogEntry]:
        """Entries logged in this session."""
        return self.entries

    @staticmethod
    def load_from_file(log_file: str) -> List[RunLogEntry]:
        """
        Load run log entries from a JSONL file.

        Args:
            log_file: Path to the log file

        Returns:
            List of RunLogEntry objects
        """
        entries = []
        with open(log_file, 'r', encoding='utf-8') as f:
            for line in f:
                if line.strip():
                    entries.append(RunLogEntry(**json.loads(line)))
        return entries

    def summary(self) -> dict:
        """Counts of logged runs per command."""
        commands: Dict[str, int] = {}
        for entry in self.entries:
            commands[entry.command] = commands.get(entry.command, 0) + 1
        return {
            'run_id': self.run_id,
            'total_runs': len(self.entries),
            'commands': commands,
            'log_file': str(self.log_file),
        }
