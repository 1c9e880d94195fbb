"""
Subcommands. Each module exposes `run(args, settings) -> CommandResult`.
"""

from dataclasses import dataclass


@dataclass
class CommandResult:
    """Primary output text and the process exit code."""

    text: str
    exit_code: int = 0
