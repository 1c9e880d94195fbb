"""
`oracle-check`: compare closed-form null moments with exhaustive enumeration.
Exit code 5 when any comparison fails.
"""

from __future__ import annotations

import argparse

from ...errors import ConfigError, OracleMismatchError
from ...services.oracle import oracle_check
from ...utils.formatting import dumps
from ..config import Settings
from . import CommandResult


def run(args: argparse.Namespace, settings: Settings) -> CommandResult:
    seed = settings.seed if args.seed is None else args.seed
    if args.graphs < 1:
        raise ConfigError("--graphs must be at least 1.")
    report = oracle_check(args.graphs, seed)
    payload = {"config": {"graphs": args.graphs, "seed": seed}, **report.to_dict()}
    return CommandResult(
        text=dumps(payload),
        exit_code=0 if report.passed else OracleMismatchError.exit_code,
    )
