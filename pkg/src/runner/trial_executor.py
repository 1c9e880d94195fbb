"""
Run one Monte Carlo trial and record its outcome.

Library errors (ill-conditioned graphs, infeasible k, ...) mark the record as
failed and are logged; they never abort a study. Anything else is a bug and
propagates.
"""

from __future__ import annotations

import logging
from typing import Callable

from ..errors import RGTestError
from ..models.simulation import TrialRecord

logger = logging.getLogger(__name__)


def execute_trial(scenario: str, trial: int, body: Callable[[TrialRecord], None]) -> TrialRecord:
    record = TrialRecord(scenario=scenario, trial=trial)
    try:
        body(record)
    except RGTestError as exc:
        error_msg = f"{exc.error_type}: {exc.message}"
        logger.warning("Scenario '%s' trial %d failed - %s", scenario, trial, error_msg)
        record.mark_completed("failed", error_message=error_msg)
        return record
    record.mark_completed("success")
    return record
