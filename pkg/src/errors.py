"""
Exception hierarchy.

Every library error carries a stable `error_type` (serialized into the CLI error
payload) and the process `exit_code` the CLI returns for it:

  2  usage / configuration error
  3  data error (bad input files, preconditions on sizes, labels, k, weights)
  4  ill-conditioned graph (zero permutation variance)
  5  oracle failure (moment formulas disagree with enumeration)
"""

from __future__ import annotations

from typing import Any, Optional


class RGTestError(Exception):
    error_type = "error"
    exit_code = 1

    def __init__(self, message: str, *, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


# ============================================================================
# Configuration
# ============================================================================

class ConfigError(RGTestError):
    error_type = "config_error"
    exit_code = 2


# ============================================================================
# Data / preconditions
# ============================================================================

class DataError(RGTestError):
    error_type = "data_error"
    exit_code = 3


class InvalidInputError(DataError):
    error_type = "invalid_input"


class FileFormatError(DataError):
    """Parse error in an input file; `line` is 1-based."""

    error_type = "file_format"

    def __init__(self, message: str, *, path: str, line: Optional[int] = None):
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}", details={"path": path, "line": line})
        self.path = path
        self.line = line


class InvalidDegreeError(DataError):
    error_type = "invalid_degree"


class InvalidWeightError(DataError):
    error_type = "invalid_weight"


class InfeasibleKError(DataError):
    error_type = "infeasible_k"


class InvalidKError(DataError):
    error_type = "invalid_k"


class DegenerateSizeError(DataError):
    error_type = "degenerate_size"


class EnumerationBudgetError(DataError):
    error_type = "enumeration_budget"


class InvalidDfError(DataError):
    error_type = "invalid_df"


# ============================================================================
# Graph conditioning
# ============================================================================

class IllConditionedGraphError(RGTestError):
    """Raised when a permutation variance vanishes (node weight-sums all equal, or a star-like graph)."""

    error_type = "ill_conditioned_graph"
    exit_code = 4

    def __init__(self, message: str, *, condition: str, value: Optional[float] = None):
        super().__init__(message, details={"condition": condition, "value": value})
        self.condition = condition
        self.value = value


# ============================================================================
# Oracle
# ============================================================================

class OracleMismatchError(RGTestError):
    error_type = "oracle_mismatch"
    exit_code = 5


class MomentConsistencyError(RGTestError):
    error_type = "moment_consistency"
    exit_code = 5
