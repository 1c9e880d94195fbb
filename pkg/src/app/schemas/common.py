"""
Common Pydantic Schemas.

The error payload every subcommand writes to stdout on failure.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


# ============================================================================
# Error Responses
# ============================================================================

class ErrorDetail(BaseModel):
    type: str = Field(description="Stable error identifier, e.g. infeasible_k")
    message: str = Field(description="What went wrong, with file:line for parse errors")
    details: Optional[Dict[str, Any]] = Field(
        None, description="Offending values (omitted unless RGTEST_EXPOSE_ERROR_DETAILS)"
    )


class ErrorResponse(BaseModel):
    """`{"success": false, "exit_code": n, "error": {...}}`"""
    success: bool = False
    exit_code: int = Field(1, description="Process exit code returned with this payload")
    error: ErrorDetail


class ValidationErrorItem(BaseModel):
    """One rejected option or SimConfig field."""
    loc: List[str] = Field(description="Path to the field, e.g. ['sample_x', 'df']")
    msg: str
    type: str


def validation_items(errors: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Flatten pydantic `ValidationError.errors()` into serializable items."""
    return [
        ValidationErrorItem(
            loc=[str(part) for part in err.get("loc", ())],
            msg=str(err.get("msg", "")),
            type=str(err.get("type", "")),
        ).model_dump()
        for err in errors
    ]
