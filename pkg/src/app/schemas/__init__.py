"""
Pydantic schemas for command inputs, simulation configs and error payloads.
"""

from .common import ErrorDetail, ErrorResponse, ValidationErrorItem, validation_items
from .run import RunConfig
from .simulation import DistributionSpec, GraphSpec, ScaleBlock, SimConfig

__all__ = [
    "DistributionSpec",
    "ErrorDetail",
    "ErrorResponse",
    "GraphSpec",
    "RunConfig",
    "ScaleBlock",
    "SimConfig",
    "ValidationErrorItem",
    "validation_items",
]
