"""
Number formatting for machine-readable output.

JSON carries 12 significant digits, CSV tables 6. Rounding happens before
serialization so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import math
from enum import Enum
from typing import Any

import numpy as np

JSON_DIGITS = 12
CSV_DIGITS = 6


def round_sig(value: float, digits: int = JSON_DIGITS) -> float | None:
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.{digits}g}")


def to_jsonable(obj: Any, digits: int = JSON_DIGITS) -> Any:
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(obj, digits)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k.value if isinstance(k, Enum) else k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist(), digits)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict(), digits)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def csv_number(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(float(value)):
            return ""
        return f"{float(value):.{CSV_DIGITS}g}"
    return str(value)
