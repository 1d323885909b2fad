"""
Number formatting shared by all writers.
"""

__all__ = ["format_number"]

from typing import Any

import numpy as np


def format_number(value: Any) -> str:
    """Shortest decimal text that parses back to the same value. Integral
    floats drop their fractional part. Absent values become the empty
    string."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)) or np.ndim(value) == 0:
        try:
            value = float(value)
        except (TypeError, ValueError):
            return str(value)
        if value.is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return str(value)
