"""
Filename: serialization.py
Project: TD Clock Stability (TDCS)
Description: Serialize various types of objects to a format suitable for JSON serialization
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import math
from collections.abc import Iterable
from collections.abc import Mapping
from datetime import date
from datetime import datetime
from datetime import timedelta
from enum import Enum
from fractions import Fraction
from pathlib import Path
from uuid import UUID

import numpy as np
from pydantic import BaseModel

primitive = (int, str, bool)

# arrays above this size are logged by shape only
MAX_INLINE_ARRAY = 16


def is_primitive(thing):
    return isinstance(thing, primitive)


def serialize_float(x: float):
    """JSON has no inf/nan; keep them readable as strings"""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def serialize(obj, decoder="utf8"):
    if obj is None:
        return None
    if isinstance(obj, BaseModel):
        return serialize(obj.model_dump())
    if isinstance(obj, np.ndarray):
        if obj.size > MAX_INLINE_ARRAY:
            return {"ndarray": list(obj.shape), "dtype": str(obj.dtype)}
        return serialize(obj.tolist())
    if isinstance(obj, np.generic):
        return serialize(obj.item())
    if callable(obj):
        return repr(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, float):
        return serialize_float(obj)
    if isinstance(obj, complex):
        return {"re": serialize_float(obj.real), "im": serialize_float(obj.imag)}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if is_primitive(obj):
        return obj
    if isinstance(obj, datetime) or isinstance(obj, date):
        return obj.isoformat()
    if isinstance(obj, timedelta):
        return obj.total_seconds()
    if isinstance(obj, (UUID, Path)):
        return str(obj)
    if isinstance(obj, bytes):
        return str(obj.decode(decoder))
    if isinstance(obj, Mapping):
        return {k: serialize(v) for k, v in obj.items()}
    if isinstance(obj, Iterable):
        return [serialize(v) for v in obj]

    return repr(obj)  # wildcard if its not a known type


def format_float(x: float) -> str:
    """17 significant digits, enough to round-trip every double"""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"
