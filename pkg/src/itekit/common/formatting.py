from __future__ import annotations

import math
import typing

import numpy as np


def fmt(value: typing.Any) -> str:
    """Number as text with 17 significant digits; empty for missing values."""

    if value is None:
        return ""
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0.0:
            return fmt(value.real)
        return f"{value.real:.17g}{value.imag:+.17g}j"
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return f"{value:.17g}"


def jsonable(value: typing.Any) -> typing.Any:
    """numpy and complex values turned into plain JSON types."""

    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return value.real if value.imag == 0.0 else {"re": value.real, "im": value.imag}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    return value
