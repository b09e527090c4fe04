"""Canonical JSON: sorted keys, floats cut to 6 significant digits."""

import json
import math


def _normalize(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} in canonical JSON")
        value = float(f"{obj:.6g}")
        # keep integral floats compact and stable: 3.0 -> 3.0, -0.0 -> 0.0
        return value + 0.0
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return _normalize(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return json.dumps(_normalize(obj), sort_keys=True, indent=indent, ensure_ascii=False)
