"""Deterministic JSON/CSV encoding of results.

Exact rationals become strings ``"p/q"`` so no float ever touches them;
exact complex values become ``{"re": "p/q", "im": "p/q"}``.  Floats use
Python's shortest round-trip repr, which reproduces the double bit for bit.
"""
from __future__ import annotations

import io
import json
import math
from fractions import Fraction

import numpy as np

from .algebra import CouplingPoly, EpsSeries, ExactScalar

__all__ = ["to_jsonable", "dumps", "trajectory_csv", "CSV_HEADER"]

CSV_HEADER = "t,g1_re,g1_im,g2_re,g2_im,g3_re,g3_im"


def _float(x: float):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return repr(x)  # JSON has no literal for these
    return x + 0.0  # folds -0.0 into 0.0


def _complex(z: complex):
    z = complex(z)
    return {"re": _float(z.real), "im": _float(z.imag)}


def to_jsonable(obj):
    if isinstance(obj, ExactScalar):
        if obj.is_real:
            return str(obj.re)
        return {"re": str(obj.re), "im": str(obj.im)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _complex(obj)
    if isinstance(obj, EpsSeries):
        return {"coeffs": [to_jsonable(c) for c in obj.coeffs], "order": obj.order, "kind": obj.kind}
    if isinstance(obj, CouplingPoly):
        return {
            "terms": [
                {"exponents": list(e), "coeff": to_jsonable(c)} for e, c in sorted(obj.terms.items())
            ],
            "text": str(obj),
        }
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def trajectory_csv(traj) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for t, g1, g2, g3 in traj.rows():
        vals = [t, g1.real, g1.imag, g2.real, g2.imag, g3.real, g3.imag]
        buf.write(",".join(repr(_float(v)) for v in vals) + "\n")
    return buf.getvalue()
