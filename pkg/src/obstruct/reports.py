"""Versioned JSON report envelope and number formatting.

Reports are deterministic: keys are sorted, floats carry 17 significant
digits as strings, rationals are numerator/denominator strings, and the
timestamp lives in a separate meta block excluded from comparisons.
"""

from __future__ import annotations

import datetime
import json
from fractions import Fraction

from .quadratic import QuadraticNumber

SCHEMA_VERSION = 1


def fmt_float(x) -> str:
    return f"{float(x):.17g}"


def fmt_number(x):
    """JSON-safe rendering: ints stay ints, rationals and floats become strings."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, QuadraticNumber):
        return {"exact": str(x), "float": fmt_float(x)}
    if isinstance(x, float):
        return fmt_float(x)
    return str(x)


def make_report(kind: str, payload: dict, config: dict | None = None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "meta": {
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "tool": "obstruct 0.1.0",
        },
        "config": config or {},
        "payload": payload,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(report: dict, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_report(report))


def reports_equal(a: dict, b: dict) -> bool:
    """Byte-level equality after dropping the meta block."""
    strip_a = {k: v for k, v in a.items() if k != "meta"}
    strip_b = {k: v for k, v in b.items() if k != "meta"}
    return dumps_report(strip_a) == dumps_report(strip_b)
