"""Strict JSON helpers: exact integers only, canonical byte-stable dumps."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ScenarioError

SCHEMA_VERSION = 1


def require_int(value, what: str) -> int:
    """Accept exact integers only; floats and booleans are rejected."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{what} must be an exact integer, got {value!r}")
    return value


def fraction_to_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def fraction_from_json(data, what: str = "rational") -> Fraction:
    if not isinstance(data, dict) or set(data) != {"num", "den"}:
        raise ScenarioError(f"{what} must be a {{num, den}} pair")
    return Fraction(require_int(data["num"], what), require_int(data["den"], what))


def canonical_dumps(obj) -> str:
    """Deterministic rendering used for every artifact written to disk."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
