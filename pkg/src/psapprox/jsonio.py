"""Strict JSON encodings for exact values.

Rationals are ``{"num": int, "den": int}`` with ``den > 0``; floats and booleans
are refused so that no decimal rounding can slip in.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import InputError


def rat_to_json(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}: expected an integer, got {v!r}")
    return v


def rat_from_json(obj: Any, where: str = "value") -> Fraction:
    if isinstance(obj, bool):
        raise InputError(f"{where}: expected a rational, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        num, den = obj
    elif isinstance(obj, dict):
        missing = {"num", "den"} - obj.keys()
        if missing:
            raise InputError(f"{where}: missing field(s) {sorted(missing)}")
        num, den = obj["num"], obj["den"]
    else:
        raise InputError(f"{where}: expected {{num, den}}, got {obj!r}")
    num, den = _int(num, f"{where}.num"), _int(den, f"{where}.den")
    if den == 0:
        raise InputError(f"{where}.den: denominator is zero")
    return Fraction(num, den)


def parse_rational_arg(text: str) -> Fraction:
    """``N/D`` or ``N`` (integers only) for command-line flags."""
    parts = text.strip().split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            den = int(parts[1])
            if den == 0:
                raise InputError(f"zero denominator in {text!r}")
            return Fraction(int(parts[0]), den)
    except ValueError:
        pass
    raise InputError(f"expected an exact rational N/D, got {text!r}")


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def field_to_json(K) -> Any:
    if K is None:
        return None
    return {
        "minpoly": [rat_to_json(c) for c in K.minpoly.coeffs],
        "interval": [rat_to_json(K.interval.lo), rat_to_json(K.interval.hi)],
    }


def field_from_json(obj: Any, where: str = "field"):
    from .exact.numberfield import NumberField
    from .exact.poly import UniPoly
    if obj is None:
        return None
    if not isinstance(obj, dict) or "minpoly" not in obj or "interval" not in obj:
        raise InputError(f"{where}: expected {{minpoly, interval}}")
    mp = UniPoly(rat_from_json(c, f"{where}.minpoly[{i}]") for i, c in enumerate(obj["minpoly"]))
    iv = obj["interval"]
    if not isinstance(iv, list) or len(iv) != 2:
        raise InputError(f"{where}.interval: expected two endpoints")
    return NumberField(mp, (rat_from_json(iv[0], f"{where}.interval[0]"),
                            rat_from_json(iv[1], f"{where}.interval[1]")))


def coeff_to_json(c) -> dict:
    """Rational as {num, den}; field element as {coords: [...]}."""
    from .exact.numberfield import NFElement
    if isinstance(c, NFElement):
        return {"coords": [rat_to_json(x) for x in c.coords]}
    return rat_to_json(c)


def coeff_from_json(obj: Any, field, where: str = "coeff"):
    from .exact.numberfield import NFElement
    if isinstance(obj, dict) and "coords" in obj:
        if field is None:
            raise InputError(f"{where}: coordinates given but no field declared")
        return NFElement(field, [rat_from_json(x, f"{where}.coords[{i}]")
                                 for i, x in enumerate(obj["coords"])])
    return rat_from_json(obj, where)
