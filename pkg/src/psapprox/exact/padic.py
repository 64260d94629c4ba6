"""Valuations and absolute values on Q.

Places are written as ``None`` (the archimedean place) or a prime ``p``.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf
from typing import Iterable, Optional, Set, Union

import sympy

from ..errors import InputError

Place = Optional[int]


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not sympy.isprime(p):
        raise InputError(f"{p!r} is not a prime")


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_val(x, p: int) -> Union[int, float]:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    _check_prime(p)
    x = Fraction(x)
    if x == 0:
        return inf
    return _int_val(abs(x.numerator), p) - _int_val(x.denominator, p)


def abs_at(x, place: Place) -> Fraction:
    """Normalized absolute value |x|_place: the usual one at infinity, p^-v at p."""
    x = Fraction(x)
    if place is None:
        return abs(x)
    v = padic_val(x, place)
    if v == inf:
        return Fraction(0)
    return Fraction(1, place ** v) if v >= 0 else Fraction(place ** -v)


def support(x) -> Set[int]:
    """Primes dividing the numerator or denominator of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise InputError("zero has no prime support")
    n = abs(x.numerator) * x.denominator
    return set(sympy.primefactors(n))


def is_s_unit(x, primes: Iterable[int]) -> bool:
    x = Fraction(x)
    return x != 0 and support(x) <= set(primes)


def product_formula(x, primes: Iterable[int] = ()) -> Fraction:
    """Product of |x|_v over infinity and the given primes plus the support of x."""
    places: list = [None] + sorted(set(primes) | support(x))
    out = Fraction(1)
    for v in places:
        out *= abs_at(x, v)
    return out
