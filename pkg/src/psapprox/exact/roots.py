"""Real root isolation (Sturm sequences) and certified refinement.

Isolating intervals are pairs ``(lo, hi)`` of Fractions.  ``lo == hi`` marks an
exact rational root; otherwise the root lies in the open interval and the
polynomial does not vanish at either endpoint.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import List, NamedTuple, Tuple

from ..errors import AmbiguityError, InputError
from .ball import Ball
from .poly import UniPoly, integer_primitive, poly_gcd, squarefree_part


class RootInterval(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo


# -- integer-coefficient kernels ---------------------------------------------

def _value(ints: Tuple[int, ...], x: Fraction) -> Fraction:
    n, d = x.numerator, x.denominator
    deg = len(ints) - 1
    acc = 0
    dp = 1
    # sum c_i n^i d^(deg-i), accumulated Horner-style
    for c in reversed(ints):
        acc = acc * n + c * dp
        dp *= d
    return Fraction(acc, d ** deg) if deg > 0 else Fraction(acc)


def _sign(ints: Tuple[int, ...], x: Fraction) -> int:
    n, d = x.numerator, x.denominator
    acc = 0
    dp = 1
    for c in reversed(ints):
        acc = acc * n + c * dp
        dp *= d
    return (acc > 0) - (acc < 0)


@lru_cache(maxsize=512)
def _sturm(ints: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    p = UniPoly(ints)
    seq = [p, p.derivative()]
    while True:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    # scale each member to integers while keeping its sign
    out = []
    for q in seq:
        qi = integer_primitive(q)
        if (q.lc > 0) != (qi[-1] > 0):
            qi = [-c for c in qi]
        out.append(tuple(qi))
    return tuple(out)


def _variations(seq, x: Fraction) -> int:
    v, last = 0, 0
    for q in seq:
        s = _sign(q, x)
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _count(seq, a: Fraction, b: Fraction) -> int:
    """Distinct roots in (a, b) for non-root endpoints a < b."""
    return _variations(seq, a) - _variations(seq, b)


def _cauchy_pow2(ints) -> Fraction:
    lc = abs(ints[-1])
    m = max((Fraction(abs(c), lc) for c in ints[:-1]), default=Fraction(0))
    bound = 1 + m
    e = 0
    while Fraction(2) ** e <= bound:
        e += 1
    return Fraction(2) ** e


def _sqfree_ints(p: UniPoly) -> Tuple[int, ...]:
    return tuple(integer_primitive(squarefree_part(p)))


# -- isolation -----------------------------------------------------------------

def isolate_real_roots(p: UniPoly) -> List[RootInterval]:
    """Disjoint isolating intervals for the distinct real roots of ``p``, sorted.

    Rational roots are always returned as exact intervals ``(r, r)``.
    """
    if p.is_zero():
        raise InputError("undefined root set: zero polynomial")
    if p.degree <= 0:
        return []
    ints = _sqfree_ints(p)
    if len(ints) <= 1:
        return []
    seq = _sturm(ints)
    B = _cauchy_pow2(ints)
    found: List[RootInterval] = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = _count(seq, a, b)
        if n == 0:
            continue
        if n == 1 and b - a <= 1:
            # width <= 1 keeps single-root intervals between consecutive integers
            found.append(RootInterval(a, b))
            continue
        mid = (a + b) / 2
        if _sign(ints, mid) == 0:
            found.append(RootInterval(mid, mid))
            delta = (b - a) / 4
            while True:
                lo, hi = mid - delta, mid + delta
                if _sign(ints, lo) and _sign(ints, hi) and _count(seq, lo, hi) == 1:
                    break
                delta /= 2
            stack.append((a, mid - delta))
            stack.append((mid + delta, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    lc = ints[-1]
    out = []
    for iv in found:
        if not iv.is_exact:
            iv = _exactify(ints, iv, lc)
        out.append(iv)
    out.sort(key=lambda iv: iv.lo)
    return out


def _exactify(ints, iv: RootInterval, lc: int) -> RootInterval:
    # a rational root u/v of an integer polynomial has v | lc, so root*lc is an integer
    a, b = _shrink(ints, iv.lo, iv.hi, lambda a, b: (b - a) * lc < 1)
    if a == b:
        return RootInterval(a, b)
    k = -((-a.numerator * lc) // a.denominator)  # ceil(a*lc)
    c = Fraction(k, lc)
    if a < c < b and _sign(ints, c) == 0:
        return RootInterval(c, c)
    return RootInterval(iv.lo, iv.hi)


def _shrink(ints, a: Fraction, b: Fraction, done) -> Tuple[Fraction, Fraction]:
    """Quadratic interval refinement of a sign-changing bracket (a, b)."""
    sa = _sign(ints, a)
    if sa == 0 or _sign(ints, b) != -sa:
        raise AmbiguityError("ambiguous refinement: no sign change on the interval")
    N = 4
    while not done(a, b):
        w = b - a
        fa, fb = _value(ints, a), _value(ints, b)
        j = round(N * fa / (fa - fb))
        j = min(max(j, 1), N - 1)
        m = a + w * j / N
        s = _sign(ints, m)
        if s == 0:
            return m, m
        ok = False
        if s == sa:
            m2 = a + w * (j + 1) / N
            s2 = _sign(ints, m2) if j + 1 < N else -sa
            if s2 == 0:
                return m2, m2
            if s2 != sa:
                a, b = m, m2
                ok = True
        else:
            m0 = a + w * (j - 1) / N
            s0 = _sign(ints, m0) if j > 1 else sa
            if s0 == 0:
                return m0, m0
            if s0 == sa:
                a, b = m0, m
                ok = True
        if ok:
            N = min(N * N, 1 << 4096)
        else:
            N = max(4, isqrt(N))
            mid = (a + b) / 2
            sm = _sign(ints, mid)
            if sm == 0:
                return mid, mid
            if sm == sa:
                a = mid
            else:
                b = mid
    return a, b


# -- refinement ----------------------------------------------------------------

def _check_simple(p: UniPoly, iv: RootInterval) -> None:
    ints = tuple(integer_primitive(p))
    if _sign(ints, iv.lo) * _sign(ints, iv.hi) >= 0:
        raise AmbiguityError("ambiguous refinement: interval does not bracket a sign change")
    seq = _sturm(_sqfree_ints(p))
    if _count(seq, iv.lo, iv.hi) != 1:
        raise AmbiguityError("ambiguous refinement: interval holds more than one root")
    g = poly_gcd(p, p.derivative())
    if g.degree > 0:
        gi = _sqfree_ints(g)
        if len(gi) > 1 and (_count(_sturm(gi), iv.lo, iv.hi) > 0):
            raise AmbiguityError("ambiguous refinement: root is not simple")


def refine_root(p: UniPoly, iv, bits: int) -> Ball:
    """Ball containing the root of ``p`` isolated by ``iv`` with relative radius <= 2^-bits.

    More precisely ``radius <= 2**-bits * max(1, |center|)``.
    """
    iv = RootInterval(Fraction(iv[0]), Fraction(iv[1]))
    if iv.is_exact:
        if p(iv.lo) != 0:
            raise AmbiguityError("ambiguous refinement: degenerate interval is not a root")
        return Ball.exact(iv.lo)
    return _refine_cached(p.coeffs, iv, bits)


@lru_cache(maxsize=4096)
def _refine_cached(coeffs, iv: RootInterval, bits: int) -> Ball:
    p = UniPoly(coeffs)
    _check_simple(p, iv)
    ints = tuple(integer_primitive(p))
    scale = Fraction(1, 1 << bits)

    def done(a, b):
        c = abs(a + b) / 2
        return (b - a) / 2 <= scale * max(Fraction(1), c)

    a, b = _shrink(ints, iv.lo, iv.hi, done)
    if a == b:
        return Ball.exact(a)
    return Ball(a, b, bits)


def count_roots_in(p: UniPoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the closed interval [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if p.degree <= 0:
        return 0
    ints = _sqfree_ints(p)
    n = 0
    for iv in isolate_real_roots(p):
        a, b = iv
        if a == b:
            n += lo <= a <= hi
            continue
        # irrational root: lo and hi are not roots, so shrinking terminates
        while (a < lo < b) or (a < hi < b):
            a, b = _shrink(ints, a, b, lambda x, y, w=(b - a) / 2: y - x <= w)
        n += lo <= a and b <= hi
    return n


def rational_roots(p: UniPoly) -> List[Fraction]:
    return [iv.lo for iv in isolate_real_roots(p) if iv.is_exact]
