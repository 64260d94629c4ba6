"""Closed-interval ("ball") enclosures with dyadic rational endpoints.

A :class:`Ball` stores its endpoints as exact :class:`fractions.Fraction`
values.  Arithmetic is carried out exactly and then rounded *outward* to the
working precision, so every result encloses the true value.  Transcendental
functions (``exp``, ``log``) go through mpmath's directed-rounding kernels with
a few extra ulps of slack on top.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from mpmath import libmp

Number = Union[int, Fraction]

#: Default working precision (bits) for balls that are not exact.
DEFAULT_BITS = 128
#: Default cap for adaptive precision loops.
DEFAULT_MAX_BITS = 1 << 20


def _floor_div(n: int, d: int, e: int) -> int:
    # floor(n / (d * 2**e))
    if e >= 0:
        return n // (d << e)
    return (n << -e) // d


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic with about ``bits`` significant bits that is <= x."""
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    e = abs(n).bit_length() - d.bit_length() - bits
    q = _floor_div(n, d, e)
    return Fraction(q << e) if e >= 0 else Fraction(q, 1 << -e)


def round_up(x: Fraction, bits: int) -> Fraction:
    return -round_down(-x, bits)


def _plain(x) -> Fraction:
    x = Fraction(x)
    if type(x.numerator) is not int or type(x.denominator) is not int:
        x = Fraction(int(x.numerator), int(x.denominator))
    return x


def _mpf_to_fraction(v) -> Fraction:
    p, q = libmp.to_rational(v)
    # mpmath may hand back gmpy2 integers; keep endpoints plain ints
    return Fraction(int(p), int(q))


def _pad(x: Fraction, bits: int, up: bool) -> Fraction:
    slack = abs(x) / (1 << max(bits - 4, 1))
    return x + slack if up else x - slack


class Ball:
    """The closed interval ``[lo, hi]``.

    ``prec`` is the working precision used to round results of operations
    involving this ball; ``None`` means the ball is exact and results stay
    exact as long as every operand is exact.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: Number, hi: Optional[Number] = None, prec: Optional[int] = None):
        lo = _plain(lo)
        hi = lo if hi is None else _plain(hi)
        if hi < lo:
            raise ValueError(f"empty ball [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- construction -----------------------------------------------------
    @classmethod
    def exact(cls, x: Number) -> "Ball":
        return cls(x, x, None)

    @classmethod
    def from_center(cls, center: Number, radius: Number, prec: Optional[int] = None) -> "Ball":
        center, radius = Fraction(center), Fraction(radius)
        if radius < 0:
            raise ValueError("negative radius")
        return cls(center - radius, center + radius, prec)

    @classmethod
    def coerce(cls, x) -> "Ball":
        if isinstance(x, Ball):
            return x
        return cls.exact(x)

    # -- views ------------------------------------------------------------
    @property
    def center(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Number) -> bool:
        if isinstance(x, Ball):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, other) -> bool:
        other = Ball.coerce(other)
        return not (self.hi < other.lo or other.hi < self.lo)

    def certainly_lt(self, other) -> bool:
        return self.hi < Ball.coerce(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= Ball.coerce(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > Ball.coerce(other).hi

    def compare(self, other) -> Optional[int]:
        """-1, 0 or 1 when the order is decided; ``None`` when balls overlap."""
        other = Ball.coerce(other)
        if self.hi < other.lo:
            return -1
        if self.lo > other.hi:
            return 1
        if self.is_exact and other.is_exact and self.lo == other.lo:
            return 0
        return None

    def sign(self) -> Optional[int]:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def rel_radius(self) -> Optional[Fraction]:
        """radius / min|x| over the ball, or None when the ball touches 0."""
        if self.contains_zero():
            return None if not (self.lo == self.hi == 0) else Fraction(0)
        m = min(abs(self.lo), abs(self.hi))
        return self.radius / m

    # -- rounding ---------------------------------------------------------
    def _result(self, lo: Fraction, hi: Fraction, other: Optional["Ball"] = None) -> "Ball":
        prec = self.prec
        if other is not None and other.prec is not None:
            prec = other.prec if prec is None else max(prec, other.prec)
        if prec is not None:
            lo, hi = round_down(lo, prec), round_up(hi, prec)
        return Ball(lo, hi, prec)

    def with_prec(self, prec: Optional[int]) -> "Ball":
        if prec is None:
            return Ball(self.lo, self.hi, None)
        return Ball(round_down(self.lo, prec), round_up(self.hi, prec), prec)

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "Ball":
        return Ball(-self.hi, -self.lo, self.prec)

    def __abs__(self) -> "Ball":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Ball(0, max(-self.lo, self.hi), self.prec)

    def __add__(self, other) -> "Ball":
        if not isinstance(other, (Ball, int, Fraction)):
            return NotImplemented
        other = Ball.coerce(other)
        return self._result(self.lo + other.lo, self.hi + other.hi, other)

    __radd__ = __add__

    def __sub__(self, other) -> "Ball":
        if not isinstance(other, (Ball, int, Fraction)):
            return NotImplemented
        other = Ball.coerce(other)
        return self._result(self.lo - other.hi, self.hi - other.lo, other)

    def __rsub__(self, other) -> "Ball":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return Ball.exact(other) - self

    def __mul__(self, other) -> "Ball":
        if not isinstance(other, (Ball, int, Fraction)):
            return NotImplemented
        other = Ball.coerce(other)
        if self.is_exact and other.is_exact:
            v = self.lo * other.lo
            return self._result(v, v, other)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return self._result(min(ps), max(ps), other)

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        if self.contains_zero():
            raise ZeroDivisionError("ball contains zero")
        return self._result(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Ball":
        if not isinstance(other, (Ball, int, Fraction)):
            return NotImplemented
        other = Ball.coerce(other)
        if other.is_exact:
            if other.lo == 0:
                raise ZeroDivisionError("division by zero ball")
            a, b = self.lo / other.lo, self.hi / other.lo
            return self._result(min(a, b), max(a, b), other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Ball":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return Ball.exact(other) / self

    def __pow__(self, n: int) -> "Ball":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self ** (-n)).inverse()
        if n == 0:
            return Ball.exact(1)
        if n % 2 == 0:
            a = abs(self)
            return a._result(a.lo ** n, a.hi ** n)
        return self._result(self.lo ** n, self.hi ** n)

    def union(self, other) -> "Ball":
        other = Ball.coerce(other)
        return Ball(min(self.lo, other.lo), max(self.hi, other.hi), self.prec or other.prec)

    def inflate(self, r: Number) -> "Ball":
        return Ball(self.lo - r, self.hi + r, self.prec)

    # -- transcendental ---------------------------------------------------
    def _bits(self, bits: Optional[int]) -> int:
        return bits or self.prec or DEFAULT_BITS

    def exp(self, bits: Optional[int] = None) -> "Ball":
        b = self._bits(bits)
        wp = b + 10
        lo = libmp.mpf_exp(libmp.from_rational(self.lo.numerator, self.lo.denominator, wp, "f"), wp, "f")
        hi = libmp.mpf_exp(libmp.from_rational(self.hi.numerator, self.hi.denominator, wp, "c"), wp, "c")
        lo_f = max(Fraction(0), _pad(_mpf_to_fraction(lo), wp, up=False))
        hi_f = _pad(_mpf_to_fraction(hi), wp, up=True)
        return Ball(round_down(lo_f, b), round_up(hi_f, b), b)

    def log(self, bits: Optional[int] = None) -> "Ball":
        if self.lo <= 0:
            raise ValueError("log of a ball that is not strictly positive")
        b = self._bits(bits)
        wp = b + 10
        lo = libmp.mpf_log(libmp.from_rational(self.lo.numerator, self.lo.denominator, wp, "f"), wp, "f")
        hi = libmp.mpf_log(libmp.from_rational(self.hi.numerator, self.hi.denominator, wp, "c"), wp, "c")
        lo_f = _mpf_to_fraction(lo)
        hi_f = _mpf_to_fraction(hi)
        # absolute slack: log values near 0 have tiny magnitude
        slack = Fraction(1, 1 << wp) + max(abs(lo_f), abs(hi_f)) / (1 << (wp - 4))
        return Ball(round_down(lo_f - slack, b), round_up(hi_f + slack, b), b)

    def root(self, k: int, bits: Optional[int] = None) -> "Ball":
        """Real non-negative k-th root of a non-negative ball."""
        if k < 1:
            raise ValueError("root order must be positive")
        if self.lo < 0:
            raise ValueError("root of a ball with negative part")
        if k == 1:
            return self
        b = self._bits(bits)
        if self.hi == 0:
            return Ball.exact(0)
        hi = (Ball(self.hi).log(b) / k).exp(b).hi
        lo = Fraction(0) if self.lo == 0 else (Ball(self.lo).log(b) / k).exp(b).lo
        return Ball(lo, hi, b)

    # -- misc -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Ball):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Ball({_short(self.center)} +/- {_short(self.radius)})"


def _short(x: Fraction) -> str:
    v = libmp.from_rational(x.numerator, x.denominator, 64, "n")
    return libmp.to_str(v, 12)


def exp_ball(x: Number, bits: int = DEFAULT_BITS) -> Ball:
    return Ball.exact(x).exp(bits)


def log_ball(x: Number, bits: int = DEFAULT_BITS) -> Ball:
    return Ball.exact(x).log(bits)


def decimal_str(x: Fraction, digits: int = 17, direction: str = "down") -> str:
    """Scientific-notation decimal string rounded toward -inf ("down") or +inf ("up")."""
    x = Fraction(x)
    if x == 0:
        return "0"
    neg = x < 0
    a = -x if neg else x
    # exponent such that 10**(digits-1) <= a * 10**-e10 < 10**digits
    e10 = len(str(a.numerator)) - len(str(a.denominator)) - digits + 1
    scaled = a / Fraction(10) ** e10
    while scaled >= 10 ** digits:
        e10 += 1
        scaled /= 10
    while scaled < 10 ** (digits - 1):
        e10 -= 1
        scaled *= 10
    # rounding magnitude down corresponds to "down" only for positive numbers
    want_up = (direction == "up") != neg
    m = scaled.numerator // scaled.denominator
    if want_up and m != scaled:
        m += 1
    s = str(m)
    mant = s[0] + ("." + s[1:].rstrip("0") if s[1:].rstrip("0") else "")
    exp10 = e10 + len(s) - 1
    return f"{'-' if neg else ''}{mant}e{exp10:+d}"
