"""Dense univariate polynomials over an exact field.

Coefficients are stored lowest degree first.  The coefficient type only has to
support ``+ - * /`` and comparison with ``0``, so the same class serves for
``Fraction`` coefficients and for number-field elements.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Callable, Iterable, List, Sequence, Tuple

import sympy

from ..errors import InputError


def _strip(cs: List) -> List:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        self.coeffs = tuple(_strip(cs))

    # -- construction -----------------------------------------------------
    @classmethod
    def monomial(cls, deg: int, c=1) -> "UniPoly":
        return cls([0] * deg + [c])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # -- basic views ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"({c})" + ("" if i == 0 else "*y" if i == 1 else f"*y^{i}"))
        return "UniPoly(" + " + ".join(terms) + ")"

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return UniPoly([other]) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        result, base = UniPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return UniPoly(), self
        inv = 1 / other.lc if not isinstance(other.lc, int) else Fraction(1, other.lc)
        quo = [0] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = c * inv
            quo[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] = rem[i - dq + j] - c * b
        return UniPoly(quo), UniPoly(rem[:dq])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return UniPoly(c * inv for c in self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly(c * i for i, c in enumerate(self.coeffs) if i > 0)

    def map_coeffs(self, fn: Callable) -> "UniPoly":
        return UniPoly(fn(c) for c in self.coeffs)

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def taylor_shift(self, a) -> "UniPoly":
        """p(y + a)."""
        return self.compose(UniPoly([a, 1]))


# -- Euclidean algorithms ------------------------------------------------

def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def resultant(a: UniPoly, b: UniPoly):
    """Resultant of two polynomials over a field (Euclidean recursion)."""
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    res = Fraction(1)
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return Fraction(0)
        da, db, dr = a.degree, b.degree, r.degree
        if (da * db) % 2:
            res = -res
        res = res * b.lc ** (da - dr)
        a, b = b, r
    return res * b.lc ** a.degree


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree <= 0:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def is_squarefree(p: UniPoly) -> bool:
    if p.degree <= 0:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UniPoly:
    """Newton divided differences through the points (xs[i], ys[i])."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * UniPoly([-xs[i], 1]) + coef[i]
    return p


# -- rational-coefficient helpers ------------------------------------------

def integer_primitive(p: UniPoly) -> List[int]:
    """Integer coefficient list of the primitive part with positive leading coefficient."""
    if p.is_zero():
        return []
    den = reduce(lcm, (Fraction(c).denominator for c in p.coeffs), 1)
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    g = reduce(gcd, ints, 0)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


_Y = sympy.Symbol("y")


def to_sympy(p: UniPoly) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0],
                      _Y, domain=sympy.QQ)


def from_sympy(sp: sympy.Poly) -> UniPoly:
    return UniPoly(Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs()))


def factor_rational(p: UniPoly) -> List[Tuple[UniPoly, int]]:
    """Monic irreducible factors over Q with multiplicities (constant dropped)."""
    if p.is_zero():
        raise InputError("cannot factor the zero polynomial")
    if p.degree == 0:
        return []
    _, facs = to_sympy(p).factor_list()
    out = [(from_sympy(f).monic(), m) for f, m in facs]
    out.sort(key=lambda fm: (fm[0].degree, [str(c) for c in fm[0].coeffs]))
    return out


def is_irreducible_rational(p: UniPoly) -> bool:
    if p.degree < 1:
        return False
    facs = factor_rational(p)
    return len(facs) == 1 and facs[0][1] == 1
