"""Power sums n -> sum_i b_i c_i^n with rational roots.

Coefficients are rationals or elements of one real number field.  Terms are
kept in canonical form: equal roots merged, zero coefficients dropped, roots
strictly decreasing.  Two power sums are equal iff their term lists are.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .errors import InputError, PrecisionCapError
from .exact.ball import DEFAULT_MAX_BITS, Ball
from .exact.numberfield import NFElement, NumberField, coeff_ball, join_fields
from .jsonio import coeff_from_json, coeff_to_json, field_from_json, rat_from_json


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, NFElement) else c == 0


class PowerSum:
    __slots__ = ("terms", "field")

    def __init__(self, terms: Iterable[Tuple] = (), field: Optional[NumberField] = None):
        acc: Dict[Fraction, object] = {}
        for b, c in terms:
            c = Fraction(c)
            if isinstance(b, NFElement):
                if field is None and b.field.degree > 1 and not b.is_rational():
                    field = b.field
                if field is None or b.is_rational():
                    b = b.rational_value()
                elif b.field is not field:
                    if b.field != field:
                        raise InputError("power sum mixes coefficients from different number fields")
                    b = NFElement(field, b.coords)
            else:
                b = Fraction(b)
            acc[c] = acc[c] + b if c in acc else b
        items = [(b, c) for c, b in acc.items() if not _is_zero(b)]
        items.sort(key=lambda t: t[1], reverse=True)
        if field is not None and all(not isinstance(b, NFElement) or b.is_rational() for b, _ in items):
            items = [(b.rational_value() if isinstance(b, NFElement) else b, c) for b, c in items]
            field = None
        if field is not None:
            items = [(b if isinstance(b, NFElement) else field(b), c) for b, c in items]
        self.terms: Tuple[Tuple[object, Fraction], ...] = tuple(items)
        self.field = field

    # -- construction -----------------------------------------------------
    @classmethod
    def const(cls, b) -> "PowerSum":
        return cls([(b, 1)])

    @classmethod
    def term(cls, b, c) -> "PowerSum":
        return cls([(b, c)])

    # -- views ------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def roots(self) -> List[Fraction]:
        return [c for _, c in self.terms]

    @property
    def coeffs(self) -> list:
        return [b for b, _ in self.terms]

    def is_rational(self) -> bool:
        return self.field is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "PowerSum(0)"
        return "PowerSum(" + " + ".join(f"{b}*({c})^n" for b, c in self.terms) + ")"

    # -- evaluation -------------------------------------------------------
    def eval(self, n: int):
        """Exact value at a non-negative integer ``n``."""
        if n < 0:
            raise InputError("power sums are evaluated at non-negative n only")
        zero = self.field(0) if self.field is not None else Fraction(0)
        return sum((b * c ** n for b, c in self.terms), zero)

    __call__ = eval

    def ball(self, n: int, rel_bits: int = 64) -> Ball:
        total = Ball.exact(0)
        for b, c in self.terms:
            total = total + coeff_ball(b, rel_bits + 16) * (c ** n)
        return total

    # -- ring operations --------------------------------------------------
    def _unify(self, other: "PowerSum"):
        L, e1, e2 = join_fields(self.field, other.field)
        a = [(e1(b), c) for b, c in self.terms]
        b = [(e2(b), c) for b, c in other.terms]
        return L, a, b

    def __add__(self, other) -> "PowerSum":
        other = _as_ps(other)
        if other is None:
            return NotImplemented
        L, a, b = self._unify(other)
        return PowerSum(a + b, L)

    __radd__ = __add__

    def __neg__(self) -> "PowerSum":
        return PowerSum(((-b, c) for b, c in self.terms), self.field)

    def __sub__(self, other) -> "PowerSum":
        other = _as_ps(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PowerSum":
        return (-self) + other

    def __mul__(self, other) -> "PowerSum":
        other = _as_ps(other)
        if other is None:
            return NotImplemented
        L, a, b = self._unify(other)
        return PowerSum(((x * y, c * d) for x, c in a for y, d in b), L)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PowerSum":
        if k < 0:
            raise InputError("negative powers of power sums are not power sums")
        result, base = PowerSum.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, b) -> "PowerSum":
        return self * PowerSum.const(b)

    def map_coeffs(self, fn, field: Optional[NumberField] = None) -> "PowerSum":
        return PowerSum(((fn(b), c) for b, c in self.terms), field)

    # -- progressions -----------------------------------------------------
    def restrict(self, s: int, r: int) -> "PowerSum":
        """H with H(m) = G(s*m + r): roots c^s, coefficients b*c^r."""
        if not isinstance(s, int) or s < 1:
            raise InputError("progression step s must be a positive integer")
        if not isinstance(r, int) or not 0 <= r < s:
            raise InputError(f"residue r={r} out of range [0, {s})")
        return PowerSum(((b * c ** r, c ** s) for b, c in self.terms), self.field)

    def normalize_positive(self) -> Tuple["PowerSum", "PowerSum"]:
        """(even, odd) with even(m) = G(2m), odd(m) = G(2m+1); all roots positive."""
        if any(c == 0 for c in self.roots):
            raise InputError("degenerate root: power sum has a zero root")
        return self.restrict(2, 0), self.restrict(2, 1)

    def dominant_decompose(self) -> "DominantForm":
        if not self.terms:
            raise InputError("not in normalized form: zero power sum")
        if any(c <= 0 for c in self.roots):
            raise InputError("not in normalized form: roots must be positive")
        b1, c1 = self.terms[0]
        inv = 1 / b1
        sigma = PowerSum(((b * inv, c / c1) for b, c in self.terms[1:]), self.field)
        return DominantForm(b1, c1, sigma)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list:
        out = []
        for b, c in self.terms:
            item = coeff_to_json(b)
            item["root_num"], item["root_den"] = c.numerator, c.denominator
            out.append(item)
        return out

    @classmethod
    def from_json(cls, obj, field: Optional[NumberField] = None, where: str = "powersum") -> "PowerSum":
        if isinstance(obj, dict):
            field = field_from_json(obj.get("field"), f"{where}.field") if "field" in obj else field
            obj = obj.get("terms")
        if not isinstance(obj, list):
            raise InputError(f"{where}: expected a list of terms")
        terms = []
        for i, t in enumerate(obj):
            w = f"{where}[{i}]"
            if not isinstance(t, dict) or "root_num" not in t or "root_den" not in t:
                raise InputError(f"{w}: expected {{num, den, root_num, root_den}}")
            root = rat_from_json({"num": t["root_num"], "den": t["root_den"]}, f"{w}.root")
            coeff = coeff_from_json({k: v for k, v in t.items() if k in ("num", "den", "coords")}, field, w)
            terms.append((coeff, root))
        return cls(terms, field)


def _as_ps(x) -> Optional[PowerSum]:
    if isinstance(x, PowerSum):
        return x
    if isinstance(x, (int, Fraction, NFElement)):
        return PowerSum.const(x)
    return None


class DominantForm(NamedTuple):
    """G(n) = b1 * c1^n * (1 + sigma(n))."""
    b1: object
    c1: Fraction
    sigma: PowerSum


# -- denominators ----------------------------------------------------------------

def min_denominator_base(xi: PowerSum) -> int:
    """Least D >= 1 such that D^n xi(n) has integer roots."""
    return reduce(lcm, (c.denominator for c in xi.roots), 1)


def denominator_check(xi: PowerSum, eps, n_range: Iterable[int],
                      max_bits: int = DEFAULT_MAX_BITS) -> List[int]:
    """Indices n where the reduced denominator of xi(n) is below D^n e^{-n eps}."""
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    if not xi.is_rational():
        raise InputError("denominator check needs rational coefficients")
    D = min_denominator_base(xi)
    bad = []
    for n in n_range:
        den = Fraction(xi.eval(n)).denominator
        if _den_below(den, D, n, eps, max_bits):
            bad.append(n)
    return bad


def _den_below(den: int, D: int, n: int, eps: Fraction, max_bits: int) -> bool:
    if n == 0:
        return den < 1
    bits = 64
    while True:
        bound = Ball.exact(D ** n) * Ball.exact(-n * eps).exp(bits)
        if den < bound.lo:
            return True
        if den > bound.hi:
            return False
        if bits >= max_bits:
            raise PrecisionCapError(f"denominator comparison undecided at n={n}")
        bits = min(2 * bits, max_bits)
