"""Exact scalars: rationals backed by ``gmpy2.mpq`` and quadratic surds.

Every coordinate in the package is a :data:`Rat`.  Surds ``a + b*sqrt(d)``
only show up when the renormalization map is evaluated at its fixed points.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import gmpy2
from gmpy2 import mpq, mpz

Rat = type(mpq(0))

RatLike = Union[int, str, "Rat"]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat(value, den=None) -> Rat:
    """Coerce ``value`` (int, mpq, Fraction, or a ``"p/q"`` string) to a Rat."""
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return mpq(value, den)
    if isinstance(value, Rat):
        return value
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact input")
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    return mpq(value)


def parse_rat(text: str) -> Rat:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return mpq(num, den)


def format_rat(q) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


def rat_floor(q) -> int:
    """Greatest integer <= q."""
    q = rat(q)
    return int(q.numerator // q.denominator)


def frac(q) -> Rat:
    q = rat(q)
    return q - rat_floor(q)


def to_float(q) -> float:
    return float(q)


def _squarefree_part(n: int) -> tuple[int, int]:
    """Return (k, d) with n = k*k*d and d square-free."""
    k, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            k *= p
        if m % p == 0:
            m //= p
            d *= p
        p += 1
    return k, d * m


@dataclass(frozen=True)
class Surd:
    """The real number ``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d >= 2``."""

    a: Rat
    b: Rat
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "b", rat(self.b))
        if self.d < 2:
            raise ValueError("radicand must be >= 2")
        k, core = _squarefree_part(int(self.d))
        if k != 1:
            raise ValueError(f"radicand {self.d} is not square-free")

    @classmethod
    def sqrt(cls, n: int) -> "Surd":
        """sqrt(n) for a positive non-square integer n, reduced to square-free form."""
        k, d = _squarefree_part(int(n))
        if d == 1:
            raise ValueError(f"{n} is a perfect square")
        return cls(mpq(0), mpq(k), d)

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.d != self.d:
                raise ValueError(f"mixed radicands sqrt({self.d}) and sqrt({other.d})")
            return other
        return Surd(rat(other), mpq(0), self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return Surd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return Surd(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.d)

    def norm(self) -> Rat:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        num = self * o.conjugate()
        return Surd(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, Surd) and other.d != self.d:
            return False
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def bounds(self, digits: int = 64) -> tuple[Rat, Rat]:
        """Rational lower/upper bounds, width about 10**-digits times |b|."""
        scale = mpz(10) ** digits
        r = gmpy2.isqrt(self.d * scale * scale)  # floor(sqrt(d) * scale)
        lo, hi = mpq(r, scale), mpq(r + 1, scale)
        if self.b >= 0:
            return self.a + self.b * lo, self.a + self.b * hi
        return self.a + self.b * hi, self.a + self.b * lo

    def __str__(self):
        return f"{format_rat(self.a)}+{format_rat(self.b)}*sqrt({self.d})"

    def __repr__(self):
        return f"Surd({self})"


_SURD_RE = re.compile(
    r"^\s*([+-]?\d+(?:/\d+)?)\s*([+-])\s*([+-]?\d+(?:/\d+)?)\s*\*\s*sqrt\((\d+)\)\s*$"
)


def parse_surd(text: str) -> Surd:
    m = _SURD_RE.match(text)
    if not m:
        raise ValueError(f"not a surd: {text!r}")
    b = parse_rat(m.group(3))
    if m.group(2) == "-":
        b = -b
    return Surd(parse_rat(m.group(1)), b, int(m.group(4)))


def surd_floor(x: Surd) -> int:
    """Greatest integer <= a + b*sqrt(d), decided by exact sign tests."""
    n = math.floor(float(x))
    # the float guess can be off by one near integers; fix it exactly
    while x < n:
        n -= 1
    while x >= n + 1:
        n += 1
    return n


def floor_of(x) -> int:
    if isinstance(x, Surd):
        return surd_floor(x)
    return rat_floor(x)
