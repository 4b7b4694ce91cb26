"""
Exact arithmetic in real quadratic fields Q(sqrt d).

A QuadraticNumber a + b*sqrt(d) is stored with d a squarefree integer
(d = 0 for rationals). Signs and comparisons are decided exactly from
a^2 versus b^2*d, so no floating point is involved.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from mpmath import iv
from sympy import factorint

from irrmeter.engine.exactmath import FactoredRadical, to_rational
from irrmeter.engine.intervals import Interval, to_interval

Number = Union[int, Fraction, "QuadraticNumber"]


@lru_cache(maxsize=1024)
def _split_square(n: int) -> tuple[int, int]:
    """Write n >= 1 as s^2 * m with m squarefree; returns (s, m)."""
    s, m = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True, eq=False)
class QuadraticNumber:
    """Exact real number a + b*sqrt(d).

    The radicand may be given as any nonnegative rational; it is normalized
    to a squarefree integer, and perfect squares collapse to rationals.
    """

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        a, b, d = to_rational(self.a), to_rational(self.b), to_rational(self.d)
        if d < 0:
            raise ValueError("radicand must be nonnegative")
        if b == 0 or d == 0:
            b, radicand = Fraction(0), 0
        else:
            # sqrt(p/q) = sqrt(p*q)/q
            b = b / d.denominator
            s, radicand = _split_square(d.numerator * d.denominator)
            b *= s
            if radicand == 1:
                a, b, radicand = a + b, Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", radicand)

    @classmethod
    def sqrt(cls, d) -> "QuadraticNumber":
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- field operations --------------------------------------------------

    @staticmethod
    def _lift(value: Number) -> "QuadraticNumber":
        return value if isinstance(value, QuadraticNumber) else QuadraticNumber(to_rational(value))

    def _field(self, other: "QuadraticNumber") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or other.d == self.d:
            return self.d
        raise ValueError(f"Q(sqrt {self.d}) and Q(sqrt {other.d}) differ")

    def __add__(self, other: Number) -> "QuadraticNumber":
        o = self._lift(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other: Number) -> "QuadraticNumber":
        return self + (-self._lift(other))

    def __rsub__(self, other: Number) -> "QuadraticNumber":
        return self._lift(other) - self

    def __mul__(self, other: Number) -> "QuadraticNumber":
        o = self._lift(other)
        d = self._field(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: Number) -> "QuadraticNumber":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other: Number) -> "QuadraticNumber":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "QuadraticNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QuadraticNumber(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: the larger of a^2 and b^2 d wins (never equal, d is not a square)
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __abs__(self) -> "QuadraticNumber":
        return -self if self.sign() < 0 else self

    def _cmp(self, other: Number) -> int:
        return (self - self._lift(other)).sign()

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticNumber):
            return self.a == other.a and self.b == other.b and self.d == other.d
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.d))

    # -- enclosures ----------------------------------------------------------

    def to_interval(self) -> Interval:
        """Enclosure at the current ``iv`` precision."""
        if self.b == 0:
            return to_interval(self.a)
        return to_interval(self.a) + to_interval(self.b) * iv.sqrt(iv.mpf(self.d))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self) -> str:
        return f"QuadraticNumber({self})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt({self.d})"


def compare_with_radical(x: QuadraticNumber, r: FactoredRadical, scale: Number = 1) -> int:
    """Exact sign of x*scale - r for a positive radical r.

    Both sides are raised to the least power L clearing the exponent
    denominators of r, which keeps the comparison inside Q(sqrt d).
    """
    lhs = QuadraticNumber._lift(x) * QuadraticNumber._lift(scale)
    if lhs.sign() <= 0:
        return -1
    L, target = r.power_clearing_denominators()
    return (lhs**L - target).sign()
