"""
Dense exact polynomials, Laurent tails in 1/z, and the coefficient functional phi_f.

phi_f is the linear map on polynomials in t with
phi_f(t^k) = prod_{i=1..k}(alpha*i - delta) / (gamma+2)_k, so that
f(z) = sum_k phi_f(t^k) z^-(k+1) = phi_f(1/(z - t)).
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from irrmeter.core.logging import LoggerMixin
from irrmeter.engine.exactmath import pochhammer
from irrmeter.models.params import HypergeomParams

ZERO_DEGREE = -1


class Poly:
    """Dense polynomial with Fraction coefficients; ``coeffs[i]`` multiplies z^i.

    Trailing zeros are trimmed, so the zero polynomial has no coefficients
    and degree ``ZERO_DEGREE``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = other if isinstance(other, Fraction) else Fraction(other)
            return Poly(a * c for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Poly":
        c = scalar if isinstance(scalar, Fraction) else Fraction(scalar)
        if c == 0:
            raise ZeroDivisionError("polynomial division by zero scalar")
        return Poly(a / c for a in self.coeffs)

    def __divmod__(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.leading
        if len(remainder) - 1 < dd:
            return Poly(), Poly(remainder)
        quotient = [Fraction(0)] * (len(remainder) - dd)
        for i in range(len(remainder) - 1 - dd, -1, -1):
            q = remainder[i + dd] / lead
            quotient[i] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    remainder[i + j] -= q * c
        return Poly(quotient), Poly(remainder[:dd])

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any exact ring element."""
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def shift(self, k: int) -> "Poly":
        """Multiply by z^k."""
        return Poly([0] * k + list(self.coeffs)) if self.coeffs else Poly()


@dataclass(frozen=True)
class LaurentTail:
    """Truncated series sum_{j=1..L} c_j z^-j."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("Laurent tail order must be at least 1")
        if len(self.coeffs) != self.order:
            raise ValueError("coefficient count must equal the order")

    def coefficient(self, j: int) -> Fraction:
        """Coefficient of z^-j (zero beyond the truncation order is not implied)."""
        if not 1 <= j <= self.order:
            raise IndexError(f"z^-{j} is outside the tail of order {self.order}")
        return self.coeffs[j - 1]


class PhiFunctional(LoggerMixin):
    """phi_f for one parameter triple, with the coefficients phi_f(t^k) cached."""

    def __init__(self, params: HypergeomParams):
        self.params = params
        self._coeffs: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def coefficients(self, K: int) -> tuple[Fraction, ...]:
        """phi_f(t^k) for k = 0..K via c_{k+1} = c_k (alpha(k+1) - delta)/(gamma + k + 2)."""
        alpha, gamma, delta = self.params.alpha, self.params.gamma, self.params.delta
        with self._lock:
            while len(self._coeffs) <= K:
                k = len(self._coeffs) - 1
                self._coeffs.append(self._coeffs[-1] * (alpha * (k + 1) - delta) / (gamma + k + 2))
            return tuple(self._coeffs[: K + 1])

    def __call__(self, P: Poly) -> Fraction:
        if P.is_zero():
            return Fraction(0)
        cs = self.coefficients(P.degree)
        return sum((a * c for a, c in zip(P.coeffs, cs)), Fraction(0))


@lru_cache(maxsize=256)
def phi_functional(params: HypergeomParams) -> PhiFunctional:
    """Shared functional per parameter triple."""
    return PhiFunctional(params)


def phi_f(P: Poly, params: HypergeomParams) -> Fraction:
    """Apply phi_f to a polynomial in t."""
    return phi_functional(params)(P)


def f_coeffs(params: HypergeomParams, K: int) -> list[Fraction]:
    """Coefficients of z^-(k+1) in f, k = 0..K."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    return list(phi_functional(params).coefficients(K))


def _ideal_generator(params: HypergeomParams) -> Poly:
    return Poly([0, -params.alpha, 1])


def apply_E(P: Poly, params: HypergeomParams) -> Poly:
    """E(P) = P' + (gamma*t + delta) P / (t(t - alpha)) for P in the ideal (t(t - alpha))."""
    quotient, remainder = divmod(P, _ideal_generator(params))
    if not remainder.is_zero():
        raise ValueError("polynomial is not a multiple of t(t - alpha)")
    return P.derivative() + Poly([params.delta, params.gamma]) * quotient


def apply_E_power(P: Poly, params: HypergeomParams, n: int) -> Poly:
    """E applied n times; each intermediate must stay in the ideal."""
    for _ in range(n):
        P = apply_E(P, params)
    return P


def phi_closed_form(m: int, n: int, params: HypergeomParams) -> Fraction:
    """Closed form of phi_f(t^m (t - alpha)^n)."""
    alpha, gamma, delta = params.alpha, params.gamma, params.delta
    value = Fraction((-1) ** n)
    for i in range(1, m + 1):
        value *= alpha * i - delta
    for j in range(1, n + 1):
        value *= alpha * (gamma + j) + delta
    return value / pochhammer(gamma + 2, n + m)


def rd_oracle(n: int, params: HypergeomParams) -> Poly:
    """P_{n,0} = RD_n(1) computed from the factored first-order operators.

    With a = z(z - alpha) and b = gamma*z + delta, RD_1(g) = a g' + (a' + b) g and
    RD_n = (1/n!) RD_1 (RD_1 + a') ... (RD_1 + (n-1) a').
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = Poly([0, -params.alpha, 1])
    a_prime = a.derivative()
    b = Poly([params.delta, params.gamma])
    g = Poly([1])
    for j in range(n - 1, -1, -1):
        g = a * g.derivative() + (a_prime * (j + 1) + b) * g
    return g / math.factorial(n)


def divided_difference(P: Poly) -> list[Poly]:
    """(P(z) - P(t))/(z - t) as a list: entry l is the t-polynomial multiplying z^l."""
    d = P.degree
    return [Poly(P[k + 1] for k in range(l, d)) for l in range(d)]


def tail_coefficients(P: Poly, coeffs: Sequence[Fraction], upto: int) -> list[Fraction]:
    """Coefficients of z^-1..z^-upto in P(z) * sum_m coeffs[m] z^-(m+1)."""
    needed = P.degree + upto
    if len(coeffs) < needed:
        raise ValueError(f"need {needed} series coefficients, got {len(coeffs)}")
    return [sum((P[i] * coeffs[i + j - 1] for i in range(P.degree + 1)), Fraction(0)) for j in range(1, upto + 1)]
