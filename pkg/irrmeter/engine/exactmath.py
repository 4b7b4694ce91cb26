"""
Exact rational arithmetic and denominator machinery.

Rationals are ``fractions.Fraction`` values throughout. This module holds
den(), the radical factors nu/nu_n, Pochhammer symbols and generalized
binomials, and the denominators D_n, d_n, G_n and kappa_n used to make
Padé values integral.
"""

from __future__ import annotations

import math
import re
import threading
from collections import OrderedDict
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Mapping, Union

from mpmath import iv
from sympy import factorint

from irrmeter.core.exceptions import ConsistencyError
from irrmeter.engine.intervals import Interval, to_interval

if TYPE_CHECKING:
    from irrmeter.models.params import HypergeomParams

RationalLike = Union[int, Fraction, str, Decimal]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|(\S))")


class _ExpressionParser:
    """Recursive-descent parser for exact rational expressions.

    Grammar (unary minus binds looser than ``^``, so ``-8^3`` is -512)::

        expr   := term (('+' | '-') term)*
        term   := unary (('*' | '/') unary)*
        unary  := ('+' | '-') unary | power
        power  := atom ('^' unary)?
        atom   := number | '(' expr ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[str]:
        tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN.match(stripped, pos)
            if match is None:
                raise ValueError(f"cannot parse rational expression {text!r}")
            number, symbol = match.groups()
            token = number if number is not None else symbol
            if number is None and symbol not in "+-*/^()":
                raise ValueError(f"unexpected character {symbol!r} in {text!r}")
            tokens.append(token)
            pos = match.end()
        return tokens

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> str:
        token = self._peek()
        if token is None:
            raise ValueError(f"unexpected end of expression {self.text!r}")
        self.pos += 1
        return token

    def parse(self) -> Fraction:
        if not self.tokens:
            raise ValueError("empty rational expression")
        value = self._expr()
        if self._peek() is not None:
            raise ValueError(f"trailing input {self._peek()!r} in {self.text!r}")
        return value

    def _expr(self) -> Fraction:
        value = self._term()
        while self._peek() in ("+", "-"):
            if self._take() == "+":
                value += self._term()
            else:
                value -= self._term()
        return value

    def _term(self) -> Fraction:
        value = self._unary()
        while self._peek() in ("*", "/"):
            op = self._take()
            rhs = self._unary()
            if op == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise ValueError(f"division by zero in {self.text!r}")
                value /= rhs
        return value

    def _unary(self) -> Fraction:
        if self._peek() == "-":
            self._take()
            return -self._unary()
        if self._peek() == "+":
            self._take()
            return self._unary()
        return self._power()

    def _power(self) -> Fraction:
        base = self._atom()
        if self._peek() == "^":
            self._take()
            exponent = self._unary()
            if exponent.denominator != 1:
                raise ValueError(f"non-integer exponent in {self.text!r}")
            if base == 0 and exponent < 0:
                raise ValueError(f"zero to a negative power in {self.text!r}")
            return base ** int(exponent)
        return base

    def _atom(self) -> Fraction:
        token = self._take()
        if token == "(":
            value = self._expr()
            if self._take() != ")":
                raise ValueError(f"unbalanced parentheses in {self.text!r}")
            return value
        if token[0].isdigit() or token[0] == ".":
            return Fraction(token)
        raise ValueError(f"unexpected token {token!r} in {self.text!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, decimals, or expressions such as ``467^3/5`` exactly."""
    return _ExpressionParser(text).parse()


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an exact input to a Fraction; binary floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


# ---------------------------------------------------------------------------
# Denominators, primes, valuations
# ---------------------------------------------------------------------------


def den(value: RationalLike) -> int:
    """Denominator of a single rational."""
    return to_rational(value).denominator


def den_set(values: Iterable[RationalLike]) -> int:
    """Least m >= 1 such that m*v is an integer for every v (1 for the empty set)."""
    return math.lcm(1, *(to_rational(v).denominator for v in values))


@lru_cache(maxsize=4096)
def prime_factors(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of m >= 1 as sorted (prime, multiplicity) pairs."""
    if m < 1:
        raise ValueError("prime_factors requires m >= 1")
    return tuple(sorted(factorint(m).items()))


def totient(m: int) -> int:
    """Euler's totient, computed from the prime factorization."""
    if m < 1:
        raise ValueError("totient requires m >= 1")
    result = m
    for p, _ in prime_factors(m):
        result = result // p * (p - 1)
    return result


def progression_lcm_rate(d: int) -> Fraction:
    """Limit of log lcm(a, a + d, ..., a + (n-1)d) / n for a coprime to d.

    Equals (d / phi(d)) * (sum of 1/k over 1 <= k <= d coprime to d). Both D_n(gamma)
    and d_n(x) divide such an lcm, so this bounds their exponential growth; it agrees
    with d / phi(d) only for d <= 2.
    """
    if d < 1:
        raise ValueError("progression_lcm_rate requires d >= 1")
    units = sum((Fraction(1, k) for k in range(1, d + 1) if math.gcd(k, d) == 1), Fraction(0))
    return Fraction(d, totient(d)) * units


def valuation(value: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = to_rational(value)
    if q == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    num, dnm = abs(q.numerator), q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while dnm % p == 0:
        dnm //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# Radicals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactoredRadical:
    """Exact positive real ``coefficient * prod(p ** e)`` with rational exponents.

    Every prime is >= 2 and every exponent is > 0; an empty factor tuple with
    coefficient 1 is the value 1.
    """

    factors: tuple[tuple[int, Fraction], ...] = ()
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("radical primes must be distinct and sorted")
        for p, e in self.factors:
            if p < 2 or prime_factors(p) != ((p, 1),):
                raise ValueError(f"{p} is not a prime")
            if e <= 0:
                raise ValueError("radical exponents must be positive")
        if self.coefficient <= 0:
            raise ValueError("radical coefficient must be positive")

    @classmethod
    def from_map(cls, exponents: Mapping[int, Fraction], coefficient: RationalLike = 1) -> "FactoredRadical":
        return cls(
            tuple(sorted((p, Fraction(e)) for p, e in exponents.items() if e != 0)),
            to_rational(coefficient),
        )

    @property
    def exponents(self) -> dict[int, Fraction]:
        return dict(self.factors)

    def __mul__(self, other) -> "FactoredRadical":
        if isinstance(other, FactoredRadical):
            merged = self.exponents
            for p, e in other.factors:
                merged[p] = merged.get(p, Fraction(0)) + e
            return FactoredRadical.from_map(merged, self.coefficient * other.coefficient)
        return FactoredRadical(self.factors, self.coefficient * to_rational(other))

    __rmul__ = __mul__

    @property
    def is_rational(self) -> bool:
        return all(e.denominator == 1 for _, e in self.factors)

    def exponent_lcm(self) -> int:
        """Least L making every exponent times L an integer."""
        return math.lcm(1, *(e.denominator for _, e in self.factors))

    def power(self, L: int) -> Fraction:
        """Exact value of ``self ** L``; L must clear every exponent denominator."""
        if L % self.exponent_lcm():
            raise ValueError(f"{L} does not clear the exponent denominators")
        value = self.coefficient**L
        for p, e in self.factors:
            value *= Fraction(p) ** int(e * L)
        return value

    def power_clearing_denominators(self) -> tuple[int, Fraction]:
        """(L, value ** L) with L the least power making the value rational."""
        L = self.exponent_lcm()
        return L, self.power(L)

    def log_interval(self) -> Interval:
        """Enclosure of the natural logarithm at the current ``iv`` precision."""
        total = iv.ln(to_interval(self.coefficient))
        for p, e in self.factors:
            total += to_interval(e) * iv.ln(iv.mpf(p))
        return total

    def to_interval(self) -> Interval:
        """Enclosure of the value at the current ``iv`` precision."""
        return iv.exp(self.log_interval()) if self.factors else to_interval(self.coefficient)

    @property
    def float_hull(self) -> Interval:
        return self.to_interval()

    def describe(self) -> str:
        parts = [] if self.coefficient == 1 and self.factors else [str(self.coefficient)]
        parts += [f"{p}^({e})" if e.denominator != 1 else f"{p}^{e}" for p, e in self.factors]
        return " * ".join(parts)


def nu(y: RationalLike) -> FactoredRadical:
    """nu(y) = prod over primes q | den(y) of q^(q/(q-1))."""
    return FactoredRadical.from_map({q: Fraction(q, q - 1) for q, _ in prime_factors(den(y))})


def nu_n(y: RationalLike, n: int) -> int:
    """nu_n(y) = prod over primes q | den(y) of q^(n + floor(n/(q-1)))."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = 1
    for q, _ in prime_factors(den(y)):
        result *= q ** (n + n // (q - 1))
    return result


# ---------------------------------------------------------------------------
# Pochhammer symbols and binomials
# ---------------------------------------------------------------------------


class _RisingFactorialCache:
    """Prefix products (a)_0, (a)_1, ... per base a, grown on demand.

    Bases are evicted least-recently-used; access is serialized.
    """

    def __init__(self, max_bases: int = 512):
        self.max_bases = max_bases
        self._lock = threading.Lock()
        self._prefixes: OrderedDict[Fraction, list[Fraction]] = OrderedDict()

    def get(self, a: Fraction, k: int) -> Fraction:
        with self._lock:
            prefix = self._prefixes.get(a)
            if prefix is None:
                prefix = [Fraction(1)]
                self._prefixes[a] = prefix
                if len(self._prefixes) > self.max_bases:
                    self._prefixes.popitem(last=False)
            else:
                self._prefixes.move_to_end(a)
            while len(prefix) <= k:
                prefix.append(prefix[-1] * (a + len(prefix) - 1))
            return prefix[k]


_rising = _RisingFactorialCache()


def pochhammer(a: RationalLike, k: int) -> Fraction:
    """Rising factorial (a)_k = a(a+1)...(a+k-1), with (a)_0 = 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _rising.get(to_rational(a), k)


def gbinom(a: RationalLike, k: int) -> Fraction:
    """Generalized binomial a(a-1)...(a-k+1)/k! for rational a."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    # C(a, k) = (-1)^k (-a)_k / k!, which keeps the cached base fixed in k.
    value = pochhammer(-to_rational(a), k) / math.factorial(k)
    return -value if k % 2 else value


# ---------------------------------------------------------------------------
# Denominators of Padé coefficients
# ---------------------------------------------------------------------------


def Dn(gamma: RationalLike, n: int) -> int:
    """D_n(gamma) = den(k!/(gamma+2)_k for 0 <= k <= n-1)."""
    g = to_rational(gamma)
    if g < -1:
        raise ValueError("D_n requires gamma >= -1")
    result = 1
    quotient = Fraction(1)
    for k in range(1, n):
        quotient = quotient * k / (g + 1 + k)
        result = math.lcm(result, quotient.denominator)
    return result


def dn(x: RationalLike, n: int) -> int:
    """d_n(x) = den(1/(k+x) for 1 <= k <= n), for 0 <= x < 1."""
    x = to_rational(x)
    if not 0 <= x < 1:
        raise ValueError("d_n requires 0 <= x < 1")
    return math.lcm(1, *((1 / (k + x)).denominator for k in range(1, n + 1)))


@lru_cache(maxsize=2048)
def _gn_cached(omega: Fraction, n: int) -> int:
    scale = nu_n(omega, n)
    values = [
        scale * math.comb(n + k - 1, k) * gbinom(n - omega - 1, n - k) for k in range(n + 1)
    ] + [scale * math.comb(n + k, k) * gbinom(n + omega, n - 1 - k) for k in range(n)]
    for value in values:
        if value.denominator != 1:
            raise ConsistencyError(f"G_n family member {value} is not an integer (omega={omega}, n={n})")
    return math.gcd(*(int(v) for v in values))


def Gn(omega: RationalLike, n: int) -> int:
    """gcd of the two integer binomial families attached to the binomial Padé pair."""
    w = to_rational(omega)
    if w.denominator == 1:
        raise ValueError("G_n requires a non-integer omega")
    if n < 1:
        raise ValueError("G_n requires n >= 1")
    return _gn_cached(w, n)


class Regime(str, Enum):
    """Denominator regimes for kappa_n."""

    GENERAL = "general"
    SHIFTED_LOG = "shifted_log"
    BINOMIAL = "binomial"
    ALPHA_ZERO = "alpha_zero"


@dataclass(frozen=True)
class DenominatorProfile:
    """Factors of kappa_n at index n.

    ``kappa_n`` is an integer in the general, shifted_log and alpha_zero
    regimes; in the binomial regime it is nu_n(omega)*den(beta)^n/G_n(omega),
    a positive rational whose products with the Padé values are integers.
    """

    n: int
    nu_n: int
    Dn: int
    dn: int
    Gn: int
    kappa_n: Fraction
    regime: Regime


def detect_regime(params: "HypergeomParams") -> Regime:
    """Pick the denominator regime matching the parameters."""
    if params.alpha == 0:
        return Regime.ALPHA_ZERO
    if params.alpha == 1 and params.gamma == -1 and (params.delta - 1).denominator != 1:
        return Regime.BINOMIAL
    if params.alpha == 1 and params.delta == -params.gamma and 0 <= params.gamma < 1:
        return Regime.SHIFTED_LOG
    return Regime.GENERAL


def kappa_n(
    params: "HypergeomParams", beta: RationalLike, n: int, regime: Regime | str | None = None
) -> DenominatorProfile:
    """Denominator kappa_n clearing kappa_n*P_{n,0}(beta) and kappa_n*P_{n,1}(beta).

    Args:
        params: hypergeometric parameters (alpha, gamma, delta)
        beta: evaluation point
        n: index
        regime: regime to use; detected from ``params`` when omitted

    Returns:
        DenominatorProfile with the regime's factors and kappa_n
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    regime = detect_regime(params) if regime is None else Regime(regime)
    alpha, gamma, delta = params.alpha, params.gamma, params.delta
    if gamma < -1:
        raise ValueError("kappa_n requires gamma >= -1")
    den_beta_n = den(beta) ** n

    if regime is Regime.GENERAL:
        if alpha == 0:
            raise ValueError("general regime requires alpha != 0")
        nu = nu_n(gamma, n) * nu_n(delta / alpha, n)
        d = Dn(gamma, n)
        kappa = nu * d * den(alpha) ** n * den_beta_n
        return DenominatorProfile(n, nu, d, 1, 1, Fraction(kappa), regime)

    if regime is Regime.SHIFTED_LOG:
        x = gamma
        if not (alpha == 1 and delta == -x and 0 <= x < 1):
            raise ValueError("shifted_log regime requires (alpha, gamma, delta) = (1, x, -x) with 0 <= x < 1")
        nu = nu_n(x, n)
        d = dn(x, n)
        kappa = den(x) * nu * d * den_beta_n
        return DenominatorProfile(n, nu, 1, d, 1, Fraction(kappa), regime)

    if regime is Regime.BINOMIAL:
        omega = delta - 1
        if not (alpha == 1 and gamma == -1 and omega.denominator != 1):
            raise ValueError(
                "binomial regime requires (alpha, gamma, delta) = (1, -1, 1 + omega), omega not an integer"
            )
        nu = nu_n(omega, n)
        g = Gn(omega, n) if n >= 1 else 1
        return DenominatorProfile(n, nu, 1, 1, g, Fraction(nu * den_beta_n, g), regime)

    if alpha != 0:
        raise ValueError("alpha_zero regime requires alpha = 0")
    nu = nu_n(gamma, n)
    d = Dn(gamma, n)
    kappa = nu * d * den(delta) ** n * den_beta_n * math.factorial(n)
    return DenominatorProfile(n, nu, d, 1, 1, Fraction(kappa), regime)
