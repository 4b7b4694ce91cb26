"""
p-adic size of the binomial remainders over Q.

With |x|_p = p^(-v_p(x)) and delta_p(omega) = 1 when p divides den(omega),

    |kappa_n R_n(beta)|_p <= (p^(2p delta_p/(p-1)) |den(beta)/beta|_p)^n

as soon as |beta|_p exceeds 1 (p not dividing den(omega)) or p^(p/(p-1))
(p dividing den(omega)). Bounds are handled as exact exponents of p.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from irrmeter.core.exceptions import HypothesisError
from irrmeter.core.logging import get_logger
from irrmeter.engine.exactmath import Regime, den, kappa_n, to_rational, valuation
from irrmeter.engine.pade import remainder_coeffs
from irrmeter.models.params import HypergeomParams

logger = get_logger(__name__)


@dataclass(frozen=True)
class PAdicBound:
    """The bound p^exponent."""

    p: int
    exponent: Fraction

    @property
    def value(self) -> Fraction:
        if self.exponent.denominator != 1:
            raise ValueError(f"{self.p}^({self.exponent}) is irrational")
        return Fraction(self.p) ** int(self.exponent)

    def __str__(self) -> str:
        return f"{self.p}^({self.exponent})"


@dataclass(frozen=True)
class PAdicCheck:
    """Observed log_p of |kappa_n R_n(beta)|_p (an upper bound) against the bound exponent."""

    n: int
    observed_exponent: int
    bound_exponent: Fraction
    terms: int

    @property
    def ok(self) -> bool:
        return self.observed_exponent <= self.bound_exponent


def _delta_p(omega: Fraction, p: int) -> int:
    return 1 if den(omega) % p == 0 else 0


def check_beta_condition(omega, beta, p: int) -> None:
    """Raise unless |beta|_p is large enough for the remainder series to converge fast enough."""
    omega, beta = to_rational(omega), to_rational(beta)
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    if omega.denominator == 1:
        raise HypothesisError("omega not an integer", f"omega={omega}")
    if beta == 0:
        raise HypothesisError("beta != 0")
    size = -valuation(beta, p)  # log_p |beta|_p
    if _delta_p(omega, p):
        threshold = Fraction(p, p - 1)
        if not size > threshold:
            raise HypothesisError(f"|beta|_{p} > {p}^({threshold})", f"|beta|_{p} = {p}^{size}")
    elif not size > 0:
        raise HypothesisError(f"|beta|_{p} > 1", f"|beta|_{p} = {p}^{size}")


def padic_remainder_bound(omega, beta, p: int, n: int) -> PAdicBound:
    """(p^(2p delta_p/(p-1)) |den(beta)/beta|_p)^n as an exact power of p."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    omega, beta = to_rational(omega), to_rational(beta)
    check_beta_condition(omega, beta, p)
    per_step = Fraction(2 * p * _delta_p(omega, p), p - 1) - valuation(den(beta), p) + valuation(beta, p)
    return PAdicBound(p, n * per_step)


def _tail_exponent(omega: Fraction, beta: Fraction, p: int, n: int, k: int) -> int:
    """Upper bound for -v_p of the k-th term of kappa_n R_n(beta)."""
    m = n + k
    return (
        _delta_p(omega, p) * (m + m // (p - 1))
        - n * valuation(den(beta), p)
        + (k + 1) * valuation(beta, p)
    )


def verify_padic_remainder(omega, beta, p: int, n: int, extra_terms: int = 40) -> PAdicCheck:
    """Bound |kappa_n R_n(beta)|_p from above and compare with :func:`padic_remainder_bound`.

    Terms k = n..n+extra_terms are summed exactly (strong triangle inequality
    on each term); beyond that, the term valuations are bounded through the
    integrality of nu_m(omega)(-omega)_m/m!, whose maximum over the tail is
    attained within p - 1 steps.
    """
    omega, beta = to_rational(omega), to_rational(beta)
    bound = padic_remainder_bound(omega, beta, p, n)
    params = HypergeomParams.binomial(omega)
    K = n + extra_terms
    kappa = kappa_n(params, beta, n, Regime.BINOMIAL).kappa_n
    tail = remainder_coeffs(n, params, K)
    observed = None
    for k in range(n, K + 1):
        lam = tail.coefficient(k + 1)
        if lam == 0:
            continue
        size = -valuation(kappa * lam / beta ** (k + 1), p)
        observed = size if observed is None else max(observed, size)
    tail_max = max(_tail_exponent(omega, beta, p, n, k) for k in range(K + 1, K + max(p - 1, 1) + 1))
    observed = tail_max if observed is None else max(observed, tail_max)
    check = PAdicCheck(n, observed, bound.exponent, K - n + 1)
    logger.debug("p-adic remainder checked", p=p, n=n, observed=observed, bound=str(bound.exponent))
    return check
