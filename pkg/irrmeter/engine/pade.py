"""
Weight-n Padé pairs of the hypergeometric family and their identities.

P_{n,0} has degree n, P_{n,1} degree at most n-1, and the remainder
R_n = P_{n,0} f - P_{n,1} = sum_{k>=n} lambda_{n,k} z^-(k+1).
Everything here is exact except :func:`remainder_value`, which returns a
certified interval.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import iv

from irrmeter.core.config import settings
from irrmeter.core.exceptions import ConsistencyError, HypothesisError, PrecisionError
from irrmeter.core.logging import get_logger
from irrmeter.engine.exactmath import DenominatorProfile, Regime, gbinom, kappa_n, pochhammer, to_rational
from irrmeter.engine.intervals import Interval, to_interval, working_precision
from irrmeter.engine.series import LaurentTail, Poly, divided_difference, phi_functional, rd_oracle, tail_coefficients
from irrmeter.models.params import HypergeomParams
from irrmeter.models.reports import WeightReport

logger = get_logger(__name__)


@dataclass(frozen=True)
class PadePair:
    """Padé pair of weight n."""

    n: int
    P0: Poly
    P1: Poly

    def evaluate(self, beta) -> tuple[Fraction, Fraction]:
        b = to_rational(beta)
        return self.P0(b), self.P1(b)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """A_n X_{n+1} - (z - B_n) X_n + C_n X_{n-1} = 0."""

    n: int
    A: Fraction
    B: Fraction
    C: Fraction


def _falling_products(params: HypergeomParams, n: int) -> list[Fraction]:
    """desc[m] = prod_{i=0..m-1} (alpha(n-i) - delta)."""
    desc = [Fraction(1)]
    for i in range(n):
        desc.append(desc[-1] * (params.alpha * (n - i) - params.delta))
    return desc


def pade_general(n: int, params: HypergeomParams) -> PadePair:
    """Explicit weight-n pair from the closed-form coefficient sums.

    Args:
        n: weight
        params: hypergeometric parameters

    Returns:
        PadePair with P0 of degree n
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return PadePair(0, Poly([1]), Poly())
    gamma = params.gamma
    desc = _falling_products(params, n)
    n_fact = math.factorial(n)
    # coefficient of z^(n-k): (-1)^k (n+gamma+1)_{n-k} C(n,k) desc[k] / n!
    p0 = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        term = pochhammer(n + gamma + 1, n - k) * math.comb(n, k) * desc[k] / n_fact
        p0[n - k] = -term if k % 2 else term
    phi = phi_functional(params).coefficients(n)
    # P1[l] = sum_{k=l..n-1} p0[k+1] phi(t^(k-l))
    p1 = [sum((p0[k + 1] * phi[k - l] for k in range(l, n)), Fraction(0)) for l in range(n)]
    return PadePair(n, Poly(p0), Poly(p1))


def pade_from_functional(n: int, params: HypergeomParams) -> PadePair:
    """Second construction: P0 from the differential operator, P1 = phi_f of its divided difference."""
    P0 = rd_oracle(n, params)
    phi = phi_functional(params)
    return PadePair(n, P0, Poly(phi(c) for c in divided_difference(P0)))


def pade_binomial(n: int, omega) -> PadePair:
    """Binomial specialization (alpha, gamma, delta) = (1, -1, 1 + omega)."""
    w = to_rational(omega)
    if w.denominator == 1:
        raise ValueError("omega must not be an integer")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return PadePair(0, Poly([1]), Poly())
    p0 = [(-1) ** (n - k) * math.comb(n + k - 1, k) * gbinom(n - w - 1, n - k) for k in range(n + 1)]
    p1 = [(-1) ** (n - 1 - k) * math.comb(n + k, k) * gbinom(n + w, n - 1 - k) for k in range(n)]
    return PadePair(n, Poly(p0), Poly(p1))


def lambda_leading(n: int, params: HypergeomParams) -> Fraction:
    """lambda_{n,n} = prod_{i<=n}(alpha i - delta) prod_{j<=n}(alpha(gamma+j) + delta) / (gamma+2)_{2n}."""
    alpha, gamma, delta = params.alpha, params.gamma, params.delta
    value = Fraction(1)
    for i in range(1, n + 1):
        value *= (alpha * i - delta) * (alpha * (gamma + i) + delta)
    return value / pochhammer(gamma + 2, 2 * n)


def _lambda_ratio(n: int, k: int, params: HypergeomParams) -> Fraction:
    """lambda_{n,k+1} / lambda_{n,k} for k >= n."""
    alpha, gamma, delta = params.alpha, params.gamma, params.delta
    return Fraction(k + 1) * (alpha * (k + 1) - delta) / ((k + 1 - n) * (gamma + n + k + 2))


def remainder_coeffs(n: int, params: HypergeomParams, K: int) -> LaurentTail:
    """Remainder coefficients lambda_{n,k} for k = 0..K as a tail of order K+1.

    The coefficient of z^-(k+1) is lambda_{n,k}, zero for k < n.
    """
    if K < n:
        raise ValueError("K must be at least n")
    coeffs = [Fraction(0)] * n
    lam = lambda_leading(n, params)
    coeffs.append(lam)
    for k in range(n, K):
        lam = lam * _lambda_ratio(n, k, params) if lam else lam
        coeffs.append(lam)
    return LaurentTail(K + 1, tuple(coeffs))


def _tail_start(n: int, params: HypergeomParams, beta: Fraction, r: Fraction) -> int:
    """Least m > n from which every ratio |t_m / t_{m-1}| of remainder terms is <= r.

    Uses (k+1)|alpha(k+1) - delta| <= m(|alpha| m + |delta|) and
    (k+1-n)(gamma+n+k+2) >= (m-n)(m+n) with m = k+1, gamma >= -1.
    """
    a, d, rb = abs(params.alpha), abs(params.delta), r * abs(beta)
    c = rb - a

    def q(m: int) -> Fraction:
        return c * m * m - d * m - rb * n * n

    lo = max(n + 1, math.ceil(d / (2 * c)))
    if q(lo) >= 0:
        return lo
    hi = 2 * lo
    while q(hi) < 0:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if q(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return hi


def remainder_value(n: int, params: HypergeomParams, beta, prec_bits: Optional[int] = None) -> Interval:
    """Certified enclosure of R_n(beta) = sum_{k>=n} lambda_{n,k} beta^-(k+1).

    The partial sum is accumulated exactly and extended until the geometric
    tail bound, valid once the term ratio is provably <= r = (1 + |alpha/beta|)/2,
    falls below 2^-prec of the sum. f(beta) is the case n = 0.

    Args:
        n: weight
        params: parameters with gamma >= -1
        beta: rational point with |beta| > |alpha|
        prec_bits: relative accuracy target in bits

    Returns:
        Interval enclosing R_n(beta)
    """
    beta = to_rational(beta)
    bits = prec_bits or settings.default_precision_bits
    if abs(beta) <= abs(params.alpha):
        raise HypothesisError("|beta| > |alpha|", f"beta={beta}, alpha={params.alpha}")
    if not params.is_arithmetic:
        raise HypothesisError("gamma >= -1", f"gamma={params.gamma}")
    lam = lambda_leading(n, params)
    if lam == 0:
        return iv.mpf(0)
    r = (1 + abs(params.alpha) / abs(beta)) / 2
    m0 = _tail_start(n, params, beta, r)
    scale = 2**bits
    cap = settings.series_max_terms

    term = lam / beta ** (n + 1)
    total = term
    tail: Optional[Fraction] = None
    k = n
    for _ in range(cap):
        if k + 1 >= m0:
            bound = abs(term) * r / (1 - r)
            if bound * scale <= abs(total):
                tail = bound
                break
        ratio = _lambda_ratio(n, k, params) / beta
        if ratio == 0:
            tail = Fraction(0)
            break
        term *= ratio
        total += term
        k += 1
    if tail is None:
        raise PrecisionError(f"R_{n}({beta}) not resolved to {bits} bits within {cap} terms")
    logger.debug("Remainder series summed", n=n, terms=k - n + 1, prec_bits=bits)

    with working_precision(bits + 32):
        enclosure = to_interval(total)
        if tail:
            t = to_interval(tail)
            enclosure = enclosure + iv.mpf([-t.b, t.b])
    return enclosure


def _det_closed_form(n: int, params: HypergeomParams) -> Fraction:
    alpha, gamma, delta = params.alpha, params.gamma, params.delta
    value = pochhammer(n + gamma + 2, n + 1) / math.factorial(n + 1)
    for i in range(1, n + 1):
        value *= (alpha * i - delta) * (alpha * (gamma + i) + delta)
    return value / pochhammer(gamma + 2, 2 * n)


def det_M2(n: int, params: HypergeomParams) -> Fraction:
    """Closed form of P_{n,0} P_{n+1,1} - P_{n+1,0} P_{n,1}, nonzero under nondegeneracy."""
    if not params.delta_not_in_alpha_n:
        raise HypothesisError("delta not in alpha*N", f"delta={params.delta}, alpha={params.alpha}")
    if not params.shifted_not_in_alpha_n:
        raise HypothesisError(
            "-(alpha*gamma + delta) not in alpha*N", f"alpha*gamma+delta={params.alpha * params.gamma + params.delta}"
        )
    return _det_closed_form(n, params)


def symbolic_det(n: int, params: HypergeomParams) -> Poly:
    """P_{n,0} P_{n+1,1} - P_{n+1,0} P_{n,1} as a polynomial in z."""
    p, q = pade_general(n, params), pade_general(n + 1, params)
    return p.P0 * q.P1 - q.P0 * p.P1


def verify_det_M2(n: int, params: HypergeomParams) -> bool:
    """The symbolic determinant is the constant given by the closed form."""
    det = symbolic_det(n, params)
    return det.degree <= 0 and det[0] == _det_closed_form(n, params)


def rec_coeffs(n: int, params: HypergeomParams) -> RecurrenceCoeffs:
    """Coefficients of the three-term recurrence at index n >= 1."""
    if n < 1:
        raise ValueError("recurrence coefficients start at n = 1")
    if not params.is_arithmetic:
        raise HypothesisError("gamma >= -1", f"gamma={params.gamma}")
    alpha, gamma, delta = params.alpha, params.gamma, params.delta
    denominators = (
        (2 * n + gamma + 1) * (2 * n + gamma + 2),
        (2 * n + gamma) * (2 * n + gamma + 2),
        (2 * n + gamma) * (2 * n + gamma + 1),
    )
    if any(d == 0 for d in denominators):
        raise ConsistencyError(f"vanishing recurrence denominator at n={n}")
    A = (n + gamma + 1) * (n + 1) / denominators[0]
    B = (2 * alpha * n * n + 2 * alpha * n * (1 + gamma) + gamma * (alpha - delta)) / denominators[1]
    C = (alpha * n - delta) * (alpha * (gamma + n) + delta) / denominators[2]
    return RecurrenceCoeffs(n, Fraction(A), Fraction(B), Fraction(C))


def verify_recurrence(n: int, params: HypergeomParams, order: Optional[int] = None) -> bool:
    """Check the recurrence on both Padé polynomials and on the remainder tails."""
    rc = rec_coeffs(n, params)
    prev, cur, nxt = (pade_general(m, params) for m in (n - 1, n, n + 1))
    z_minus_b = Poly([-rc.B, 1])
    for i in (0, 1):
        get = (lambda pair: pair.P0) if i == 0 else (lambda pair: pair.P1)
        combo = get(nxt) * rc.A - z_minus_b * get(cur) + get(prev) * rc.C
        if not combo.is_zero():
            logger.warning("Recurrence fails on polynomial", n=n, i=i)
            return False
    K = order or 2 * n + 4
    tails = {m: remainder_coeffs(m, params, K + 1) for m in (n - 1, n, n + 1)}
    for j in range(1, K + 1):
        # z*R_n contributes its z^-(j+1) coefficient at z^-j
        value = (
            rc.A * tails[n + 1].coefficient(j)
            - tails[n].coefficient(j + 1)
            + rc.B * tails[n].coefficient(j)
            + rc.C * tails[n - 1].coefficient(j)
        )
        if value != 0:
            logger.warning("Recurrence fails on remainder tail", n=n, order=j)
            return False
    return True


def verify_weight(n: int, params: HypergeomParams, pair: Optional[PadePair] = None) -> WeightReport:
    """Check orthogonality, polynomial part, vanishing tail and leading remainder coefficient.

    Args:
        n: weight
        params: hypergeometric parameters
        pair: pair to check; the explicit construction when omitted

    Returns:
        WeightReport naming the first failed check and index
    """
    pair = pair or pade_general(n, params)
    P0, P1 = pair.P0, pair.P1
    phi = phi_functional(params)

    for k in range(n):
        if phi(P0.shift(k)) != 0:
            return WeightReport(ok=False, check="orthogonality", index=k)

    f = phi.coefficients(max(P0.degree, 0) + n + 1)
    for e in range(max(P0.degree, P1.degree + 1)):
        poly_part = sum((P0[i] * f[i - e - 1] for i in range(e + 1, P0.degree + 1)), Fraction(0))
        if poly_part != P1[e]:
            return WeightReport(ok=False, check="polynomial_part", index=e + 1)

    tail = tail_coefficients(P0, f, n + 1)
    for j in range(1, n + 1):
        if tail[j - 1] != 0:
            return WeightReport(ok=False, check="tail", index=j)
    if tail[n] != lambda_leading(n, params):
        return WeightReport(ok=False, check="leading_remainder", index=n + 1)
    return WeightReport(ok=True)


def kappa_scaled_pair(
    n: int, params: HypergeomParams, beta, regime: Optional[Regime] = None
) -> tuple[int, int, DenominatorProfile]:
    """(kappa_n P_{n,0}(beta), kappa_n P_{n,1}(beta)) as integers, with the denominator profile."""
    profile = kappa_n(params, beta, n, regime)
    p0, p1 = pade_general(n, params).evaluate(beta)
    scaled = (profile.kappa_n * p0, profile.kappa_n * p1)
    for value in scaled:
        if value.denominator != 1:
            raise ConsistencyError(f"kappa_{n} P({beta}) = {value} is not an integer ({profile.regime.value})")
    return int(scaled[0]), int(scaled[1]), profile
