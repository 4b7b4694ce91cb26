"""
Effective Poincaré-Perron engine for linear recurrences.

A recurrence of order k is written

    g(n+1) + c_{k-1}(n) g(n) + ... + c_0(n) g(n+1-k) = 0,   n >= start,

with c_i(n) = a_i - eps_i(n) rational functions of n and characteristic
polynomial X^k + a_{k-1} X^{k-1} + ... + a_0. For order 2 the roots live in
a real quadratic field and every decision is exact.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np
from mpmath import iv, mp

from irrmeter.core.config import settings
from irrmeter.core.exceptions import (
    ConsistencyError,
    HypothesisError,
    IndeterminateComparisonError,
    ThresholdNotReachedError,
)
from irrmeter.core.logging import get_logger
from irrmeter.engine.exactmath import to_rational
from irrmeter.engine.intervals import Interval, endpoints, less_or_equal, to_interval, working_precision
from irrmeter.engine.pade import pade_general, rec_coeffs, remainder_value
from irrmeter.engine.quadratic import QuadraticNumber
from irrmeter.engine.series import Poly
from irrmeter.models.params import HypergeomParams

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# Characteristic roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharRoots:
    """Roots ordered by modulus: rho1 = |lambda1| < rho2 = |lambda2|."""

    lambda1: QuadraticNumber
    lambda2: QuadraticNumber
    rho1: QuadraticNumber
    rho2: QuadraticNumber

    @classmethod
    def from_monic(cls, a1, a0) -> "CharRoots":
        """Roots of X^2 + a1 X + a0 with distinct moduli."""
        a1, a0 = to_rational(a1), to_rational(a0)
        disc = a1 * a1 - 4 * a0
        if disc < 0:
            raise HypothesisError("real characteristic roots", f"discriminant {disc} < 0")
        if disc == 0:
            raise HypothesisError("distinct characteristic roots", "double root")
        plus = QuadraticNumber(-a1 / 2, Fraction(1, 2), disc)
        minus = QuadraticNumber(-a1 / 2, Fraction(-1, 2), disc)
        small, large = (minus, plus) if abs(minus) < abs(plus) else (plus, minus)
        if abs(small) == abs(large):
            raise HypothesisError("rho1 < rho2", "roots have equal modulus")
        return cls(small, large, abs(small), abs(large))


def char_roots(alpha, beta) -> CharRoots:
    """Roots (2*beta - alpha) +- 2*sqrt(beta^2 - alpha*beta) of X^2 - 2(2*beta - alpha)X + alpha^2."""
    alpha, beta = to_rational(alpha), to_rational(beta)
    if abs(beta) <= abs(alpha):
        raise HypothesisError("|beta| > |alpha|", f"beta={beta}, alpha={alpha}")
    return CharRoots.from_monic(-2 * (2 * beta - alpha), alpha * alpha)


# ---------------------------------------------------------------------------
# Recurrence specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """num(n)/den(n) with polynomial numerator and denominator in n."""

    num: Poly
    den: Poly = field(default_factory=lambda: Poly([1]))

    def __post_init__(self):
        if self.den.is_zero():
            raise ValueError("zero denominator polynomial")

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Poly([to_rational(c)]))

    def __call__(self, n: int) -> Fraction:
        d = Fraction(self.den(n))
        if d == 0:
            raise ConsistencyError(f"rational function denominator vanishes at n={n}")
        return Fraction(self.num(n)) / d

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    @property
    def vanishes_at_infinity(self) -> bool:
        return self.num.is_zero() or self.num.degree < self.den.degree


@dataclass(frozen=True)
class RecurrenceSpec:
    """Order-k recurrence with rational-function coefficients c_0..c_{k-1}."""

    order: int
    coeffs: tuple[RationalFunction, ...]
    char: tuple[Fraction, ...]
    start: int = 1

    def __post_init__(self):
        if self.order < 1 or len(self.coeffs) != self.order or len(self.char) != self.order:
            raise ValueError("order, coefficient count and characteristic constants must agree")

    def perturbation(self, i: int) -> RationalFunction:
        """eps_i(n) = a_i - c_i(n)."""
        return RationalFunction.constant(self.char[i]) - self.coeffs[i]

    def perturbations_vanish(self) -> bool:
        return all(self.perturbation(i).vanishes_at_infinity for i in range(self.order))

    def coefficient(self, i: int, n: int) -> Fraction:
        return self.coeffs[i](n)

    def char_poly(self) -> Poly:
        return Poly(list(self.char) + [1])

    def roots(self) -> CharRoots:
        if self.order != 2:
            raise ValueError("exact roots are available for order 2 only")
        return CharRoots.from_monic(self.char[1], self.char[0])

    @classmethod
    def constant(cls, char_coeffs: Sequence, start: int = 1) -> "RecurrenceSpec":
        """Constant coefficients c_i = a_i, i.e. characteristic polynomial X^k + sum a_i X^i."""
        char = tuple(to_rational(c) for c in char_coeffs)
        return cls(len(char), tuple(RationalFunction.constant(c) for c in char), char, start)

    @classmethod
    def from_pade(cls, params: HypergeomParams, beta) -> "RecurrenceSpec":
        """X_{n+1} + a_n X_n + b_n X_{n-1} = 0 with a_n = (B_n - beta)/A_n, b_n = C_n/A_n."""
        if not params.is_arithmetic:
            raise HypothesisError("gamma >= -1", f"gamma={params.gamma}")
        beta = to_rational(beta)
        alpha, gamma, delta = params.alpha, params.gamma, params.delta
        n = Poly([0, 1])
        A = RationalFunction((n + gamma + 1) * (n + 1), (n * 2 + gamma + 1) * (n * 2 + gamma + 2))
        B = RationalFunction(
            Poly([gamma * (alpha - delta), 2 * alpha * (1 + gamma), 2 * alpha]),
            (n * 2 + gamma) * (n * 2 + gamma + 2),
        )
        C = RationalFunction(
            (n * alpha - delta) * (n * alpha + alpha * gamma + delta), (n * 2 + gamma) * (n * 2 + gamma + 1)
        )
        a_n = (B - RationalFunction.constant(beta)) / A
        b_n = C / A
        spec = cls(2, (b_n, a_n), (alpha * alpha, -2 * (2 * beta - alpha)), start=1)
        if not spec.perturbations_vanish():
            raise ConsistencyError("recurrence perturbations do not vanish at infinity")
        return spec


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolutionTrace:
    """Values X_start..X_nmax of a solution; exact (Fraction/QuadraticNumber) or interval-valued."""

    values: tuple[Any, ...]
    start: int = 0
    exact: bool = True
    label: str = ""

    def __getitem__(self, n: int):
        if not self.start <= n <= self.nmax:
            raise IndexError(f"X_{n} is outside the trace")
        return self.values[n - self.start]

    @property
    def nmax(self) -> int:
        return self.start + len(self.values) - 1

    def is_zero_at(self, n: int) -> bool:
        x = self[n]
        if self.exact:
            return x == 0
        lo, hi = endpoints(x)
        return lo == hi == 0

    def has_consecutive_zeros(self) -> bool:
        return any(self.is_zero_at(n) and self.is_zero_at(n + 1) for n in range(self.start, self.nmax))


def evaluate_spec(spec: RecurrenceSpec, initial: Sequence, nmax: int, label: str = "") -> SolutionTrace:
    """Forward iteration; ``initial`` holds g(start+1-k)..g(start)."""
    if len(initial) != spec.order:
        raise ValueError(f"need {spec.order} initial values")
    first = spec.start + 1 - spec.order
    values = list(initial)
    for n in range(spec.start, nmax):
        window = values[len(values) - spec.order :]
        nxt = -sum((spec.coefficient(i, n) * window[i] for i in range(spec.order)), Fraction(0))
        values.append(nxt)
    return SolutionTrace(tuple(values), start=first, exact=True, label=label)


def evaluate_solution(params: HypergeomParams, beta, X0, X1, nmax: int) -> SolutionTrace:
    """Exact forward iteration of the Padé recurrence at z = beta.

    With (X0, X1) = (P_{0,0}(beta), P_{1,0}(beta)) this reproduces P_{n,0}(beta).
    """
    beta = to_rational(beta)
    values = [to_rational(X0), to_rational(X1)]
    for n in range(1, nmax):
        rc = rec_coeffs(n, params)
        if rc.A == 0:
            raise ConsistencyError(f"A_{n} vanishes")
        values.append(((beta - rc.B) * values[n] - rc.C * values[n - 1]) / rc.A)
    trace = SolutionTrace(tuple(values[: nmax + 1]), start=0, exact=True, label="forward")
    if any(values[:2]) and trace.has_consecutive_zeros():
        logger.warning("Trace has two consecutive zeros", nmax=nmax)
    return trace


def pade_trace(params: HypergeomParams, beta, nmax: int, component: int = 0) -> SolutionTrace:
    """P_{n,component}(beta) for n = 0..nmax through the recurrence."""
    beta = to_rational(beta)
    p1 = pade_general(1, params)
    if component == 0:
        return evaluate_solution(params, beta, 1, p1.P0(beta), nmax)
    return evaluate_solution(params, beta, 0, p1.P1(beta), nmax)


def remainder_trace(params: HypergeomParams, beta, nmax: int, prec_bits: Optional[int] = None) -> SolutionTrace:
    """Interval trace R_n(beta), n = 0..nmax, each term summed with a certified tail."""
    values = tuple(remainder_value(n, params, beta, prec_bits) for n in range(nmax + 1))
    return SolutionTrace(values, start=0, exact=False, label="remainder")


# ---------------------------------------------------------------------------
# Thresholds and index tracking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdReport:
    """Threshold N, indices i_n for n >= N, limit index and stabilization points."""

    N: int
    indices: dict[int, int]
    limit_index: Optional[int]
    N1: Optional[int]
    N2: Optional[int]
    violations: tuple[int, ...]
    horizon: int


def _inequality_holds(spec: RecurrenceSpec, roots: CharRoots, n: int) -> bool:
    """2(2|b_n - l1 l2| + (rho1 + rho2)|a_n + l1 + l2|) <= (rho2 - rho1)|l2 - l1|, exactly."""
    b_gap = abs(spec.coefficient(0, n) - spec.char[0])
    a_gap = abs(spec.coefficient(1, n) - spec.char[1])
    lhs = (roots.rho1 + roots.rho2) * a_gap * 2 + 4 * b_gap
    rhs = (roots.rho2 - roots.rho1) * abs(roots.lambda2 - roots.lambda1)
    return lhs <= rhs


def _threshold(spec: RecurrenceSpec, roots: CharRoots, horizon: int) -> int:
    """Last failing index up to the horizon plus one (at least ``spec.start``)."""
    cap = settings.poincare_scan_cap
    last_fail: Optional[int] = None
    passed = False
    n = spec.start
    while n <= horizon or not passed:
        if n > cap:
            raise ThresholdNotReachedError(f"threshold scan exceeded n = {cap}")
        if _inequality_holds(spec, roots, n):
            passed = True
        else:
            last_fail = n
            passed = False
        n += 1
    return spec.start if last_fail is None else last_fail + 1


def _residual(trace: SolutionTrace, n: int, lam: QuadraticNumber):
    if trace.exact:
        return abs(trace[n + 1] - lam * trace[n])
    return abs(to_interval(trace[n + 1]) - to_interval(lam) * to_interval(trace[n]))


def select_index(trace: SolutionTrace, roots: CharRoots, n: int) -> int:
    """Largest i in {1, 2} minimizing |X_{n+1} - lambda_i X_n|."""
    r1 = _residual(trace, n, roots.lambda1)
    r2 = _residual(trace, n, roots.lambda2)
    if trace.exact:
        return 2 if r2 <= r1 else 1
    verdict = less_or_equal(r2, r1)
    if verdict is None:
        raise IndeterminateComparisonError(f"index selection at n={n}", iv.prec)
    return 2 if verdict else 1


def poincare_threshold(
    spec: RecurrenceSpec, trace: SolutionTrace, strict: bool = True, prec_bits: Optional[int] = None
) -> ThresholdReport:
    """Threshold N by exact scan, the index sequence i_n and its stabilization.

    Args:
        spec: order-2 recurrence with distinct root moduli
        trace: solution values
        strict: raise on a monotonicity violation instead of recording it
        prec_bits: precision for interval traces

    Returns:
        ThresholdReport
    """
    roots = spec.roots()
    horizon = max(trace.nmax - 1, spec.start)
    N = _threshold(spec, roots, horizon)
    indices: dict[int, int] = {}
    with working_precision(prec_bits or settings.default_precision_bits):
        for n in range(max(N, trace.start), trace.nmax):
            indices[n] = select_index(trace, roots, n)
    ns = sorted(indices)
    violations = tuple(n for n, m in zip(ns, ns[1:]) if indices[m] < indices[n])
    if violations:
        logger.warning("Index sequence not monotone", violations=list(violations)[:10])
        if strict:
            raise ConsistencyError(f"i_n decreases after n = {violations[0]}")
    limit = indices[ns[-1]] if ns else None
    N2 = None
    if ns:
        N2 = ns[-1]
        for n in reversed(ns):
            if indices[n] != limit:
                break
            N2 = n
    logger.info("Threshold computed", N=N, limit_index=limit, N2=N2, horizon=horizon)
    return ThresholdReport(N, indices, limit, N2, N2, violations, horizon)


# ---------------------------------------------------------------------------
# Ratio and growth reports
# ---------------------------------------------------------------------------


def _sup(values: Sequence[Interval]) -> Interval:
    lo = max(values, key=lambda x: endpoints(x)[0]).a
    hi = max(values, key=lambda x: endpoints(x)[1]).b
    return iv.mpf([lo, hi])


@dataclass(frozen=True)
class RatioReport:
    """Residuals r_n = |X_{n+1}/X_n - lambda(1 - 1/(2n))| over a window."""

    window: tuple[int, int]
    residuals: dict[int, Interval]
    scaled_sup: Interval
    half_sups: tuple[Interval, Interval]


def ratio_estimate(
    trace: SolutionTrace, lam: QuadraticNumber, window: tuple[int, int], prec_bits: Optional[int] = None
) -> RatioReport:
    """First-order corrected ratio residuals and sup n^2 r_n over the window and its halves."""
    n0, n1 = window
    if not (1 <= n0 <= n1 < trace.nmax):
        raise ValueError(f"window {window} must lie in [1, {trace.nmax - 1}]")
    residuals: dict[int, Interval] = {}
    scaled: dict[int, Interval] = {}
    with working_precision(prec_bits or settings.default_precision_bits):
        lam_iv = to_interval(lam)
        for n in range(n0, n1 + 1):
            x, y = to_interval(trace[n]), to_interval(trace[n + 1])
            if 0 in x:
                raise ConsistencyError(f"X_{n} vanishes inside the ratio window")
            r = abs(y / x - lam_iv * (1 - iv.mpf(1) / (2 * n)))
            residuals[n] = r
            scaled[n] = r * n * n
        mid = (n0 + n1) // 2
        first = [scaled[n] for n in range(n0, mid + 1)]
        second = [scaled[n] for n in range(mid + 1, n1 + 1)] or first
        report = RatioReport(window, residuals, _sup(list(scaled.values())), (_sup(first), _sup(second)))
    return report


@dataclass(frozen=True)
class GrowthReport:
    """C with |X_n| <= C rho^n / sqrt(n) on the computed prefix."""

    C: Interval
    nmax: int
    certified_prefix: bool = True
    note: str = "beyond nmax the bound is asymptotic and not certified"


def growth_bound(trace: SolutionTrace, rho: QuadraticNumber, prec_bits: Optional[int] = None) -> GrowthReport:
    """C = max_{1 <= n <= nmax} |X_n| sqrt(n) / rho^n with outward rounding."""
    with working_precision(prec_bits or settings.default_precision_bits):
        rho_iv = to_interval(rho)
        best = iv.mpf(0)
        power = iv.mpf(1)
        for n in range(1, trace.nmax + 1):
            power = power * rho_iv
            if n < trace.start:
                continue
            value = abs(to_interval(trace[n])) * iv.sqrt(n) / power
            best = _sup([best, value])
    return GrowthReport(best, trace.nmax)


# ---------------------------------------------------------------------------
# Decomposition along characteristic roots
# ---------------------------------------------------------------------------


def _certified_real_roots(char_poly: Poly) -> list[Interval]:
    """Real roots of a monic polynomial as intervals checked by a sign change."""
    coeffs = [mp.mpf(c.numerator) / c.denominator for c in reversed(char_poly.coeffs)]
    roots, err = mp.polyroots(coeffs, maxsteps=200, extraprec=2 * mp.prec, error=True)
    enclosures = []
    for root in roots:
        if abs(mp.im(root)) > max(err, mp.mpf(2) ** (-mp.prec // 2)):
            raise HypothesisError("real characteristic roots", f"complex root {root}")
        x = mp.re(root)
        radius = 2 * err + abs(x) * mp.mpf(2) ** (-mp.prec + 4) + mp.mpf(2) ** (-mp.prec)
        for _ in range(8):
            lo, hi = iv.mpf(x - radius), iv.mpf(x + radius)
            f_lo, f_hi = iv_horner(char_poly, lo), iv_horner(char_poly, hi)
            if (f_lo < 0 and f_hi > 0) or (f_lo > 0 and f_hi < 0):
                enclosures.append(iv.mpf([lo.a, hi.b]))
                break
            radius *= 16
        else:
            raise IndeterminateComparisonError(f"root enclosure near {x}", iv.prec)
    return enclosures


def iv_horner(P: Poly, x: Interval) -> Interval:
    result = iv.mpf(0)
    for c in reversed(P.coeffs):
        result = result * x + to_interval(c)
    return result


def u_decompose(spec: RecurrenceSpec, g: Sequence, n: int = 0, prec_bits: Optional[int] = None) -> tuple:
    """Components u_j(n) = Q_j(tau) g(n) / P'(lambda_j) along the characteristic roots.

    Args:
        spec: recurrence whose characteristic polynomial has roots of distinct moduli
        g: the k values g(n), ..., g(n+k-1)
        n: index of g[0], for reporting
        prec_bits: precision for order >= 3

    Returns:
        (u_1(n), ..., u_k(n)) ordered by increasing root modulus; exact for order 2
    """
    k = spec.order
    if len(g) != k:
        raise ValueError(f"need {k} consecutive values")
    if k == 2:
        roots = spec.roots()
        l1, l2 = roots.lambda1, roots.lambda2
        g0, g1 = g
        u1 = (QuadraticNumber._lift(g1) - l2 * g0) / (l1 - l2)
        u2 = (QuadraticNumber._lift(g1) - l1 * g0) / (l2 - l1)
        return u1, u2

    P = spec.char_poly()
    bits = prec_bits or settings.default_precision_bits
    with working_precision(bits):
        saved = mp.prec
        mp.prec = bits
        try:
            roots = _certified_real_roots(P)
        finally:
            mp.prec = saved
        roots.sort(key=lambda r: endpoints(abs(r))[0])
        for a, b in zip(roots, roots[1:]):
            if not abs(a) < abs(b):
                raise HypothesisError("distinct root moduli", f"roots near {a} and {b}")
        dP = P.derivative()
        gs = [to_interval(v) for v in g]
        components = []
        for lam in roots:
            # Q_j(X) = P(X)/(X - lambda_j) by synthetic division
            q = [iv.mpf(0)] * k
            carry = iv.mpf(0)
            for i in range(k, 0, -1):
                carry = carry * lam + to_interval(P[i])
                q[i - 1] = carry
            value = sum((q[l] * gs[l] for l in range(k)), iv.mpf(0))
            components.append(value / iv_horner(dP, lam))
        reconstruction = [sum((lam**l * u for lam, u in zip(roots, components)), iv.mpf(0)) for l in range(k)]
        for l, (rebuilt, target) in enumerate(zip(reconstruction, gs)):
            if not (rebuilt - target).a <= 0 <= (rebuilt - target).b:
                raise ConsistencyError(f"reconstruction of g(n+{l}) failed at n={n}")
    return tuple(components)


# ---------------------------------------------------------------------------
# alpha = 0 remainder profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RemainderProfile:
    """log(|R_n(beta)| (2n)! / |delta^2/beta|^n) against log n."""

    ns: tuple[int, ...]
    logs: tuple[float, ...]
    slope: float


def alpha_zero_remainder_profile(
    params: HypergeomParams, beta, nmax: int, prec_bits: Optional[int] = None
) -> RemainderProfile:
    """Polynomial-growth profile of the normalized remainder when alpha = 0."""
    if params.alpha != 0:
        raise ValueError("profile applies to alpha = 0")
    if params.delta == 0:
        raise HypothesisError("delta != 0", "the normalized remainder is undefined")
    beta = to_rational(beta)
    scale = abs(params.delta**2 / beta)
    ns, logs = [], []
    bits = prec_bits or settings.default_precision_bits
    with working_precision(bits):
        for n in range(1, nmax + 1):
            R = remainder_value(n, params, beta, bits)
            normalized = abs(R) * math.factorial(2 * n) / to_interval(scale**n)
            ns.append(n)
            logs.append(float(iv.ln(normalized).mid))
    slope = float(np.polyfit(np.log(ns[1:]), logs[1:], 1)[0]) if len(ns) > 2 else 0.0
    return RemainderProfile(tuple(ns), tuple(logs), slope)
