"""
Outward-rounded interval helpers on top of mpmath's ``iv`` context.

The ``iv`` context keeps a single process-wide precision, so every
computation that changes it goes through :func:`working_precision`,
which serializes precision changes behind a re-entrant lock.
"""

import threading
from contextlib import contextmanager
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Iterator, Optional

from mpmath import iv
from mpmath.libmp import to_rational

from irrmeter.core.config import settings
from irrmeter.core.exceptions import IndeterminateComparisonError
from irrmeter.core.logging import get_logger

logger = get_logger(__name__)

_PRECISION_LOCK = threading.RLock()

Interval = type(iv.mpf(0))


@contextmanager
def working_precision(bits: int) -> Iterator[int]:
    """Run the enclosed block with ``iv.prec`` set to ``bits``."""
    if bits < settings.min_precision_bits:
        raise ValueError(f"precision must be at least {settings.min_precision_bits} bits")
    with _PRECISION_LOCK:
        saved = iv.prec
        iv.prec = bits
        try:
            yield bits
        finally:
            iv.prec = saved


def to_interval(value) -> Interval:
    """Enclose an exact value at the current ``iv`` precision.

    Accepts ints, Fractions, Decimals, decimal strings, intervals and any
    object exposing ``to_interval()`` (quadratic numbers, radicals).
    """
    if isinstance(value, Interval):
        return value
    if hasattr(value, "to_interval"):
        return value.to_interval()
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return iv.mpf(value)
    if isinstance(value, Decimal):
        value = Fraction(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return iv.mpf(value.numerator)
        return iv.mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        return to_interval(Fraction(value))
    raise TypeError(f"cannot enclose {type(value).__name__} in an interval")


def endpoints(x: Interval) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of a finite interval, as Fractions of Python ints."""
    lo, hi = x._mpi_
    try:
        (p_lo, q_lo), (p_hi, q_hi) = to_rational(lo), to_rational(hi)
    except ValueError as e:
        raise ValueError("interval has an infinite endpoint") from e
    # gmpy backends hand back mpz, which float() and math.log reject past 2**1024
    return Fraction(int(p_lo), int(q_lo)), Fraction(int(p_hi), int(q_hi))


def fraction_to_decimal(q: Fraction, digits: int, rounding: str) -> str:
    """Render ``q`` with ``digits`` fractional digits, rounding down ('floor') or up ('ceiling')."""
    scale = 10**digits
    scaled = q * scale
    if rounding == "floor":
        units = scaled.numerator // scaled.denominator
    elif rounding == "ceiling":
        units = -((-scaled.numerator) // scaled.denominator)
    else:
        raise ValueError(f"unknown rounding {rounding!r}")
    sign = "-" if units < 0 else ""
    units = abs(units)
    whole, frac = divmod(units, scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def decimal_digits(prec_bits: int) -> int:
    """Decimal digits that faithfully represent ``prec_bits`` binary digits."""
    return int(prec_bits * 0.30103) + 3


def interval_strings(x: Interval, prec_bits: int) -> tuple[str, str]:
    """Outward decimal strings for the endpoints of ``x``."""
    lo, hi = endpoints(x)
    digits = decimal_digits(prec_bits)
    return fraction_to_decimal(lo, digits, "floor"), fraction_to_decimal(hi, digits, "ceiling")


def sign_of(x: Interval) -> Optional[int]:
    """Sign of every point of ``x``: 1, -1 or 0, or None when ``x`` straddles zero."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    lo, hi = endpoints(x)
    if lo == hi == 0:
        return 0
    return None


def decide(
    evaluate: Callable[[], Interval],
    what: str,
    prec_bits: Optional[int] = None,
    cap_bits: Optional[int] = None,
) -> tuple[int, int]:
    """Decide the sign of a quantity by doubling precision until it is determined.

    Args:
        evaluate: callable recomputing the quantity at the current ``iv`` precision
        what: description used in logs and errors
        prec_bits: starting precision
        cap_bits: precision cap

    Returns:
        (sign, precision at which it was decided)
    """
    bits = prec_bits or settings.default_precision_bits
    cap = cap_bits or settings.max_precision_bits
    while True:
        with working_precision(bits):
            sign = sign_of(evaluate())
        if sign is not None:
            return sign, bits
        if bits >= cap:
            logger.warning("Comparison indeterminate at cap", what=what, prec_bits=bits)
            raise IndeterminateComparisonError(what, bits)
        logger.debug("Refining comparison", what=what, prec_bits=bits * 2)
        bits = min(2 * bits, cap)


def less_or_equal(x: Interval, y: Interval) -> Optional[bool]:
    """Certified ``x <= y``: True, False, or None when undecided."""
    if x <= y:
        return True
    if x > y:
        return False
    return None


def width(x: Interval) -> Fraction:
    """Exact width of a finite interval."""
    lo, hi = endpoints(x)
    return hi - lo


def hull(*xs: Interval) -> Interval:
    """Smallest interval containing all the given intervals."""
    lo = min(xs, key=lambda x: endpoints(x)[0]).a
    hi = max(xs, key=lambda x: endpoints(x)[1]).b
    return iv.mpf([lo, hi])
