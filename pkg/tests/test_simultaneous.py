import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from irrmeter.core.exceptions import HypothesisError
from irrmeter.engine.simultaneous import (
    criterion_input_from_pade,
    effective_lower_bound,
    exponent_bound,
    linear_form,
    mu_from_pairs,
    verify_matrix_hypotheses,
)
from irrmeter.models.criterion import ApproxMode, CriterionInput, GeometricRates
from irrmeter.models.reports import Verdict

SQRT2 = ("1.41421356", "1.41421357")


def sqrt2_input(**overrides):
    """Convergent rows of sqrt(2): (-p, q) for 3/2, 7/5, 17/12."""
    data = dict(
        s=1,
        theta=[(1, 1), SQRT2],
        indices=[1, 2],
        matrices=[[[-3, 2], [-7, 5]], [[-7, 5], [-17, 12]]],
        Q=[5, 12],
        E=[5, 14],
    )
    data.update(overrides)
    return CriterionInput(**data)


def test_linear_form_enclosure():
    """x.theta is enclosed exactly."""
    lo, hi = linear_form([-3, 2], [(Fraction(1), Fraction(1)), (Fraction(SQRT2[0]), Fraction(SQRT2[1]))])
    assert lo == Fraction("-0.17157288") and hi == Fraction("-0.17157286")


def test_input_validation():
    """theta_0, invertibility and monotone growth are enforced."""
    with pytest.raises(ValidationError):
        sqrt2_input(theta=[(2, 2), SQRT2])
    with pytest.raises(ValidationError):
        sqrt2_input(matrices=[[[1, 2], [2, 4]], [[-7, 5], [-17, 12]]])
    with pytest.raises(ValidationError):
        sqrt2_input(Q=[12, 5])
    with pytest.raises(ValidationError):
        sqrt2_input(indices=[2, 2])
    with pytest.raises(ValidationError):
        GeometricRates(a=1, b=1, alpha=1, beta=2)


def test_type_one_rows_pass():
    """Convergent rows satisfy the typeI hypotheses."""
    rows = verify_matrix_hypotheses(sqrt2_input())
    assert len(rows) == 4
    assert all(r.verdict is Verdict.PASS for r in rows)


def test_type_one_row_fails():
    """E_2 = 15 is too demanding for |7 - 5 sqrt(2)|."""
    rows = verify_matrix_hypotheses(sqrt2_input(E=[5, 15]))
    failed = [(r.n, r.row) for r in rows if r.verdict is Verdict.FAIL]
    assert failed == [(2, 0)]


def test_wide_theta_is_indeterminate():
    """A coarse enclosure leaves rows undecided instead of failing them."""
    rows = verify_matrix_hypotheses(sqrt2_input(theta=[(1, 1), ("1.4", "1.5")], E=[6, 14]))
    verdicts = {r.verdict for r in rows}
    assert Verdict.INDETERMINATE in verdicts
    assert Verdict.FAIL not in verdicts


def test_type_two_rows_pass():
    """Rows (q, p) satisfy the typeII hypotheses."""
    inp = sqrt2_input(mode=ApproxMode.TYPE_II, matrices=[[[2, 3], [5, 7]], [[5, 7], [12, 17]]])
    assert all(r.verdict is Verdict.PASS for r in verify_matrix_hypotheses(inp))


def test_exponent_bound_proxy_and_certified():
    """Finite-window proxy without rates, exact ratio with declared rates."""
    proxy = exponent_bound(sqrt2_input())
    assert not proxy.certified
    assert proxy.window == (1, 2)
    assert float(proxy.value.lower) == pytest.approx(math.log(12) / math.log(5), rel=1e-12)
    declared = exponent_bound(sqrt2_input(geometric=GeometricRates(a=1, b=1, alpha=4, beta=2)))
    assert declared.certified
    assert declared.value.contains(2)


def test_effective_lower_bound():
    """a = b = 1, alpha = 4, beta = 2 at y_0 = 8 gives 1/2048."""
    rates = GeometricRates(a=1, b=1, alpha=4, beta=2)
    bound = effective_lower_bound(rates, [8, 11])
    assert bound.height == 8
    assert bound.bound.contains(Fraction(1, 2048))
    assert bound.floor == "1/2"
    type_two = effective_lower_bound(rates, [3, 8], ApproxMode.TYPE_II)
    assert type_two.height == 8


def test_effective_lower_bound_floor():
    """Points below 1/(2b) are refused, as are inputs without rates."""
    with pytest.raises(HypothesisError):
        effective_lower_bound(GeometricRates(a=1, b=Fraction(1, 16), alpha=4, beta=2), [4, 5])
    with pytest.raises(HypothesisError):
        effective_lower_bound(sqrt2_input(), [8, 11])


def test_mu_from_pairs():
    """1 + max log Q_{n+1}/log E_{n-1} over the window."""
    pairs = [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]
    result = mu_from_pairs(pairs, [1, 2, 5, 12, 29], [2, 5, 14, 33, 82])
    assert result.kind == "mu"
    assert result.window == (1, 3)
    assert float(result.value.lower) == pytest.approx(1 + math.log(5) / math.log(2), rel=1e-12)
    with pytest.raises(HypothesisError):
        mu_from_pairs([(1, 1), (2, 2), (7, 5)], [1, 2, 5], [2, 5, 14])
    with pytest.raises(ValueError):
        mu_from_pairs(pairs, [1, 2], [2, 5])


def test_criterion_input_from_pade():
    """Scaled Padé pairs for (1 - 1/9)^(1/3)/9 meet the typeI hypotheses."""
    inp = criterion_input_from_pade(Fraction(1, 3), 9, 6)
    rows = verify_matrix_hypotheses(inp)
    assert rows and all(r.verdict is Verdict.PASS for r in rows)
    bound = exponent_bound(inp)
    assert bound.certified
    assert float(bound.value.lower) == pytest.approx(1.7428, abs=1e-3)
