"""
Verification suites for the Padé, recurrence and denominator identities.

Every suite is exact unless stated otherwise and returns a SuiteResult;
a failing case is recorded, not raised, so that one run reports them all.
"""

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from irrmeter.core.config import settings
from irrmeter.core.exceptions import IrrmeterError
from irrmeter.core.logging import LoggerMixin
from irrmeter.engine.exactmath import Gn
from irrmeter.engine.pade import (
    kappa_scaled_pair,
    pade_binomial,
    pade_from_functional,
    pade_general,
    verify_det_M2,
    verify_recurrence,
    verify_weight,
)
from irrmeter.engine.padic import verify_padic_remainder
from irrmeter.engine.recurrence import RecurrenceSpec, evaluate_spec, pade_trace, poincare_threshold
from irrmeter.engine.series import rd_oracle
from irrmeter.models.params import HypergeomParams
from irrmeter.models.reports import SuiteResult


def _presets() -> List[Tuple[str, HypergeomParams]]:
    return [
        ("binomial(1/3)", HypergeomParams.binomial(Fraction(1, 3))),
        ("shifted_log(1/2)", HypergeomParams.shifted_log(Fraction(1, 2))),
        ("shifted_log(0)", HypergeomParams.shifted_log(0)),
        ("shifted_exp(-1)", HypergeomParams.shifted_exp(-1)),
        ("general(1,1/2,1/3)", HypergeomParams(alpha=1, gamma=Fraction(1, 2), delta=Fraction(1, 3))),
    ]


def integrality_grid() -> List[Tuple[str, HypergeomParams, Fraction]]:
    """(label, params, beta) combinations covering every denominator regime."""
    grid = [
        ("binomial", HypergeomParams.binomial(Fraction(1, 3)), Fraction(9)),
        ("binomial", HypergeomParams.binomial(Fraction(1, 3)), Fraction(25)),
        ("binomial", HypergeomParams.binomial(Fraction(1, 3)), Fraction(4, 3)),
        ("binomial", HypergeomParams.binomial(Fraction(1, 2)), Fraction(2)),
        ("binomial", HypergeomParams.binomial(Fraction(2, 5)), Fraction(7, 2)),
        ("binomial", HypergeomParams.binomial(Fraction(-1, 3)), Fraction(9)),
        ("shifted_log", HypergeomParams.shifted_log(0), Fraction(2)),
        ("shifted_log", HypergeomParams.shifted_log(Fraction(1, 2)), Fraction(9)),
        ("shifted_log", HypergeomParams.shifted_log(Fraction(1, 3)), Fraction(5, 2)),
        ("alpha_zero", HypergeomParams.shifted_exp(-1), Fraction(2)),
        ("alpha_zero", HypergeomParams.shifted_exp(Fraction(1, 2)), Fraction(3)),
        ("general", HypergeomParams(alpha=1, gamma=Fraction(1, 2), delta=Fraction(1, 3)), Fraction(5)),
        ("general", HypergeomParams(alpha=2, gamma=0, delta=1), Fraction(7, 2)),
        ("general", HypergeomParams(alpha=Fraction(1, 2), gamma=Fraction(1, 3), delta=Fraction(1, 4)), Fraction(3)),
    ]
    return grid


PADIC_FIXTURES: Tuple[Tuple[Fraction, Fraction, int], ...] = (
    (Fraction(1, 3), Fraction(1, 5), 5),
    (Fraction(1, 2), Fraction(1, 8), 2),
    (Fraction(1, 3), Fraction(1, 27), 3),
)

SPECIALIZATION_OMEGAS = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 5), Fraction(-1, 3))

BENNETT_CONSTANT = 5563


class VerificationRunner(LoggerMixin):
    """Runs the named verification suites up to a maximal index."""

    def __init__(self, nmax: Optional[int] = None, seed: Optional[int] = None, sweep_size: int = 100):
        self.nmax = nmax if nmax is not None else settings.verify_nmax
        if self.nmax < 1:
            raise ValueError("nmax must be positive")
        self.seed = settings.default_seed if seed is None else seed
        self.sweep_size = sweep_size
        self.suites: Dict[str, Callable[[], SuiteResult]] = {
            "weight": self.check_weight,
            "recurrence": self.check_recurrence,
            "determinant": self.check_determinant,
            "rd-oracle": self.check_rd_oracle,
            "functional-oracle": self.check_functional_oracle,
            "binomial-specialization": self.check_binomial_specialization,
            "integrality": self.check_integrality,
            "bennett-gcd": self.check_bennett_gcd,
            "p-adic": self.check_padic,
            "forward-evaluation": self.check_forward_evaluation,
            "index-monotonicity": self.check_index_monotonicity,
        }

    def run(self, names: Optional[Sequence[str]] = None) -> List[SuiteResult]:
        """Run the selected suites (all by default) in registry order."""
        selected = list(self.suites) if not names else list(names)
        unknown = [name for name in selected if name not in self.suites]
        if unknown:
            raise ValueError(f"Unknown suites: {', '.join(unknown)}")
        self.logger.info("Starting verification", suites=selected, nmax=self.nmax, seed=self.seed)
        results = []
        for name in selected:
            result = self.suites[name]()
            log = self.logger.info if result.passed else self.logger.error
            log("Suite finished", suite=name, passed=result.passed, cases=result.cases, failures=len(result.failures))
            results.append(result)
        return results

    def _result(self, name: str, cases: int, failures: List[str], **detail) -> SuiteResult:
        return SuiteResult(name=name, passed=not failures, cases=cases, failures=failures, detail=detail)

    def check_weight(self) -> SuiteResult:
        """Weight-n property of the explicit pairs for every preset."""
        failures, cases = [], 0
        for label, params in _presets():
            for n in range(1, self.nmax + 1):
                cases += 1
                report = verify_weight(n, params)
                if not report.ok:
                    failures.append(f"{label} n={n}: {report.check} at index {report.index}")
        return self._result("weight", cases, failures)

    def check_recurrence(self) -> SuiteResult:
        """Three-term recurrence on both polynomials and the remainder tails."""
        failures, cases = [], 0
        for label, params in _presets():
            for n in range(1, self.nmax + 1):
                cases += 1
                if not verify_recurrence(n, params):
                    failures.append(f"{label} n={n}")
        return self._result("recurrence", cases, failures)

    def check_determinant(self) -> SuiteResult:
        """Symbolic determinant against its closed form; nonzero under nondegeneracy."""
        failures, cases = [], 0
        for label, params in _presets():
            if not params.nondegenerate:
                continue
            for n in range(self.nmax + 1):
                cases += 1
                try:
                    ok = verify_det_M2(n, params)
                except IrrmeterError as e:
                    failures.append(f"{label} n={n}: {e}")
                    continue
                if not ok:
                    failures.append(f"{label} n={n}")
        return self._result("determinant", cases, failures)

    def check_rd_oracle(self) -> SuiteResult:
        """P_{n,0} against the differential-operator oracle."""
        failures, cases = [], 0
        for label, params in _presets():
            for n in range(min(self.nmax, 15) + 1):
                cases += 1
                if rd_oracle(n, params) != pade_general(n, params).P0:
                    failures.append(f"{label} n={n}")
        return self._result("rd-oracle", cases, failures)

    def check_functional_oracle(self) -> SuiteResult:
        """P_{n,1} against phi_f applied to the divided difference of P_{n,0}."""
        failures, cases = [], 0
        for label, params in _presets():
            for n in range(self.nmax + 1):
                cases += 1
                if pade_from_functional(n, params) != pade_general(n, params):
                    failures.append(f"{label} n={n}")
        return self._result("functional-oracle", cases, failures)

    def check_binomial_specialization(self) -> SuiteResult:
        """Binomial closed forms against the general construction."""
        failures, cases = [], 0
        for omega in SPECIALIZATION_OMEGAS:
            params = HypergeomParams.binomial(omega)
            for n in range(1, self.nmax + 1):
                cases += 1
                if pade_binomial(n, omega) != pade_general(n, params):
                    failures.append(f"omega={omega} n={n}")
        return self._result("binomial-specialization", cases, failures)

    def check_integrality(self) -> SuiteResult:
        """kappa_n P_{n,i}(beta) are integers across the regime grid."""
        failures, cases = [], 0
        grid = integrality_grid()
        for label, params, beta in grid:
            for n in range(self.nmax + 1):
                cases += 1
                try:
                    kappa_scaled_pair(n, params, beta)
                except IrrmeterError as e:
                    failures.append(f"{label} {params.describe()} beta={beta} n={n}: {e}")
        return self._result("integrality", cases, failures, combinations=len(grid))

    def check_bennett_gcd(self) -> SuiteResult:
        """5563 G_n(1/3) >= 2^n for 1 <= n <= 40."""
        failures = []
        top = max(self.nmax, 40)
        for n in range(1, top + 1):
            if BENNETT_CONSTANT * Gn(Fraction(1, 3), n) < 2**n:
                failures.append(f"n={n}: G_n={Gn(Fraction(1, 3), n)}")
        return self._result("bennett-gcd", top, failures)

    def check_padic(self) -> SuiteResult:
        """p-adic size of kappa_n R_n(beta) against the exact bound."""
        failures, cases = [], 0
        worst: Dict[str, str] = {}
        for omega, beta, p in PADIC_FIXTURES:
            key = f"({omega}, {beta}, {p})"
            for n in range(min(self.nmax, 20) + 1):
                cases += 1
                check = verify_padic_remainder(omega, beta, p, n)
                if not check.ok:
                    failures.append(f"{key} n={n}: observed {check.observed_exponent} > {check.bound_exponent}")
                worst[key] = f"{check.observed_exponent} <= {check.bound_exponent}"
        return self._result("p-adic", cases, failures, last=worst)

    def check_forward_evaluation(self) -> SuiteResult:
        """Forward recurrence values against direct evaluation of both polynomials up to n = 50."""
        failures, cases = [], 0
        top = max(self.nmax, 50)
        for label, params in _presets():
            beta = Fraction(9) if params.alpha != 0 else Fraction(2)
            traces = (pade_trace(params, beta, top, 0), pade_trace(params, beta, top, 1))
            for n in range(top + 1):
                cases += 1
                direct = pade_general(n, params).evaluate(beta)
                if (traces[0][n], traces[1][n]) != direct:
                    failures.append(f"{label} n={n}")
        return self._result("forward-evaluation", cases, failures)

    def check_index_monotonicity(self) -> SuiteResult:
        """i_n is non-decreasing from N on for random rational initial pairs (omega = 1/3, beta = 9)."""
        spec = RecurrenceSpec.from_pade(HypergeomParams.binomial(Fraction(1, 3)), 9)
        rng = np.random.default_rng(self.seed)
        horizon = max(self.nmax, 40)
        failures, cases = [], 0
        limits: Dict[int, int] = {}
        N = None
        while cases < self.sweep_size:
            nums = rng.integers(-1000, 1001, size=2)
            dens = rng.integers(1, 101, size=2)
            initial = [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]
            if initial[0] == 0 and initial[1] == 0:
                continue
            cases += 1
            trace = evaluate_spec(spec, initial, horizon, label="sweep")
            report = poincare_threshold(spec, trace, strict=False)
            N = report.N
            if report.violations:
                failures.append(f"initial {initial[0]}, {initial[1]}: decreases after {report.violations[0]}")
            if report.limit_index is not None:
                limits[report.limit_index] = limits.get(report.limit_index, 0) + 1
        return self._result("index-monotonicity", cases, failures, N=N, seed=self.seed, limit_counts=limits)
