import pytest

from irrmeter.engine.verification import BENNETT_CONSTANT, VerificationRunner, integrality_grid


def test_all_suites_pass():
    """Every registered suite passes at a small index."""
    runner = VerificationRunner(nmax=6, seed=7, sweep_size=10)
    results = runner.run()
    assert [r.name for r in results] == list(runner.suites)
    failing = {r.name: r.failures for r in results if not r.passed}
    assert failing == {}


def test_selected_suites_in_requested_order():
    """Only the named suites run."""
    results = VerificationRunner(nmax=3).run(["determinant", "weight"])
    assert [r.name for r in results] == ["determinant", "weight"]
    assert all(r.passed and r.cases > 0 for r in results)


def test_unknown_suite():
    """An unknown name is refused before anything runs."""
    with pytest.raises(ValueError, match="Unknown suites"):
        VerificationRunner(nmax=2).run(["weight", "nope"])
    with pytest.raises(ValueError):
        VerificationRunner(nmax=0)


def test_bennett_suite_covers_forty():
    """The gcd bound is checked up to n = 40 even for small nmax."""
    (result,) = VerificationRunner(nmax=3).run(["bennett-gcd"])
    assert result.passed
    assert result.cases == 40
    assert BENNETT_CONSTANT == 5563


def test_integrality_grid_covers_regimes():
    """Fourteen combinations spanning all four regimes."""
    grid = integrality_grid()
    assert len(grid) == 14
    assert {label for label, _, _ in grid} == {"binomial", "shifted_log", "alpha_zero", "general"}
    (result,) = VerificationRunner(nmax=8).run(["integrality"])
    assert result.passed
    assert result.detail["combinations"] == 14


def test_index_sweep_is_reproducible():
    """The same seed draws the same initial pairs."""
    first = VerificationRunner(nmax=4, seed=11, sweep_size=20).run(["index-monotonicity"])[0]
    second = VerificationRunner(nmax=4, seed=11, sweep_size=20).run(["index-monotonicity"])[0]
    assert first.passed and second.passed
    assert first.detail == second.detail
    assert first.cases == 20
