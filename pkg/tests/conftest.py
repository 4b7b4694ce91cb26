import os
import sys
from fractions import Fraction

import pytest

# Add the root directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from irrmeter.models.params import HypergeomParams  # noqa: E402


@pytest.fixture
def binomial_third():
    """f(z) = (1/z)(1 - 1/z)^(1/3)."""
    return HypergeomParams.binomial(Fraction(1, 3))


@pytest.fixture
def shifted_log_zero():
    """The plain logarithm, x = 0."""
    return HypergeomParams.shifted_log(0)


@pytest.fixture
def shifted_exp_minus_one():
    """alpha = 0 with gamma = -1."""
    return HypergeomParams.shifted_exp(-1)


@pytest.fixture
def matrix_file(tmp_path):
    """Write a matrix-sequence file and return its path."""

    def write(text: str):
        path = tmp_path / "matrices.txt"
        path.write_text(text, encoding="utf-8")
        return path

    return write
