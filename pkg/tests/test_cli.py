import json

import pytest

from irrmeter.cli import main
from irrmeter.cli.matrix_file import MatrixFileParser
from irrmeter.core.exceptions import InputFormatError

SQRT2_FILE = """\
# convergents of sqrt(2)
s 1
mode typeI
theta 1.41421356 1.41421357
n 1
-3 2
-7 5
Q 5
E 5
n 2
-7 5
-17 12
Q 12
E {E2}
"""


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_mu_bennett_example(capsys):
    """The Bennett example prints 2.7428036524... and exits 0."""
    code, payload = run_json(
        capsys, "mu", "--preset", "binomial", "--omega", "1/3", "--beta", "9", "--delta-mode", "bennett"
    )
    assert code == 0
    assert payload["outcome"] == "bound"
    assert payload["certified"] is True
    assert payload["result"]["mu"]["lo"].startswith("2.7428036524")


def test_mu_expression_beta(capsys):
    """Negative expressions are passed with an equals sign."""
    code, payload = run_json(
        capsys, "mu", "--preset", "binomial", "--omega", "1/3", "--beta=-8^3", "--delta-mode", "bennett"
    )
    assert code == 0
    assert payload["inputs"]["beta"] == "-512"


def test_mu_no_conclusion_exits_two(capsys):
    """x = 1/2 at beta = 2 has Delta >= rho2."""
    code, payload = run_json(capsys, "mu", "--preset", "shifted-log", "--x", "1/2", "--beta", "2")
    assert code == 2
    assert payload["outcome"] == "no_conclusion"
    assert payload["certified"] is False


def test_mu_with_effective_constants(capsys):
    """--nmax attaches the effective constants."""
    code, payload = run_json(
        capsys, "mu", "--preset", "binomial", "--omega", "1/3", "--beta", "9", "--delta-mode", "bennett", "--nmax", "10"
    )
    assert code == 0
    assert payload["effectivity"]["prefix_only"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["mu", "--preset", "binomial", "--omega", "1/3"],
        ["mu", "--preset", "binomial", "--beta", "9"],
        ["mu", "--preset", "nope", "--beta", "9"],
        ["mu", "--preset", "binomial", "--omega", "1/3", "--beta", "9", "--prec", "8"],
        ["criterion"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    """Usage errors go to stderr and exit 1."""
    assert main(argv) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "irrmeter: error:" in captured.err


def test_table_matches_printed_values(capsys):
    """Every cubic root agrees with its printed measure."""
    code, payload = run_json(capsys, "table")
    assert code == 0
    assert len(payload["rows"]) == 18
    assert all(row["matches"] for row in payload["rows"])


def test_verify_selected_suite(capsys):
    """A single suite at a small index."""
    code, payload = run_json(capsys, "verify", "--suite", "weight", "--nmax", "3")
    assert code == 0
    assert payload["passed"] is True
    assert [s["name"] for s in payload["suites"]] == ["weight"]


def test_verify_unknown_suite(capsys):
    """An unknown suite is a usage error reported in the payload."""
    code, payload = run_json(capsys, "verify", "--suite", "nope", "--nmax", "3")
    assert code == 1
    assert payload["error"]["type"] == "UsageError"


def test_asymptotics(capsys):
    """Roots and thresholds at beta = 9."""
    code, payload = run_json(
        capsys, "asymptotics", "--preset", "binomial", "--omega", "1/3", "--beta", "9", "--nmax", "60"
    )
    assert code == 0
    assert payload["roots"]["rho2"]["exact"]
    assert payload["pade"]["limit_index"] == 2
    assert payload["certified"] is False


def test_criterion_pass_and_fail(capsys, matrix_file):
    """Exit 0 when every row passes, 2 otherwise."""
    code, payload = run_json(capsys, "criterion", "--input", str(matrix_file(SQRT2_FILE.format(E2=14))))
    assert code == 0
    assert payload["exponent"]["certified"] is False
    assert all(r["verdict"] == "pass" for r in payload["rows"])
    code, payload = run_json(capsys, "criterion", "--input", str(matrix_file(SQRT2_FILE.format(E2=15))))
    assert code == 2
    assert payload["warnings"][0].startswith("n=2 row 0")


def test_criterion_bad_file(capsys, matrix_file):
    """A malformed file is reported with its line number."""
    path = matrix_file(SQRT2_FILE.format(E2=14).replace("-17 12", "-17 12 4"))
    code, payload = run_json(capsys, "criterion", "--input", str(path))
    assert code == 1
    assert payload["error"]["type"] == "InputFormatError"
    assert "line 12" in payload["error"]["message"]


@pytest.mark.parametrize(
    "text,line",
    [
        ("mode typeI\n", 1),
        ("s 1\nmode typeIII\n", 2),
        ("s 1\ntheta 1.4\n", 2),
        ("s 1\ntheta 1.4 1.5\nn 1\n1 2\nQ 5\n", 5),
        ("s 1\ntheta 1.4 1.5\nQ 5\n", 3),
        ("s 1\ntheta 1.4 1.5\nn 1\n1 x\n", 4),
        ("s 1\ngeometric 1 1 1 2\n", 2),
        ("", None),
    ],
)
def test_matrix_file_errors(text, line):
    """Parse errors carry the offending line."""
    with pytest.raises(InputFormatError) as info:
        MatrixFileParser("inline").parse_text(text)
    assert info.value.line == line


def test_matrix_file_with_rates():
    """Optional directives are read into the input."""
    text = SQRT2_FILE.format(E2=14) + "geometric 1 1 4 2\npoint 8 11\n"
    inp = MatrixFileParser("inline").parse_text(text)
    assert inp.s == 1
    assert inp.indices == [1, 2]
    assert inp.geometric.alpha == 4
    assert inp.point == [8, 11]


@pytest.mark.parametrize("fmt", ["csv", "text"])
def test_output_formats_are_deterministic(capsys, fmt):
    """Repeated runs print identical output."""
    argv = ["mu", "--preset", "shifted-log", "--x", "0", "--beta", "9", "--format", fmt]
    outputs = []
    for _ in range(2):
        assert main(argv) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    assert outputs[0].strip()
