"""
Reader for matrix-sequence input files.

Format (one directive per line, ``#`` starts a comment)::

    s 1
    mode typeI
    theta 0.10683330 0.10683331
    geometric 2 1 34 34
    point 9 1
    n 1
    -1 1
    -3 1
    Q 10
    E 12

``theta`` appears s times (theta_1..theta_s; theta_0 = 1), ``mode``,
``geometric`` and ``point`` are optional, and every ``n`` block holds s+1
rows of s+1 integers followed by ``Q`` and ``E``.
"""

from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from irrmeter.core.exceptions import InputFormatError
from irrmeter.core.logging import LoggerMixin
from irrmeter.engine.exactmath import parse_rational
from irrmeter.models.criterion import ApproxMode, CriterionInput, GeometricRates


class MatrixFileParser(LoggerMixin):
    """Parses a matrix-sequence file into a CriterionInput."""

    def __init__(self, path: Path | str):
        self.path = Path(path)

    def parse(self) -> CriterionInput:
        """Read and validate the file."""
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as e:
            self.logger.error("Cannot read input file", path=str(self.path), error=str(e))
            raise InputFormatError(f"cannot read {self.path}: {e}")
        return self.parse_text(text)

    def parse_text(self, text: str) -> CriterionInput:
        """Parse file contents; errors carry the offending line number."""
        data: Dict[str, Any] = {"theta": [(1, 1)], "indices": [], "matrices": [], "Q": [], "E": []}
        s: Optional[int] = None
        block: Optional[Dict[str, Any]] = None
        last_line = 0

        def number(token: str, lineno: int) -> Fraction:
            try:
                return parse_rational(token)
            except (ValueError, ZeroDivisionError) as e:
                raise InputFormatError(f"not a number: {token!r} ({e})", lineno)

        def integer(token: str, lineno: int) -> int:
            try:
                return int(token)
            except ValueError:
                raise InputFormatError(f"not an integer: {token!r}", lineno)

        def close_block(lineno: int) -> None:
            if block is None:
                return
            if len(block["rows"]) != s + 1 or block["Q"] is None or block["E"] is None:
                raise InputFormatError(f"block n {block['n']} needs {s + 1} rows, Q and E", lineno)
            data["indices"].append(block["n"])
            data["matrices"].append(block["rows"])
            data["Q"].append(block["Q"])
            data["E"].append(block["E"])

        for lineno, raw in enumerate(text.splitlines(), start=1):
            last_line = lineno
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            if head == "s":
                if s is not None or len(rest) != 1:
                    raise InputFormatError("expected a single 's <dim>' header", lineno)
                s = integer(rest[0], lineno)
                if s < 1:
                    raise InputFormatError("dimension must be positive", lineno)
                continue
            if s is None:
                raise InputFormatError("the first directive must be 's <dim>'", lineno)
            if head == "mode":
                if len(rest) != 1 or rest[0] not in (m.value for m in ApproxMode):
                    raise InputFormatError("mode must be typeI or typeII", lineno)
                data["mode"] = ApproxMode(rest[0])
            elif head == "theta":
                if len(rest) != 2:
                    raise InputFormatError("theta needs <lo> <hi>", lineno)
                data["theta"].append((number(rest[0], lineno), number(rest[1], lineno)))
            elif head == "geometric":
                if len(rest) != 4:
                    raise InputFormatError("geometric needs <a> <b> <alpha> <beta>", lineno)
                try:
                    data["geometric"] = GeometricRates(**dict(zip(("a", "b", "alpha", "beta"), rest)))
                except ValidationError as e:
                    raise InputFormatError(f"invalid geometric rates: {e.errors()[0]['msg']}", lineno)
            elif head == "point":
                data["point"] = [integer(tok, lineno) for tok in rest]
            elif head == "n":
                if len(rest) != 1:
                    raise InputFormatError("expected 'n <idx>'", lineno)
                close_block(lineno)
                block = {"n": integer(rest[0], lineno), "rows": [], "Q": None, "E": None}
            elif head in ("Q", "E"):
                if block is None or len(rest) != 1:
                    raise InputFormatError(f"'{head} <decimal>' must follow an n block", lineno)
                block[head] = number(rest[0], lineno)
            else:
                if block is None:
                    raise InputFormatError(f"unexpected directive {head!r}", lineno)
                if block["Q"] is not None or block["E"] is not None:
                    raise InputFormatError("matrix rows must precede Q and E", lineno)
                row = [integer(tok, lineno) for tok in line.split()]
                if len(row) != s + 1:
                    raise InputFormatError(f"row needs {s + 1} integers, got {len(row)}", lineno)
                block["rows"].append(row)

        if s is None:
            raise InputFormatError("empty input: missing 's <dim>'", last_line or None)
        close_block(last_line)
        data["s"] = s
        try:
            parsed = CriterionInput(**data)
        except ValidationError as e:
            raise InputFormatError(f"invalid matrix sequence: {e.errors()[0]['msg']}", last_line)
        self.logger.info("Matrix file parsed", path=str(self.path), s=s, matrices=len(parsed.indices))
        return parsed
