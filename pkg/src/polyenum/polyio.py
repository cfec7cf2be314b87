"""Reading and writing H-/V-representations in the lrs-style text format.

Grammar::

    [name]
    H-representation | V-representation
    [linearity k i1 ... ik]
    begin
    m n rational
    <m rows of n integer or p/q tokens>
    end
    [trailing option lines, ignored with a warning]

Blank lines are skipped everywhere.  Comments inside the body and decimal
tokens are rejected.  CRLF input is accepted; output always uses LF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError

_TOKEN = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][+-]?\d+)$")
_KINDS = {"h-representation": "H", "v-representation": "V"}
_KEYWORDS = ("h-representation", "v-representation", "linearity", "begin", "end")


@dataclass(frozen=True)
class Representation:
    """An H- or V-representation: an m x n rational matrix plus linearity rows.

    H rows ``(a0, a1, ..., a_{n-1})`` mean ``a0 + a.x >= 0`` (``= 0`` for
    linearity rows).  V rows start with 1 for a vertex.
    """

    kind: str
    rows: tuple[tuple[Fraction, ...], ...]
    linearity: frozenset[int] = frozenset()
    name: str = ""

    @classmethod
    def make(cls, kind: str, rows: Iterable[Sequence], linearity: Iterable[int] = (), name: str = "") -> "Representation":
        return cls(
            kind=kind.upper(),
            rows=tuple(tuple(Fraction(x) for x in row) for row in rows),
            linearity=frozenset(linearity),
            name=name,
        )

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def dim(self) -> int:
        """Number of variables (n - 1)."""
        return self.n - 1

    def inequalities(self) -> list[tuple[Fraction, ...]]:
        return [r for i, r in enumerate(self.rows, start=1) if i not in self.linearity]

    def equations(self) -> list[tuple[Fraction, ...]]:
        return [r for i, r in enumerate(self.rows, start=1) if i in self.linearity]

    def __str__(self) -> str:
        return serialize(self)


@dataclass
class Diagnostics:
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self) -> None:
        if self.errors:
            raise ValidationError(self)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_row(row: Sequence[Fraction]) -> str:
    return " ".join(format_rational(x) for x in row)


def parse_token(tok: str, line: int | None = None) -> Fraction:
    m = _TOKEN.match(tok)
    if m is None:
        if _DECIMAL.match(tok):
            raise ParseError(f"decimal token {tok!r} not accepted (exact input only)", line)
        raise ParseError(f"malformed rational {tok!r}", line)
    try:
        num = int(m.group(1))
        den = 1 if m.group(2) is None else int(m.group(2))
    except ValueError as exc:
        raise ParseError(f"cannot read {tok[:20]!r}...: {exc}", line) from None
    if den == 0:
        raise ParseError(f"zero denominator in {tok!r}", line)
    return Fraction(num, den)


def parse_row(text: str, line: int | None = None) -> tuple[Fraction, ...]:
    return tuple(parse_token(t, line) for t in text.split())


def parse(data) -> Representation:
    rep, _ = parse_with_diagnostics(data)
    return rep


def parse_with_diagnostics(data) -> tuple[Representation, Diagnostics]:
    """Parse text or bytes; raises :class:`ParseError` on malformed input."""
    if isinstance(data, (bytes, bytearray, memoryview)):
        try:
            data = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    diag = Diagnostics()
    lines = data.split("\n")
    name = None
    kind = None
    linearity: list[int] | None = None
    i = 0

    def next_nonblank(j):
        while j < len(lines) and not lines[j].strip():
            j += 1
        return j

    # preamble: name, kind, linearity, begin
    while True:
        i = next_nonblank(i)
        if i >= len(lines):
            raise ParseError("missing 'begin'", i)
        text = lines[i].strip()
        low = text.lower()
        lineno = i + 1
        i += 1
        if kind is None:
            if low in _KINDS:
                kind = _KINDS[low]
            elif low.startswith(_KEYWORDS):
                raise ParseError(f"expected representation kind line before {text!r}", lineno)
            elif name is None:
                name = text
            else:
                raise ParseError(f"unknown kind line {text!r}", lineno)
            continue
        if low.startswith("linearity"):
            if linearity is not None:
                raise ParseError("duplicate linearity line", lineno)
            toks = text.split()[1:]
            try:
                nums = [int(t) for t in toks]
            except ValueError:
                raise ParseError(f"malformed linearity line {text!r}", lineno) from None
            if not nums or nums[0] != len(nums) - 1:
                raise ParseError("linearity count does not match listed indices", lineno)
            if len(set(nums[1:])) != len(nums) - 1:
                raise ParseError("repeated linearity index", lineno)
            linearity = nums[1:]
            continue
        if low == "begin":
            break
        raise ParseError(f"unexpected line {text!r} before 'begin'", lineno)

    i = next_nonblank(i)
    if i >= len(lines):
        raise ParseError("missing 'm n rational' header", i)
    header = lines[i].split()
    lineno = i + 1
    i += 1
    if len(header) != 3 or header[2].lower() not in ("rational", "integer"):
        raise ParseError(f"malformed header {' '.join(header)!r} (expected 'm n rational')", lineno)
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("row/column counts must be integers", lineno) from None
    if m < 1 or n < 1:
        raise ParseError("row/column counts must be positive", lineno)

    rows = []
    while True:
        i = next_nonblank(i)
        if i >= len(lines):
            raise ParseError("missing 'end'", i)
        text = lines[i].strip()
        lineno = i + 1
        i += 1
        if text.lower() == "end":
            break
        if len(rows) == m:
            raise ParseError(f"more than {m} data rows", lineno)
        row = parse_row(text, lineno)
        if len(row) != n:
            raise ParseError(f"expected {n} entries, found {len(row)}", lineno)
        rows.append(row)
    if len(rows) != m:
        raise ParseError(f"expected {m} data rows, found {len(rows)}", lineno)
    for j in range(i, len(lines)):
        if lines[j].strip():
            diag.warnings.append(f"line {j + 1}: ignored option {lines[j].strip()!r}")

    rep = Representation(
        kind=kind,
        rows=tuple(rows),
        linearity=frozenset(linearity or ()),
        name=name or "",
    )
    return rep, diag


def serialize(rep: Representation) -> str:
    """Canonical text form; ``parse(serialize(rep)) == rep``."""
    out = []
    if rep.name:
        out.append(rep.name)
    out.append(f"{rep.kind}-representation")
    if rep.linearity:
        idx = sorted(rep.linearity)
        out.append("linearity " + " ".join(str(x) for x in [len(idx), *idx]))
    out.append("begin")
    out.append(f"{rep.m} {rep.n} rational")
    out.extend(format_row(row) for row in rep.rows)
    out.append("end")
    return "\n".join(out) + "\n"


def validate(rep: Representation) -> Diagnostics:
    diag = Diagnostics()
    if rep.kind not in ("H", "V"):
        diag.errors.append(f"unknown representation kind {rep.kind!r}")
    if rep.m < 1:
        diag.errors.append("at least one row is required")
        return diag
    if rep.n < 2:
        diag.errors.append("at least two columns are required (n >= 2)")
    if any(len(r) != rep.n for r in rep.rows):
        diag.errors.append("rows have differing lengths")
    for i in sorted(rep.linearity):
        if not 1 <= i <= rep.m:
            diag.errors.append(f"linearity index {i} out of range 1..{rep.m}")
    if rep.name:
        low = rep.name.strip().lower()
        if "\n" in rep.name or "\r" in rep.name or rep.name != rep.name.strip():
            diag.errors.append("name must be a single line without surrounding whitespace")
        elif low in _KINDS or low.startswith(_KEYWORDS):
            diag.errors.append(f"name {rep.name!r} collides with a format keyword")
    if rep.kind == "V":
        lead = [r[0] for r in rep.rows]
        if any(x not in (0, 1) for x in lead):
            diag.errors.append("leading column must be 0 or 1")
        elif any(x == 0 for x in lead):
            diag.errors.append("extreme rays (leading 0) are not supported: input must be a polytope")
        if rep.linearity:
            diag.errors.append("linearity rows are not supported in a V-representation")
    seen = {}
    for i, row in enumerate(rep.rows, start=1):
        if row in seen:
            diag.warnings.append(f"row {i} duplicates row {seen[row]}")
        else:
            seen[row] = i
    return diag
