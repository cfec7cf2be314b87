"""Exact rational arithmetic: scalars, dense matrices, rank, linearity elimination.

Rationals are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator.  Matrices are plain sequences of rows.
Engines work on integer matrices obtained by scaling each row, so most of
the heavy lifting here is integer fraction-free elimination.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

from .errors import ArithmeticOverflow, InfeasibleError, ZeroDenominatorError

log = logging.getLogger(__name__)

Rational = Fraction
RMatrix = Sequence[Sequence[Fraction]]

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

T = TypeVar("T")


def normalize(num: int, den: int) -> Fraction:
    """Canonical rational equal to ``num/den``."""
    if den == 0:
        raise ZeroDenominatorError(f"zero denominator in {num}/{den}")
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# Arithmetic modes


class ArithmeticMode(str, enum.Enum):
    FIXED64_CHECKED = "fixed64"
    ARBITRARY_PRECISION = "big"
    HYBRID = "hybrid"

    @classmethod
    def parse(cls, value) -> "ArithmeticMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown arithmetic mode {value!r} (expected fixed64, big or hybrid)") from None


def check64(x: int) -> int:
    if x < INT64_MIN or x > INT64_MAX:
        raise ArithmeticOverflow(f"value {x} does not fit in 64 bits")
    return x


class Fixed64:
    """Checked 64-bit integer and rational operations.

    Every intermediate a 64-bit implementation would hold is range checked,
    so results either agree exactly with arbitrary precision or raise
    :class:`ArithmeticOverflow`.
    """

    checked = True

    @staticmethod
    def add(a: int, b: int) -> int:
        return check64(check64(a) + check64(b))

    @staticmethod
    def sub(a: int, b: int) -> int:
        return check64(check64(a) - check64(b))

    @staticmethod
    def mul(a: int, b: int) -> int:
        return check64(check64(a) * check64(b))

    @staticmethod
    def div_exact(a: int, b: int) -> int:
        check64(a), check64(b)
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} is not divisible by {b}")
        return check64(q)

    @staticmethod
    def neg(a: int) -> int:
        return check64(-check64(a))

    @classmethod
    def rational(cls, num: int, den: int) -> Fraction:
        value = normalize(check64(num), check64(den))
        check64(value.numerator), check64(value.denominator)
        return value

    @classmethod
    def radd(cls, a: Fraction, b: Fraction) -> Fraction:
        num = cls.add(cls.mul(a.numerator, b.denominator), cls.mul(b.numerator, a.denominator))
        return cls.rational(num, cls.mul(a.denominator, b.denominator))

    @classmethod
    def rsub(cls, a: Fraction, b: Fraction) -> Fraction:
        num = cls.sub(cls.mul(a.numerator, b.denominator), cls.mul(b.numerator, a.denominator))
        return cls.rational(num, cls.mul(a.denominator, b.denominator))

    @classmethod
    def rmul(cls, a: Fraction, b: Fraction) -> Fraction:
        return cls.rational(cls.mul(a.numerator, b.numerator), cls.mul(a.denominator, b.denominator))

    @classmethod
    def rdiv(cls, a: Fraction, b: Fraction) -> Fraction:
        if b == 0:
            raise ZeroDenominatorError("division by zero")
        return cls.rational(cls.mul(a.numerator, b.denominator), cls.mul(a.denominator, b.numerator))


class BigArith:
    """Unchecked counterpart of :class:`Fixed64` with the same interface."""

    checked = False

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)

    @staticmethod
    def div_exact(a: int, b: int) -> int:
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} is not divisible by {b}")
        return q

    @staticmethod
    def rational(num: int, den: int) -> Fraction:
        return normalize(num, den)

    radd = staticmethod(lambda a, b: a + b)
    rsub = staticmethod(lambda a, b: a - b)
    rmul = staticmethod(lambda a, b: a * b)

    @staticmethod
    def rdiv(a: Fraction, b: Fraction) -> Fraction:
        if b == 0:
            raise ZeroDenominatorError("division by zero")
        return a / b


def run_with_mode(mode, compute: Callable[[bool], T]) -> T:
    """Run ``compute(checked)`` under an arithmetic mode.

    Hybrid mode first runs the whole computation with 64-bit checks; on
    overflow everything done so far is thrown away and the computation is
    restarted in arbitrary precision.
    """
    mode = ArithmeticMode.parse(mode)
    if mode is ArithmeticMode.ARBITRARY_PRECISION:
        return compute(False)
    if mode is ArithmeticMode.FIXED64_CHECKED:
        return compute(True)
    try:
        return compute(True)
    except ArithmeticOverflow as exc:
        log.info("64-bit overflow (%s); restarting in arbitrary precision", exc)
        return compute(False)


# ---------------------------------------------------------------------------
# Rows and matrices


def lcm_denominators(row: Sequence[Fraction]) -> int:
    den = 1
    for x in row:
        d = Fraction(x).denominator
        den = den * d // math.gcd(den, d)
    return den


def integer_row(row: Sequence[Fraction]) -> list[int]:
    """Scale ``row`` by the positive lcm of its denominators."""
    den = lcm_denominators(row)
    return [int(Fraction(x) * den) for x in row]


def primitive(row: Sequence[int]) -> list[int]:
    """Divide an integer row by the gcd of its entries (kept positive)."""
    g = 0
    for x in row:
        g = math.gcd(g, x)
    if g <= 1:
        return list(row)
    return [x // g for x in row]


def primitive_rational(row: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Canonical positive multiple of ``row``: coprime integer entries."""
    return tuple(Fraction(x) for x in primitive(integer_row(row)))


def transpose(M: RMatrix) -> list[list[Fraction]]:
    return [list(col) for col in zip(*M)]


def rank(M: RMatrix) -> int:
    """Rank over the rationals by Bareiss fraction-free elimination."""
    rows = [integer_row(r) for r in M if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        for i in range(r + 1, len(rows)):
            ri = rows[i]
            a = ri[c]
            rows[i] = [(x * p - a * y) // prev for x, y in zip(ri, pr)]
        prev = p
        r += 1
        if r == len(rows):
            break
    return r


def rref(M: RMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot column list."""
    A = [[Fraction(x) for x in row] for row in M]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def nullspace(M: RMatrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space ``{x : M x = 0}``."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Linearity elimination


@dataclass(frozen=True)
class AffineMap:
    """``x = offset + matrix @ z`` lifting reduced points to original space."""

    offset: tuple[Fraction, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    dropped_rows: tuple[int, ...] = field(default=())

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        eye = tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim))
        return cls(tuple(Fraction(0) for _ in range(dim)), eye)

    @property
    def source_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def __call__(self, z: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(o + sum((a * b for a, b in zip(row, z)), Fraction(0)) for o, row in zip(self.offset, self.matrix))


def eliminate_linearities(rep):
    """Remove the linearity rows of an H-representation.

    Returns ``(reduced, back_map)``: ``reduced`` has no linearities and lives
    in the free variables of the equation system; ``back_map`` lifts its
    points to the original coordinates.  Dependent equations are dropped and
    listed in ``back_map.dropped_rows`` (1-based).
    """
    from .polyio import Representation

    d = rep.n - 1
    if not rep.linearity:
        return rep, AffineMap.identity(d)
    eq_idx = sorted(rep.linearity)
    # a0 + a.x = 0  <=>  a.x = -a0 ; augment with rhs as last column
    aug = [[Fraction(x) for x in rep.rows[i - 1][1:]] + [-Fraction(rep.rows[i - 1][0])] for i in eq_idx]
    R, pivots = rref(aug)
    if d in pivots:
        raise InfeasibleError("linearity rows are inconsistent")
    dropped: tuple[int, ...] = ()
    if len(pivots) < len(eq_idx):
        kept, dropped_list = [], []
        for i in eq_idx:
            if rank(kept + [rep.rows[i - 1]]) > len(kept):
                kept.append(rep.rows[i - 1])
            else:
                dropped_list.append(i)
        dropped = tuple(dropped_list)
        log.warning("dropped dependent linearity rows %s", list(dropped))
    free = [c for c in range(d) if c not in pivots]
    offset = [Fraction(0)] * d
    matrix = [[Fraction(0)] * len(free) for _ in range(d)]
    for row, p in zip(R, pivots):
        offset[p] = row[d]
        for k, f in enumerate(free):
            matrix[p][k] = -row[f]
    for k, f in enumerate(free):
        matrix[f][k] = Fraction(1)
    back = AffineMap(tuple(offset), tuple(tuple(r) for r in matrix), dropped)
    new_rows = []
    for i, row in enumerate(rep.rows, start=1):
        if i in rep.linearity:
            continue
        a0 = Fraction(row[0]) + sum((Fraction(a) * o for a, o in zip(row[1:], offset)), Fraction(0))
        coeffs = [sum((Fraction(row[1 + j]) * matrix[j][k] for j in range(d)), Fraction(0)) for k in range(len(free))]
        new_rows.append(tuple(Fraction(x) for x in integer_row([a0] + coeffs)))
    reduced = Representation(kind="H", rows=tuple(new_rows), linearity=frozenset(), name=rep.name)
    return reduced, back


def affine_hull(points: Sequence[Sequence[Fraction]]):
    """Affine hull of a nonempty point set.

    Returns ``(equations, coords)`` where ``equations`` are rows
    ``(a0, a)`` with ``a0 + a.x = 0`` on every point (a basis of all such
    equations) and ``coords`` is a list of coordinate indices whose
    projection is injective on the hull.
    """
    base = [Fraction(x) for x in points[0]]
    diffs = [[Fraction(x) - b for x, b in zip(p, base)] for p in points[1:]]
    d = len(base)
    if diffs:
        _, coords = rref(diffs)
    else:
        coords = []
    homog = [[Fraction(1)] + [Fraction(x) for x in p] for p in points]
    equations = [primitive_rational(v) for v in nullspace(homog, d + 1)]
    return equations, coords
