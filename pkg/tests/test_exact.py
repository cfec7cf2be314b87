from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyenum import exact, shapes
from polyenum.errors import ArithmeticOverflow, InfeasibleError, ZeroDenominatorError
from polyenum.exact import BigArith, Fixed64, Rational, normalize
from polyenum.polyio import Representation

import oracles as O

small = st.integers(-10**6, 10**6)
nonzero = small.filter(bool)
rationals = st.fractions(max_denominator=1000).map(lambda x: x.limit_denominator(1000))
int64 = st.integers(exact.INT64_MIN, exact.INT64_MAX)


def test_normalize_examples():
    assert normalize(2, -4) == Fraction(-1, 2)
    z = normalize(0, 7)
    assert (z.numerator, z.denominator) == (0, 1)
    assert normalize(6, 3) == 2 and normalize(6, 3).denominator == 1


def test_normalize_zero_denominator_is_an_error():
    with pytest.raises(ZeroDenominatorError):
        normalize(1, 0)


@given(small, nonzero)
def test_normalize_is_canonical(a, b):
    r = normalize(a, b)
    assert r * b == a
    assert r.denominator > 0
    from math import gcd

    assert gcd(abs(r.numerator), r.denominator) == 1


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + 0 == a and a * 1 == a
    if a != 0:
        assert a * (1 / a) == 1
    for x in (a + b, a - b, a * b):
        assert isinstance(x, Rational) and x.denominator > 0


@given(int64, int64)
def test_fixed64_agrees_or_raises(a, b):
    for op in ("add", "sub", "mul"):
        big = getattr(BigArith, op)(a, b)
        if exact.INT64_MIN <= big <= exact.INT64_MAX:
            assert getattr(Fixed64, op)(a, b) == big
        else:
            with pytest.raises(ArithmeticOverflow):
                getattr(Fixed64, op)(a, b)


bounded = st.builds(Fraction, st.integers(-(10**6), 10**6), st.integers(1, 10**4))


@given(bounded, bounded)
def test_fixed64_rational_ops_match(a, b):
    assert Fixed64.radd(a, b) == a + b
    assert Fixed64.rsub(a, b) == a - b
    assert Fixed64.rmul(a, b) == a * b
    if b:
        assert Fixed64.rdiv(a, b) == a / b


def test_fixed64_never_wraps_at_the_boundary():
    assert Fixed64.add(exact.INT64_MAX - 1, 1) == exact.INT64_MAX
    with pytest.raises(ArithmeticOverflow):
        Fixed64.neg(exact.INT64_MIN)
    with pytest.raises(ArithmeticOverflow):
        Fixed64.mul(2**32, 2**31)
    with pytest.raises(ZeroDenominatorError):
        Fixed64.rdiv(Fraction(1), Fraction(0))


def test_run_with_mode_hybrid_restarts():
    calls = []

    def compute(checked):
        calls.append(checked)
        if checked:
            raise ArithmeticOverflow("too big")
        return "done"

    assert exact.run_with_mode("hybrid", compute) == "done"
    assert calls == [True, False]
    with pytest.raises(ArithmeticOverflow):
        exact.run_with_mode("fixed64", compute)
    with pytest.raises(ValueError):
        exact.ArithmeticMode.parse("float")


def test_rank_examples():
    I3 = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert exact.rank(I3) == 3
    assert exact.rank([[Fraction(0)] * 5 for _ in range(4)]) == 0
    # homogenized moment-curve points span R^5
    assert exact.rank(shapes.cyclic(10, 4).rows) == 5


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3).map(Fraction), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices, st.lists(st.fractions(min_value=-5, max_value=5).filter(bool), min_size=5, max_size=5))
def test_rank_transpose_and_scaling(M, scales):
    r = exact.rank(M)
    assert r == exact.rank(exact.transpose(M))
    scaled = [[x * s for x in row] for row, s in zip(M, scales)]
    assert exact.rank(scaled) == r
    assert r == len(exact.rref(M)[1])


@given(matrices)
def test_nullspace_is_orthogonal(M):
    ker = exact.nullspace(M)
    assert len(ker) == len(M[0]) - exact.rank(M)
    for v in ker:
        for row in M:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_eliminate_without_linearities_is_identity():
    cube = shapes.hypercube(3)
    reduced, back = exact.eliminate_linearities(cube)
    assert reduced == cube
    assert back((Fraction(1), Fraction(2), Fraction(3))) == (1, 2, 3)


def test_eliminate_permutahedron3():
    rep = shapes.permutahedron(3)
    reduced, back = exact.eliminate_linearities(rep)
    assert reduced.n - 1 == 2 and reduced.m == 6 and not reduced.linearity
    verts = O.brute_vertices(reduced.rows)
    lifted = {(Fraction(1),) + back(v[1:]) for v in verts}
    assert lifted == O.permutation_points(3)


def test_eliminate_fully_determined():
    rep = Representation.make("H", [[-1, 1, 0], [-1, 0, 1], [0, 1, 0], [5, -1, -1]], linearity=[1, 2])
    reduced, back = exact.eliminate_linearities(rep)
    assert back.source_dim == 0
    assert back(()) == (1, 1)
    assert all(row[0] >= 0 for row in reduced.rows)


def test_eliminate_inconsistent_equations():
    rep = Representation.make("H", [[-1, 1], [-2, 1], [0, 1]], linearity=[1, 2])
    with pytest.raises(InfeasibleError):
        exact.eliminate_linearities(rep)


def test_eliminate_reports_dependent_rows():
    rep = Representation.make("H", [[-1, 1, 1], [-2, 2, 2], [0, 1, 0], [0, 0, 1]], linearity=[1, 2])
    reduced, back = exact.eliminate_linearities(rep)
    assert back.dropped_rows == (2,)
    assert reduced.m == 2


@settings(max_examples=60)
@given(
    st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=2),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2),
)
def test_back_map_satisfies_equations_exactly(eq_rows, z):
    # equations built to pass through the point (1, 1, 1)
    rows = [[-sum(r[1:])] + r[1:] for r in eq_rows]
    rep = Representation.make("H", rows + [[1, 1, 0, 0]], linearity=range(1, len(rows) + 1))
    reduced, back = exact.eliminate_linearities(rep)
    zz = [Fraction(v) for v in z[: back.source_dim]] + [Fraction(0)] * max(0, back.source_dim - 2)
    x = back(zz)
    for r in rows:
        assert r[0] + sum(a * b for a, b in zip(r[1:], x)) == 0


def test_affine_hull_of_planar_points():
    pts = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    eqs, coords = exact.affine_hull([[Fraction(x) for x in p] for p in pts])
    assert len(eqs) == 1 and len(coords) == 2
    for p in pts:
        assert eqs[0][0] + sum(a * b for a, b in zip(eqs[0][1:], p)) == 0


def test_primitive_and_integer_rows():
    assert exact.integer_row([Fraction(1, 2), Fraction(1, 3)]) == [3, 2]
    assert exact.primitive([4, -6, 0]) == [2, -3, 0]
    assert exact.primitive_rational([Fraction(2, 3), Fraction(4, 3)]) == (1, 2)
