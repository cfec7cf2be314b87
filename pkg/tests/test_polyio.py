from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyenum import shapes
from polyenum.errors import ParseError, ValidationError
from polyenum.polyio import (
    Representation,
    format_rational,
    parse,
    parse_with_diagnostics,
    serialize,
    validate,
)

CUBE = """cube
H-representation
begin
6 4 rational
1 1 0 0
1 -1 0 0
1 0 1 0
1 0 -1 0
1 0 0 1
1 0 0 -1
end
"""


def test_parse_cube():
    rep = parse(CUBE)
    assert (rep.kind, rep.m, rep.n, rep.name) == ("H", 6, 4, "cube")
    assert rep.rows[1] == (1, -1, 0, 0)
    assert parse(serialize(rep)) == rep


def test_parse_generated_benchmark_sizes():
    perm10 = parse(serialize(shapes.permutahedron(10)))
    assert (perm10.kind, perm10.m, perm10.n, len(perm10.linearity)) == ("H", 1023, 11, 1)
    cp6 = parse(serialize(shapes.cut_vectors(6)))
    assert (cp6.kind, cp6.m, cp6.n) == ("V", 32, 16)


def test_crlf_bytes_and_rationals():
    text = "V-representation\r\nbegin\r\n2 3 rational\r\n1 1/2 -3/6\r\n1 0 4/2\r\nend\r\n"
    rep = parse(text.encode())
    assert rep.rows == ((1, Fraction(1, 2), Fraction(-1, 2)), (1, 0, 2))
    assert "\r" not in serialize(rep)


def test_format_rational():
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(Fraction(3, 1)) == "3"


def test_23_digit_coefficients_survive():
    rep = shapes.cyclic(30, 15)
    text = serialize(rep)
    assert str(30**15) in text and len(str(30**15)) == 23
    assert parse(text) == rep


def test_linearity_and_trailing_options():
    text = "H-representation\nlinearity 1 2\nbegin\n2 2 rational\n1 1\n0 1\nend\nprintcobasis\n"
    rep, diag = parse_with_diagnostics(text)
    assert rep.linearity == {2}
    assert diag.warnings and "printcobasis" in diag.warnings[0]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("H-representation\n2 2 rational\n1 1\n0 1\nend\n", "before 'begin'"),
        ("H-representation\nbegin\n2 2 rational\n1 1\n0 1\n", "missing 'end'"),
        ("H-representation\nbegin\n2 2 rational\n1 1\nend\n", "expected 2 data rows"),
        ("H-representation\nbegin\n1 2 rational\n1 1 1\nend\n", "expected 2 entries"),
        ("H-representation\nbegin\n1 2 rational\n1 1/0\nend\n", "zero denominator"),
        ("H-representation\nbegin\n1 2 rational\n1 0.5\nend\n", "decimal"),
        ("H-representation\nbegin\n1 2 rational\n1 x\nend\n", "malformed"),
        ("Q-representation\nfoo\nbegin\n", "unknown kind"),
        ("H-representation\nlinearity 2 1\nbegin\n1 2 rational\n1 1\nend\n", "linearity count"),
        ("H-representation\nbegin\n1 2 real\n1 1\nend\n", "malformed header"),
    ],
)
def test_parse_errors_carry_line_numbers(text, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert fragment in str(info.value)
    assert info.value.line is not None
    assert str(info.value).startswith("line ")


def test_validate_rules():
    bad = Representation.make("V", [[2, 0, 0], [1, 1, 1]])
    assert "leading column must be 0 or 1" in validate(bad).errors
    dup = validate(Representation.make("H", [[1, 1], [1, 1]]))
    assert dup.ok and dup.warnings
    lin = validate(Representation.make("H", [[1, 1]], linearity=[2]))
    assert not lin.ok and "out of range" in lin.errors[0]
    ray = validate(Representation.make("V", [[0, 1], [1, 0]]))
    assert not ray.ok
    with pytest.raises(ValidationError):
        ray.raise_for_errors()
    assert not validate(Representation.make("H", [[1]])).ok


tokens = st.builds(Fraction, st.integers(-(10**30), 10**30), st.integers(1, 10**6))


@st.composite
def representations(draw):
    kind = draw(st.sampled_from("HV"))
    n = draw(st.integers(2, 6))
    m = draw(st.integers(1, 7))
    rows = []
    for _ in range(m):
        lead = Fraction(1) if kind == "V" else draw(tokens)
        rows.append([lead] + draw(st.lists(tokens, min_size=n - 1, max_size=n - 1)))
    lin = draw(st.sets(st.integers(1, m))) if kind == "H" else set()
    name = draw(st.sampled_from(["", "x", "my polytope", "c30-15"]))
    return Representation.make(kind, rows, lin, name)


@given(representations())
def test_round_trip_property(rep):
    text = serialize(rep)
    assert parse(text) == rep
    assert serialize(parse(text)) == text


@settings(max_examples=300)
@given(st.binary(max_size=200))
def test_parse_is_total_on_bytes(data):
    try:
        parse(data)
    except ParseError:
        pass


@settings(max_examples=300)
@given(
    st.lists(
        st.sampled_from(["H-representation", "V-representation", "begin", "end", "2 3 rational", "1 2 3", "1 1/2 0", "linearity 1 1", "", "x"]),
        max_size=10,
    )
)
def test_parse_is_total_on_line_soup(lines):
    try:
        parse("\n".join(lines))
    except ParseError:
        pass
