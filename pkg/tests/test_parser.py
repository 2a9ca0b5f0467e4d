import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings

import oracle
from randgen import N, TABLE, homogeneous_fields, laurent_polys, rand_coeff
from wallcross import (
    LaurentPoly,
    ParseError,
    format_poly,
    format_polyvector,
    parse_expression,
    parse_floer,
    parse_polyvector,
    parse_rational,
)
from wallcross.catalog import build_main_example
from wallcross.parser import parse_param_monomial, tokenize

T = TABLE


def P(text):
    return parse_expression(text, T, N)


def test_examples():
    W = build_main_example().diagram.charts
    assert P("z1 + z2 + (1 + q^2 + q*z3 + q*z3^-1)*z4") == W["--"]
    assert P("0") == LaurentPoly.zero(N, T)
    img = build_main_example().diagram.wall("+0").substitution.image(2)
    assert P("z2*(1 + q*qp*z4 + qp*z3*z4 + qp*qpp*z1*z4)") == img


def test_juxtaposition_and_rationals():
    assert P("2 q z1") == P("2*q*z1")
    assert P("-1/2*z1 + 3/6") == P("1/2 - 1/2 z1")
    assert P("2^3") == P("8")
    assert P("(z1*z2)^-2") == P("z1^-2*z2^-2")


@pytest.mark.parametrize(
    "text,column",
    [("z1 +", 5), ("z5", 1), ("foo", 1), ("z1 ^ q", 6), ("q^-1", 2), ("1/0", 3), ("z1 & 2", 4), ("(z1", 4),
     ("(z1+z2)^-1", 8), ("d1", 1)],
)
def test_errors_carry_positions(text, column):
    with pytest.raises(ParseError) as info:
        P(text)
    assert info.value.pos == column - 1
    assert f"column {column}" in str(info.value)


def test_error_line_numbers():
    err = ParseError("boom", "x", 2).at_line(7)
    assert str(err) == "line 7, column 3: boom"


def test_tokenize():
    kinds = [t.kind for t in tokenize("qp*z1^-2 ")]
    assert kinds == ["ident", "op", "ident", "op", "op", "int", "end"]


def test_polyvector_parsing():
    assert parse_polyvector("qp*qpp*z4*d1^d2", T, N) == parse_polyvector("qp*qpp*z4*d1*d2", T, N)
    assert parse_polyvector("d2^d1", T, N) == -parse_polyvector("d1^d2", T, N)
    assert parse_polyvector("z1", T, N).degrees() == {0}
    with pytest.raises(ParseError):
        parse_polyvector("d1^-1", T, N)


def test_floer_parsing():
    a = parse_floer("z1*g2 - z2*g1", T, N)
    assert len(a.terms) == 2
    with pytest.raises(ParseError):
        parse_floer("d1", T, N)


def test_parse_rational():
    assert parse_rational(" 20 ") == 20
    assert parse_rational("-17/12") == Fraction(-17, 12)
    with pytest.raises(ParseError):
        parse_rational("0.5")


def test_parse_param_monomial():
    assert parse_param_monomial("qp*qpp", T) == (0, 1, 1)
    assert parse_param_monomial("q^2", T) == (2, 0, 0)
    for bad in ("qp + qpp", "2*qp", "1", "z1"):
        with pytest.raises(ParseError):
            parse_param_monomial(bad, T)


@settings(max_examples=150, deadline=None)
@given(laurent_polys(terms=5, zrange=3))
def test_emit_parse_round_trip(f):
    text = format_poly(f)
    assert P(text) == f
    assert format_poly(P(text)) == text


@settings(max_examples=100, deadline=None)
@given(homogeneous_fields())
def test_polyvector_round_trip(V):
    assert parse_polyvector(format_polyvector(V), T, N) == V


def _random_text(rng, depth=0):
    if depth > 2 or rng.random() < 0.3:
        atom = rng.choice(["z1", "z2", "z3", "z4", "q", "qp", "qpp", str(rand_coeff(rng))])
        return f"({atom})" if "/" in atom or atom.startswith("-") else atom
    a, b = _random_text(rng, depth + 1), _random_text(rng, depth + 1)
    op = rng.choice(["+", "-", "*", "^"])
    if op == "^":
        return f"({a})^{rng.randint(0, 3)}"
    return f"({a} {op} {b})"


def test_parser_agrees_with_sympy():
    rng = random.Random(2024)
    for _ in range(150):
        text = _random_text(rng)
        assert sp.expand(oracle.to_sympy(P(text)) - oracle.from_text(text, T)) == 0, text
