import random

import pytest
from hypothesis import given, settings

import props
from randgen import N, TABLE, homogeneous_fields, rand_homogeneous, seeds
from wallcross import (
    FloerClass,
    PolyVectorField,
    correspondence,
    format_floer,
    format_polyvector,
    hf_bracket,
    interior_dW,
    iota_gamma,
    parse_expression,
    parse_floer,
    parse_polyvector,
    schouten,
    wedge,
)
from wallcross.catalog import build_main_example
from wallcross.polyvector import floer_from_polyvector

T = TABLE


def V(text):
    return parse_polyvector(text, T, N)


def H(text):
    return parse_floer(text, T, N)


def E(i):
    return tuple(1 if k == i else 0 for k in range(1, N + 1))


W = build_main_example().diagram.charts


def test_wedge_examples():
    assert wedge(V("d1"), V("d2")) == -wedge(V("d2"), V("d1"))
    assert wedge(V("d1"), V("d2")) == V("d1^d2")
    assert wedge(V("d1"), V("d1")).is_zero()
    assert wedge(V("z1*d1"), V("z2*d2")) == V("z1*z2*d1^d2")


def test_mixed_degree_and_homogeneous_parts():
    P = V("z1 + d1 + 2*d2^d3")
    assert P.degrees() == {0, 1, 2}
    assert not P.is_homogeneous()
    assert P.homogeneous(2) == V("2*d2^d3")
    with pytest.raises(ValueError):
        P.degree()


def test_interior_examples():
    w2 = V("qp*qpp*z4*d1^d2")
    assert interior_dW(W["--"], w2) == V("qp*qpp*z4*(z1*d2 - z2*d1)")
    assert interior_dW(W["--"], V("z3 + q")).is_zero()
    assert interior_dW(W["+-"], V("qp*qpp*z1*z4*d2")) == V("qp*qpp*z1*z2*z4")


def test_schouten_examples():
    assert schouten(V("z1*d1"), V("z2*d2")).is_zero()
    assert schouten(V("d1^d2"), V("d3")).is_zero()
    assert schouten(V("z2*d1"), V("z1*d2")) == V("z1*z2*d2 - z1*z2*d1")


def test_schouten_cutoff_drops_high_terms():
    P, Q = V("q*z2*d1"), V("qp*z1*d2")
    assert schouten(P, Q, cutoff=1).is_zero()
    assert schouten(P, Q, cutoff=3) == schouten(P, Q)


def test_partial_calculation_display():
    # the negated bracket equals g P ^ i_{df} Q + (-1)^p f i_{dg} P ^ Q
    rng = random.Random(1)
    for _ in range(30):
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        f, g = parse_expression("z1*z3^-1 + q*z2", T, N), parse_expression("z2*z4 - qp*z1^-1", T, N)
        I = tuple(sorted(rng.sample(range(1, N + 1), p)))
        J = tuple(sorted(rng.sample(range(1, N + 1), q)))
        P, Q = PolyVectorField.basis(N, T, *I), PolyVectorField.basis(N, T, *J)
        lhs = -schouten(P * f, Q * g)
        rhs = (P ^ interior_dW(f, Q)) * g + (interior_dW(g, P) ^ Q) * f * props.sign(p)
        assert lhs == rhs


def test_hf_bracket_examples():
    a, b = FloerClass.term(N, T, E(1), (1,)), FloerClass.term(N, T, E(2), (2,))
    assert not hf_bracket(a, b)
    a, b = FloerClass.term(N, T, E(1), (2,)), FloerClass.term(N, T, E(2), (1,))
    expected = FloerClass.term(N, T, (1, 1, 0, 0), (2,)) - FloerClass.term(N, T, (1, 1, 0, 0), (1,))
    assert hf_bracket(a, b) == expected
    assert correspondence(expected) == V("z1*z2*(d2 - d1)")


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_hf_bracket_symmetric_on_even_degree(seed):
    rng = random.Random(seed)
    x = props.rand_floer_term(rng, rng.choice([0, 2]))
    y = props.rand_floer_term(rng, rng.choice([0, 2]))
    assert hf_bracket(x, y) == hf_bracket(y, x)


def test_iota_gamma_examples():
    g12 = FloerClass.term(N, T, (0,) * N, (1, 2))
    assert iota_gamma(E(1), g12) == FloerClass.term(N, T, (0,) * N, (2,))
    assert iota_gamma(E(2), g12) == FloerClass.term(N, T, (0,) * N, (1,), -1)
    assert not iota_gamma((3, 1, 0, 0), FloerClass.term(N, T, (0,) * N))
    with pytest.raises(ValueError):
        iota_gamma((1, 0), g12)


def test_correspondence_examples():
    gamma = (2, -1, 0, 1)
    assert correspondence(FloerClass.term(N, T, gamma, (1,))) == V("z1^2*z2^-1*z4*d1")
    assert correspondence(FloerClass(N, T)).is_zero()


@settings(max_examples=100, deadline=None)
@given(homogeneous_fields())
def test_correspondence_bijective(P):
    assert correspondence(floer_from_polyvector(P)) == P


def test_floer_term_orders_indices():
    assert FloerClass.term(N, T, E(1), (2, 1)) == -FloerClass.term(N, T, E(1), (1, 2))
    assert not FloerClass.term(N, T, E(1), (2, 2))


def test_formatting_round_trip():
    P = V("-1/2*qp*z1^-1*d1^d3 + z2 + q*d4")
    assert parse_polyvector(format_polyvector(P), T, N) == P
    a = H("z1*z2^-1*g1^g2 - 3*qpp*g4")
    assert parse_floer(format_floer(a), T, N) == a


def test_dimension_checks():
    with pytest.raises(ValueError):
        schouten(V("d1"), PolyVectorField.basis(3, T, 1))
    with pytest.raises(ValueError):
        interior_dW(parse_expression("z1", T, 3), V("d1"))


@pytest.mark.parametrize("name", sorted(props.PROPERTIES))
def test_bracket_properties(name):
    check = props.PROPERTIES[name]
    failures = [s for s in range(40) if not check(random.Random(s))]
    assert failures == []


def test_iota_is_a_derivation():
    assert all(props.iota_derivation(random.Random(s)) for s in range(60))


@settings(max_examples=60, deadline=None)
@given(homogeneous_fields(), homogeneous_fields())
def test_bracket_degree(P, Q):
    B = schouten(P, Q)
    if B:
        assert B.degree() == P.degree() + Q.degree() - 1


def test_random_homogeneous_is_homogeneous():
    rng = random.Random(0)
    for d in range(4):
        assert rand_homogeneous(rng, d).degrees() <= {d}
