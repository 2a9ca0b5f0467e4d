from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallcross import INF, NovikovScalar, ParameterTable
from wallcross.catalog import compact_table, main_table
from wallcross.novikov import format_scalar, scalar_add, scalar_mul, truncate, valuation

T = main_table()


def S(**powers):
    return NovikovScalar.monomial(T, 1, **powers)


ONE = NovikovScalar.constant(T)


def test_default_weights():
    assert T.weights == {"q": 1, "qp": Fraction(2, 3), "qpp": Fraction(3, 4)}
    assert compact_table().weights["q4"] == 2


@pytest.mark.parametrize("weights", [{"q": 0}, {"q": -1}, {"q": "1/2", "q ": 1}])
def test_table_rejects_bad_weights(weights):
    with pytest.raises(ValueError):
        ParameterTable(weights)


def test_table_rejects_duplicates():
    with pytest.raises(ValueError):
        ParameterTable([("q", 1), ("q", 2)])


def test_floats_rejected():
    with pytest.raises(TypeError):
        ParameterTable({"q": 0.5})
    with pytest.raises(TypeError):
        NovikovScalar.constant(T, 0.5)


def test_add_examples():
    q = S(q=1)
    assert scalar_add(q, q) == 2 * q
    qq = S(qp=1, qpp=1)
    assert scalar_add(qq, NovikovScalar.zero(T)) == qq
    assert (ONE + S(q=2)) + S(q=2) == ONE + 2 * S(q=2)


def test_mul_examples():
    assert scalar_mul(S(q=1), S(q=1)) == S(q=2)
    assert scalar_mul(S(qp=1), S(qpp=1)) == S(qp=1, qpp=1)
    assert (ONE + S(q=2)) * S(q=1) == S(q=1) + S(q=3)


def test_valuation_examples():
    assert valuation(S(q=2), T) == 2
    assert valuation(S(qp=1, qpp=1), T) == Fraction(17, 12)
    assert valuation(NovikovScalar.zero(T), T) == INF


def test_truncate_examples():
    assert truncate(ONE + S(q=2), 2, T) == ONE
    assert truncate(S(qp=1, qpp=1), 1, T).is_zero()
    x = ONE + S(qp=3)
    assert truncate(x, INF, T) == x


def test_mismatched_tables():
    with pytest.raises(ValueError):
        S(q=1) + NovikovScalar.constant(compact_table())


def test_format():
    assert format_scalar(ONE + S(q=2) - Fraction(1, 2) * S(qp=1)) == "1 - 1/2*qp + q^2"


scalars = st.dictionaries(
    st.tuples(*[st.integers(0, 3)] * 3),
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
    max_size=4,
).map(lambda d: NovikovScalar(T, d))
cutoffs = st.fractions(min_value=0, max_value=6, max_denominator=12)


@settings(max_examples=150)
@given(scalars, scalars)
def test_valuation_multiplicative(a, b):
    if a and b:
        assert (a * b).valuation() == a.valuation() + b.valuation()


@settings(max_examples=150)
@given(scalars, scalars)
def test_valuation_ultrametric(a, b):
    s = a + b
    assert s.valuation() >= min(a.valuation(), b.valuation())
    if a.valuation() != b.valuation():
        assert s.valuation() == min(a.valuation(), b.valuation())


@settings(max_examples=150)
@given(scalars, scalars, cutoffs)
def test_truncate_idempotent_and_additive(a, b, c):
    assert a.truncate(c).truncate(c) == a.truncate(c)
    assert (a + b).truncate(c) == a.truncate(c) + b.truncate(c)


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
