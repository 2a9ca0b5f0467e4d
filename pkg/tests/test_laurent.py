import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings

import oracle
from randgen import TABLE, laurent_polys, rand_poly
from wallcross import (
    INF,
    InexactPullbackError,
    LaurentPoly,
    Substitution,
    compose,
    format_poly,
    log_derivative,
    parse_expression,
    pullback,
)
from wallcross.catalog import build_main_example, build_open_mirror
from wallcross.laurent import lp_add, lp_eq, lp_mul

T = TABLE


def P(text):
    return parse_expression(text, T, 4)


def sub(images):
    return Substitution.from_images(4, T, {i: P(e) for i, e in images.items()})


MAIN = build_main_example().diagram
W = MAIN.charts


def test_ring_examples():
    assert lp_mul(P("z1"), P("z1^-1")) == P("1")
    assert (P("z1") + P("z2")) ** 2 == P("z1^2 + 2*z1*z2 + z2^2")
    assert lp_mul(P("q*z3*z4"), P("q*z3^-1*z4")) == P("q^2*z4^2")
    assert lp_eq(lp_add(P("z1"), P("-z1")), LaurentPoly.zero(4, T))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        P("z1") + parse_expression("z1", T, 3)


def test_canonical_form_drops_zeros():
    f = P("z1 + z2 - z1")
    assert len(f) == 1 and f == P("z2")


def test_log_derivative_examples():
    assert log_derivative(P("z1 + z2"), 1) == P("z1")
    assert log_derivative(P("q*z3^-1*z4"), 3) == P("-q*z3^-1*z4")
    assert log_derivative(W["+-"], 2) == P("z2")
    with pytest.raises(IndexError):
        log_derivative(P("z1"), 5)


def test_pullback_main_wall_exact():
    phi = MAIN.walls["-0"].substitution
    assert pullback(W["--"], phi, INF) == W["-+"]


def test_pullback_identity():
    f = P("z1^-2*q + qp*z3 - 4")
    assert pullback(f, Substitution.identity(4, T), INF) == f


def test_pullback_geometric_series():
    # weights q = 1: terms of valuation >= 3 are dropped
    sigma = sub({2: "z2*(1 + q*z4)"})
    got = pullback(P("z2^-1"), sigma, 3)
    assert got == P("z2^-1*(1 - q*z4 + q^2*z4^2)")
    with pytest.raises(InexactPullbackError):
        pullback(P("z2^-1"), sigma, INF)


def test_pullback_geometric_series_oracle():
    sigma = sub({2: "z2*(1 + q*z4 + qp*z3*z4)"})
    cutoff = Fraction(20, 3)
    got = oracle.to_sympy(pullback(P("z2^-2*z1"), sigma, cutoff))
    z1, z2, z3, z4 = oracle.Z[:4]
    q, qp, _ = oracle.params(T)
    # got * z2^2 (1+u)^2 / z1 - 1 must vanish below the cutoff
    err = sp.expand(got * z2**2 * (1 + q * z4 + qp * z3 * z4) ** 2 / z1 - 1)
    assert oracle.valuation(err, T) >= cutoff


def test_substitution_validation():
    with pytest.raises(ValueError):
        Substitution(4, T, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(ValueError):
        sub({2: "z2*(1 + z4)"})
    with pytest.raises(ValueError):
        sub({2: "z2 + z1"})


def test_compose_examples():
    rho = compose(MAIN.walls["-0"].substitution, MAIN.walls["0+"].substitution)
    assert rho.image(1) == P("z1*(1 + q*qpp*z4 + qpp*z3^-1*z4 + qp*qpp*z2*z4)")
    assert rho.image(2) == P("z2*(1 + q*qp*z4 + qp*z3*z4)")
    rho = compose(MAIN.walls["0-"].substitution, MAIN.walls["+0"].substitution)
    assert rho.image(1) == P("z1*(1 + q*qpp*z4 + qpp*z3^-1*z4)")
    assert rho.image(2) == P("z2*(1 + q*qp*z4 + qp*z3*z4 + qp*qpp*z1*z4)")
    s = MAIN.walls["+0"].substitution
    assert compose(s, Substitution.identity(4, T)) == s


def test_compose_dimension_mismatch():
    with pytest.raises(ValueError):
        compose(Substitution.identity(3, T), Substitution.identity(4, T))


def test_format_poly_reparses():
    f = P("z1 - 1/2*qp*qpp*z1^-1*z4 + 3*q^2")
    assert parse_expression(format_poly(f), T, 4) == f


# --- properties ------------------------------------------------------------

WALLS = [w.substitution for w in MAIN.walls.values()] + [w.substitution for w in build_open_mirror().diagram.walls.values()]
CUT = Fraction(4)


def _rand_sub(seed):
    rng = random.Random(seed)
    return WALLS[rng.randrange(len(WALLS))]


@settings(max_examples=100, deadline=None)
@given(laurent_polys(), laurent_polys())
def test_product_matches_sympy(f, g):
    assert sp.expand(oracle.to_sympy(f * g) - oracle.to_sympy(f) * oracle.to_sympy(g)) == 0


@settings(max_examples=100, deadline=None)
@given(laurent_polys(), laurent_polys())
def test_log_derivative_leibniz(f, g):
    for i in range(1, 5):
        assert (f * g).log_derivative(i) == f.log_derivative(i) * g + f * g.log_derivative(i)


@settings(max_examples=100, deadline=None)
@given(laurent_polys(), laurent_polys(), laurent_polys().map(lambda f: hash(f) & 0xFFFF))
def test_pullback_ring_homomorphism(f, g, seed):
    s = _rand_sub(seed)
    pb = lambda h: pullback(h, s, CUT)  # noqa: E731
    assert pb(f + g) == pb(f) + pb(g)
    assert pb(f * g) == (pb(f) * pb(g)).truncate(CUT)


def test_exact_pullback_matches_sympy():
    rng = random.Random(11)
    z = oracle.Z[:4]
    for _ in range(30):
        # non-negative powers in moved coordinates keep the pullback exact
        f = rand_poly(rng, 3, zrange=1)
        f = f * P("z1*z2")
        s = WALLS[rng.randrange(len(WALLS))]
        images = {z[i - 1]: oracle.to_sympy(s.image(i)) for i in range(1, 5)}
        expected = sp.expand(oracle.to_sympy(f).subs(images, simultaneous=True))
        assert sp.expand(oracle.to_sympy(pullback(f, s, INF)) - expected) == 0


def test_compose_associative_and_functorial():
    rng = random.Random(3)
    for _ in range(10):
        a, b, c = (WALLS[rng.randrange(len(WALLS))] for _ in range(3))
        assert compose(compose(a, b, CUT), c, CUT) == compose(a, compose(b, c, CUT), CUT)
        f = rand_poly(rng, 3)
        assert pullback(f, compose(a, b, CUT), CUT) == pullback(pullback(f, a, CUT), b, CUT)


def _tropical(f, x):
    """Valuation of ``f`` at a point whose coordinates have valuations ``x``."""
    return min(T.exponent_valuation(p) + sum(a * b for a, b in zip(z, x)) for (z, p), _ in f.flat_terms())


def test_valuation_compatibility():
    rng = random.Random(5)
    for s in WALLS:
        for _ in range(10):
            m = tuple(rng.randint(-3, 3) for _ in range(4))
            x = [Fraction(rng.randint(-4, 4), 40) for _ in range(4)]
            img = pullback(LaurentPoly.monomial(4, T, m), s, 10)
            affine = sum(mi * sum(s.matrix[i][j] * x[j] for j in range(4)) for i, mi in enumerate(m))
            assert _tropical(img, x) == affine
