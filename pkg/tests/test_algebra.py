import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapmodels.algebra import AlgebraError, Element, FreeGca, substitute

from oracles import brute_force_basis


@pytest.fixture
def sphere_like():
    return FreeGca([("x", 2), ("y", 3)], max_degree=12)


def test_odd_generator_squares_to_zero(sphere_like):
    y = sphere_like.gen("y")
    assert (y * y).is_zero()


def test_even_commutes(sphere_like):
    x, y = sphere_like.gen("x"), sphere_like.gen("y")
    assert x * y == y * x


def test_odd_odd_anticommute():
    alg = FreeGca([("y1", 3), ("y2", 3)], max_degree=12)
    y1, y2 = alg.gen("y1"), alg.gen("y2")
    assert y1 * y2 == -(y2 * y1)
    assert not (y1 * y2).is_zero()


def test_mixed_algebra_rejected(sphere_like):
    other = FreeGca([("x", 2)], max_degree=4)
    with pytest.raises(AlgebraError):
        sphere_like.gen("x") * other.gen("x")


def test_monomial_basis_degree_4(sphere_like):
    # Lambda(x2, y3) in degree 4: only x^2 (hand enumeration)
    assert sphere_like.monomial_basis(4) == [((0, 2),)]


def test_monomial_basis_degree_5(sphere_like):
    # degree 5: only x*y
    assert sphere_like.monomial_basis(5) == [((0, 1), (1, 1))]


def test_monomial_basis_degree_0(sphere_like):
    assert sphere_like.monomial_basis(0) == [()]


def test_monomial_basis_rejects_degree_0_generator():
    alg = FreeGca([("u", 0), ("x", 2)], max_degree=6)
    with pytest.raises(AlgebraError, match="localize"):
        alg.monomial_basis(2)


def test_monomial_basis_respects_truncation(sphere_like):
    with pytest.raises(AlgebraError):
        sphere_like.monomial_basis(13)


@pytest.mark.parametrize("degree", range(0, 12))
def test_basis_matches_generating_function(degree):
    alg = FreeGca([("x", 2), ("y", 3), ("z", 2), ("w", 5)], max_degree=12)
    series = alg.basis_dimension_series(12)
    assert len(alg.monomial_basis(degree)) == series[degree]


@pytest.mark.parametrize("degree", range(0, 10))
def test_basis_matches_brute_force(degree):
    alg = FreeGca([("a", 2), ("b", 3), ("c", 3), ("d", 4)], max_degree=10)
    assert alg.monomial_basis(degree) == brute_force_basis(alg, degree)


def test_substitute_binomial():
    alg = FreeGca([("a", 2), ("x", 2)], max_degree=8)
    a, x = alg.gen("a"), alg.gen("x")
    k = Fraction(3)
    out = substitute(x * x, {alg.generator("x"): x - a.scale(k)})
    assert out == x * x - (a * x).scale(2 * k) + (a * a).scale(k * k)


def test_substitute_identity(sphere_like):
    v = sphere_like.gen("y")
    assert substitute(v, {sphere_like.generator("y"): v}) == v


def test_substitute_zero_annihilates(sphere_like):
    x, y = sphere_like.gen("x"), sphere_like.gen("y")
    out = substitute(x * y, {sphere_like.generator("x"): sphere_like.zero()})
    assert out.is_zero()


def test_substitute_rejects_degree_mismatch(sphere_like):
    with pytest.raises(AlgebraError):
        substitute(
            sphere_like.gen("x"), {sphere_like.generator("x"): sphere_like.gen("y")}
        )


def test_homogeneous_degree(sphere_like):
    x, y = sphere_like.gen("x"), sphere_like.gen("y")
    assert (x * y).homogeneous_degree() == 5
    assert sphere_like.zero().homogeneous_degree() is None
    with pytest.raises(AlgebraError):
        (x + y).homogeneous_degree()


# -- randomized law checks ---------------------------------------------------

GENS = [("x1", 2), ("x2", 2), ("y1", 3), ("y2", 3), ("z", 4), ("w", 5)]


def random_element(rng: random.Random, alg: FreeGca, max_terms=3, max_factors=3) -> Element:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        factors = {}
        for _ in range(rng.randint(0, max_factors)):
            g = alg.generators[rng.randrange(len(alg.generators))]
            if g.is_odd and factors.get(g.index):
                continue
            factors[g.index] = factors.get(g.index, 0) + 1
        mono = tuple(
            sorted(factors.items(), key=lambda f: alg.generators[f[0]].sort_key)
        )
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(
            rng.randint(-4, 4), rng.randint(1, 3)
        )
    return alg.element(terms)


def homogeneous_pieces(e: Element):
    degrees = {e.algebra.monomial_degree(m) for m in e.terms()}
    return [e.homogeneous_component(d) for d in degrees]


def test_koszul_commutativity_randomized():
    alg = FreeGca(GENS, max_degree=30)
    rng = random.Random(20240811)
    for _ in range(400):
        u = random_element(rng, alg)
        v = random_element(rng, alg)
        for uu in homogeneous_pieces(u):
            for vv in homogeneous_pieces(v):
                du, dv = uu.homogeneous_degree(), vv.homogeneous_degree()
                if du is None or dv is None:
                    continue
                sign = -1 if (du % 2 and dv % 2) else 1
                assert uu * vv == (vv * uu).scale(sign)


def test_associativity_randomized():
    alg = FreeGca(GENS, max_degree=30)
    rng = random.Random(7)
    for _ in range(300):
        u, v, w = (random_element(rng, alg) for _ in range(3))
        assert (u * v) * w == u * (v * w)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_canonical_form_additive_roundtrip(data):
    alg = FreeGca(GENS, max_degree=30)
    rng = random.Random(data.draw(st.integers(0, 2**30)))
    u = random_element(rng, alg)
    v = random_element(rng, alg)
    assert (u + v) - v == u
    assert u + v == v + u
    assert (u - u).is_zero()


def test_distributivity_randomized():
    alg = FreeGca(GENS, max_degree=30)
    rng = random.Random(99)
    for _ in range(200):
        u, v, w = (random_element(rng, alg) for _ in range(3))
        assert u * (v + w) == u * v + u * w
