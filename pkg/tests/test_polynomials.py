import random
from fractions import Fraction
from itertools import permutations
from math import factorial, prod

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from walkcert.polynomials import Polynomial, evaluate, evaluate_real, expand_product, symmetrize


def P(k, terms):
    return Polynomial(k, terms)


def to_sympy(f, xs):
    return sum(sp.Rational(c.numerator, c.denominator) * prod(x ** e for x, e in zip(xs, exp))
               for exp, c in f.items()) + sp.Integer(0)


def from_sympy(expr, xs):
    poly = sp.Poly(sp.expand(expr), *xs)
    return Polynomial(len(xs), {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def sympy_symmetrize(f):
    xs = sp.symbols(f"x1:{f.k + 1}")
    expr = to_sympy(f, xs)
    total = sum(expr.xreplace(dict(zip(xs, perm))) for perm in permutations(xs))
    return from_sympy(total, xs)


@st.composite
def polynomials(draw, k=None, max_deg=5, max_terms=5):
    k = draw(st.integers(1, 4)) if k is None else k
    nterms = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(nterms):
        exp = draw(st.lists(st.integers(0, max_deg), min_size=k, max_size=k))
        c = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 4)))
        terms.append((exp, c))
    return Polynomial(k, terms)


def test_symmetrize_two_variable_example():
    f = P(2, {(2, 0): 1, (1, 1): -1})
    assert symmetrize(f) == P(2, {(2, 0): 1, (0, 2): 1, (1, 1): -2})


def test_symmetrize_symmetric_doubles():
    assert symmetrize(P(2, {(1, 1): 1})) == P(2, {(1, 1): 2})


def test_symmetrize_two_term():
    f = P(2, {(2, 6): 1, (3, 5): -1})
    expected = P(2, {(2, 6): 1, (6, 2): 1, (3, 5): -1, (5, 3): -1})
    assert sympy_symmetrize(f) == expected
    assert symmetrize(f) == expected


def test_symmetrize_k_limit():
    with pytest.raises(ValueError):
        symmetrize(P(9, {(1,) * 9: 1}))


@settings(max_examples=40, deadline=None)
@given(polynomials(max_deg=4, max_terms=4))
def test_symmetrize_matches_sympy(f):
    assert symmetrize(f) == sympy_symmetrize(f)


@settings(max_examples=40, deadline=None)
@given(polynomials(), st.randoms())
def test_symmetrize_permutation_invariant(f, rnd):
    perm = list(range(f.k))
    rnd.shuffle(perm)
    fs = symmetrize(f)
    assert symmetrize(f.permute(perm)) == fs
    assert fs.permute(perm) == fs


@settings(max_examples=40, deadline=None)
@given(polynomials())
def test_symmetrize_idempotent_up_to_factorial(f):
    fs = symmetrize(f)
    assert symmetrize(fs) == fs * factorial(f.k)


def test_expand_square():
    d = P(2, {(1, 0): 1, (0, 1): -1})
    assert expand_product([d, d]) == P(2, {(2, 0): 1, (1, 1): -2, (0, 2): 1})


def test_expand_sandwich_factors():
    a, b, c = 1, 1, 1
    factors = [
        P(2, {(2 * a, 2 * a): 1}),
        P(2, {(2 * b + c, 0): 1, (0, 2 * b + c): -1}),
        P(2, {(c, 0): 1, (0, c): -1}),
    ]
    expected = P(2, {(6, 2): 1, (5, 3): -1, (3, 5): -1, (2, 6): 1})
    prod_ = expand_product(factors)
    assert prod_ == expected
    rng = random.Random(5)
    for _ in range(5):
        pt = [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(2)]
        assert evaluate(prod_, pt) == prod(evaluate(f, pt) for f in factors)


def test_expand_empty():
    assert expand_product([], 3) == Polynomial.constant(3)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3).flatmap(lambda k: st.lists(polynomials(k=k, max_deg=3, max_terms=3), min_size=1,
                                                      max_size=3)))
def test_expand_agrees_with_evaluation(factors):
    rng = random.Random(len(factors))
    p = expand_product(factors)
    for _ in range(20):
        pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(factors[0].k)]
        assert evaluate(p, pt) == prod(evaluate(f, pt) for f in factors)


def test_mismatched_variable_counts():
    with pytest.raises(ValueError):
        P(2, {(1, 0): 1}) * P(3, {(1, 0, 0): 1})


def test_evaluate_examples():
    sq = P(2, {(2, 0): 1, (1, 1): -2, (0, 2): 1})
    assert evaluate(sq, (3, 1)) == 4
    assert evaluate(sq, (Fraction(1, 2), Fraction(1, 3))) == Fraction(1, 36)
    f = P(3, {(0, 0, 0): Fraction(7, 3), (1, 2, 0): 5})
    assert evaluate(f, (0, 0, 0)) == Fraction(7, 3)
    assert evaluate_real(sq, (0.5, 1 / 3)) == pytest.approx(1 / 36)
    with pytest.raises(ValueError):
        evaluate(sq, (1,))


def test_no_zero_coefficients_stored():
    f = P(2, {(1, 0): 1}) - P(2, {(1, 0): 1})
    assert f.is_zero() and len(f) == 0
    assert P(2, [((1, 1), 1), ((1, 1), -1)]).is_zero()


def test_exponent_validation():
    with pytest.raises(ValueError):
        P(2, {(1,): 1})
    with pytest.raises(ValueError):
        P(1, {(-1,): 1})


def test_json_round_trip():
    f = P(2, {(2, 0): Fraction(1, 2), (1, 1): -2})
    data = f.to_json()
    assert data["k"] == 2
    assert {"exp": [1, 1], "coef": "-2"} in data["terms"]
    assert {"exp": [2, 0], "coef": "1/2"} in data["terms"]
    assert Polynomial.from_json(data) == f
    with pytest.raises(ValueError):
        Polynomial.from_json({"terms": []})


def test_str():
    assert str(P(2, {(2, 0): 1, (1, 1): -2, (0, 2): 1})) == "x1^2 - 2*x1*x2 + x2^2"
    assert str(Polynomial(2)) == "0"
