import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_upto
from walkcert.graph import disjoint_union, make_named_graph, walk_counts
from walkcert.polynomials import Polynomial
from walkcert.spectral import (
    IdentityEvaluator,
    gamma,
    spectral_decompose,
    stabilizer_size,
    symmetrization_identity_residual,
    walk_counts_spectral,
)


def ordered_sum_rhs(f, s):
    """Plain sum over all ordered index tuples of f(lambda) * prod mu^2, no symmetrization."""
    lam, w = np.array(s.eigenvalues), np.array(s.weights)
    total = 0.0
    for idx in itertools.product(range(s.n), repeat=f.k):
        val = sum(float(c) * math.prod(lam[i] ** e for i, e in zip(idx, exp)) for exp, c in f.items())
        total += val * math.prod(w[i] for i in idx)
    return total


def test_triangle_spectrum():
    s = spectral_decompose(make_named_graph("complete", 3))
    assert s.eigenvalues == pytest.approx([2, -1, -1], abs=1e-12)
    agg = s.aggregated()
    assert [lam for lam, _ in agg] == pytest.approx([2, -1], abs=1e-9)
    assert [wt for _, wt in agg] == pytest.approx([3, 0], abs=1e-9)


def test_path3_spectrum():
    s = spectral_decompose(make_named_graph("path", 3))
    r2 = math.sqrt(2)
    assert s.eigenvalues == pytest.approx([r2, 0, -r2], abs=1e-12)
    assert s.weights == pytest.approx([(3 + 2 * r2) / 2, 0, (3 - 2 * r2) / 2], abs=1e-12)
    assert s.weights[0] == pytest.approx(2.914, abs=1e-3)


def test_edgeless_spectrum():
    s = spectral_decompose(make_named_graph("edgeless", 4))
    assert s.eigenvalues == pytest.approx([0] * 4)
    assert s.aggregated() == [(pytest.approx(0), pytest.approx(4))]
    assert walk_counts_spectral(s, 3) == pytest.approx([4, 0, 0, 0])


def test_spectral_walks_examples():
    assert walk_counts_spectral(spectral_decompose(make_named_graph("complete", 3)), 3) == \
        pytest.approx([3, 6, 12, 24], rel=1e-9)
    assert walk_counts_spectral(spectral_decompose(make_named_graph("path", 3)), 4) == \
        pytest.approx([3, 4, 6, 8, 12], rel=1e-8)


def test_invariants_and_json():
    g = disjoint_union(make_named_graph("complete", 3), make_named_graph("star", 5))
    s = spectral_decompose(g)
    res = s.residuals()
    assert res["sum_mu2"] < 1e-9 and res["w1"] < 1e-9
    assert all(w >= 0 for w in s.weights)
    data = s.to_json()
    assert set(data) == {"eigenvalues", "weights", "residuals"}
    assert list(s.eigenvalues) == sorted(s.eigenvalues, reverse=True)


def test_eq3_agreement_n5():
    # the n <= 6 sweep is part of the acceptance module
    for g in corpus_upto(5):
        exact = walk_counts(g, 12).counts
        approx = walk_counts_spectral(spectral_decompose(g), 12)
        for w, wt in zip(exact, approx):
            assert abs(wt - w) / max(1, w) <= 1e-8


def test_identity_linear_is_eq3():
    assert symmetrization_identity_residual(Polynomial(1, {(1,): 1}), make_named_graph("path", 3)) <= 1e-8


def test_identity_antisymmetric_on_triangle():
    f = Polynomial(2, {(2, 1): 1, (1, 2): -1})
    assert symmetrization_identity_residual(f, make_named_graph("complete", 3)) <= 1e-8


def test_identity_x1x2_corpus():
    ev = IdentityEvaluator(Polynomial(2, {(1, 1): 1}))
    for g in corpus_upto(5):
        assert ev.residual(g) <= 1e-7


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**31), st.sampled_from(corpus_upto(4)))
def test_identity_matches_ordered_sum(k, seed, g):
    rng = random.Random(seed)
    terms = [(tuple(rng.randint(0, 3) for _ in range(k)), Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
             for _ in range(rng.randint(1, 3))]
    f = Polynomial(k, terms)
    ev = IdentityEvaluator(f)
    s = spectral_decompose(g)
    lhs = ev.lhs(g)
    assert ordered_sum_rhs(f, s) == pytest.approx(lhs, rel=1e-7, abs=1e-7)
    assert ev.rhs(s) == pytest.approx(lhs, rel=1e-7, abs=1e-7)


@pytest.mark.parametrize("t,stab", [((0,), 1), ((0, 1, 2), 1), ((1, 1), 2), ((2, 2, 2), 6), ((0, 0, 1, 1), 4),
                                    ((3, 3, 3, 5), 6)])
def test_stabilizer(t, stab):
    assert stabilizer_size(t) == stab
    # brute-force count of permutations fixing the tuple
    assert sum(1 for p in itertools.permutations(range(len(t))) if tuple(t[i] for i in p) == t) == stab


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_gamma_bounds(idx):
    t = tuple(sorted(idx))
    assert 1 / math.factorial(len(t)) - 1e-15 <= gamma(t) <= 1
