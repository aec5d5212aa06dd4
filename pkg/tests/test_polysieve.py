import math

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import first_primes, is_lfree, is_squarefree, roots_brute, sylvester_det
from sievelab import (
    IntPolynomial,
    build_poly_sieve,
    count_lfree_values,
    multi_poly_density,
    poly_roots_mod,
    resultant,
    rho,
)
from sievelab.polysieve import count_joint_lfree, discriminant, hensel_lift, roots_mod_p

X = sympy.Symbol("X")


def to_sympy(coeffs):
    return sum(c * X**i for i, c in enumerate(coeffs))


@pytest.mark.parametrize(
    "f, p, want",
    [((1, 0, 1), 5, [7, 18]), ((1, 0, 1), 3, []), ((0, 1), 7, [0]), ((0, 0, 1), 3, [0, 3, 6])],
)
def test_roots_examples(f, p, want):
    assert poly_roots_mod(f, p, 2) == want == roots_brute(list(f), p * p)


def test_rho_examples():
    assert rho((1, 0, 1), 5, 2) == 2
    assert rho((1, 0, 1), 2, 2) == 0


def test_resultant_examples():
    assert resultant((1, 2), (-1, 2)) == -4
    assert resultant((0, 1), (-1, 1)) == -1
    assert resultant((1, 0, 1), (1, 0, 1)) == 0
    assert sympy.resultant(2 * X + 1, 2 * X - 1) == -4


def test_poly_sieve_x2_plus_1():
    ps = build_poly_sieve([(1, 0, 1)], 2, 7)
    # only 5 contributes: 2 and 3, 7 have no roots mod p^2
    assert [(q, r) for _, q, r in ps.classes] == [(25, (7, 18))]
    ps = build_poly_sieve([(1, 0, 1)], 2, 13)
    assert [(q, r) for _, q, r in ps.classes] == [(25, (7, 18)), (169, tuple(roots_brute([1, 0, 1], 169)))]


def test_poly_sieve_identity_is_squarefree():
    ps = build_poly_sieve([(0, 1)], 2, 5)
    assert [(q, r) for _, q, r in ps.classes] == [(4, (0,)), (9, (0,)), (25, (0,))]


def test_product_polynomial_identity():
    f, g = IntPolynomial((1, 2)), IntPolynomial((-1, 2))
    fg = f * g
    for p in first_primes(25):
        q = p * p
        got = set(poly_roots_mod(fg, p, 2))
        base = set(poly_roots_mod(f, p, 2)) | set(poly_roots_mod(g, p, 2))
        assert base <= got
        if got != base:
            assert 4 % p == 0  # W_p only at primes dividing Res = -4


def test_multi_density_dimitrov_formula():
    d = multi_poly_density([(1, 0, 1), (2, 0, 1)], 2, 1000)
    want = 1.0
    for p in first_primes(168)[1:]:
        want *= 1 - (sympy.legendre_symbol(-1 % p, p) + sympy.legendre_symbol(-2 % p, p) + 2) / p**2
    # p = 2 drops out: x^2 + 1 and x^2 + 2 are never divisible by 4
    assert abs(d.bracket.upper - want) < 1e-12
    assert d.bracket.lower <= d.bracket.upper


def test_multi_density_identity_and_consecutive():
    d = multi_poly_density([(0, 1)], 2, 1000)
    assert d.bracket.contains(6 / math.pi**2)
    d = multi_poly_density([(0, 1), (1, 1)], 2, 500)
    want = math.prod(1 - 2 / p**2 for p in first_primes(95))
    assert abs(d.bracket.upper - want) < 1e-12


def test_counts():
    assert count_lfree_values((0, 1), 2, 100) == 61 == sum(is_squarefree(n) for n in range(1, 101))
    assert count_lfree_values((1, 0, 1), 2, 10) == 9
    assert count_lfree_values((1, 0, 1), 2, 0) == 0


def test_count_joint_matches_factorization():
    N = 3000
    want = sum(is_squarefree(m * m + 1) and is_squarefree(m * m + 2) for m in range(1, N + 1))
    assert count_joint_lfree([(1, 0, 1), (2, 0, 1)], 2, N) == want


def test_split_agrees_with_brute():
    for p in first_primes(400)[300:]:
        for f in [(1, 0, 1), (2, 0, 1), (-2, 0, 0, 1), (5, 3, 0, 7, 1)]:
            fp = IntPolynomial(f)
            assert roots_mod_p(fp, p, method="split") == roots_mod_p(fp, p, method="brute")


# -- properties ---------------------------------------------------------------

polys = st.lists(st.integers(-20, 20), min_size=2, max_size=4).filter(lambda c: c[-1] != 0)
small_prime = st.sampled_from(first_primes(40))


@given(polys, small_prime, st.integers(1, 3))
def test_roots_match_exhaustive(coeffs, p, l):
    q = p**l
    if q > 10**6:
        return
    got = poly_roots_mod(coeffs, p, l)
    assert got == roots_brute(coeffs, q)


@given(polys, small_prime, st.integers(1, 3))
def test_simple_roots_lift_once(coeffs, p, j):
    f = IntPolynomial(tuple(coeffs))
    df = f.derivative()
    for r in poly_roots_mod(f, p, j):
        if df(r) % p:
            lifts = hensel_lift(f, [r], p, j)
            assert len(lifts) == 1 and f(lifts[0]) % p ** (j + 1) == 0


@given(polys, small_prime)
def test_rho_bounded_off_discriminant(coeffs, p):
    f = IntPolynomial(tuple(coeffs))
    D = discriminant(f)
    assert D == sympy.discriminant(to_sympy(coeffs), X)
    if D % p and f.lead % p:
        assert rho(f, p, 2) <= f.degree


@given(polys, polys, small_prime)
def test_product_union_identity(a, b, p):
    f, g = IntPolynomial(tuple(a)), IntPolynomial(tuple(b))
    R = resultant(f, g)
    assert R == sylvester_det(a, b)
    # sympy's sign convention differs when deg f < deg g, the magnitude does not
    assert abs(R) == abs(sympy.resultant(to_sympy(a), to_sympy(b), X))
    got = set(poly_roots_mod(f * g, p, 2))
    base = set(poly_roots_mod(f, p, 2)) | set(poly_roots_mod(g, p, 2))
    assert base <= got
    if R % p:
        assert got == base


@pytest.mark.parametrize("coeffs", [(1, 0, 1), (2, 0, 1), (0, 1), (1, 1, 1), (3, 0, 1), (7, 3, 5)])
def test_count_within_density_bracket(coeffs):
    N = 20000
    ratio = count_lfree_values(coeffs, 2, N) / N
    d = multi_poly_density([coeffs], 2, 3000)
    assert d.bracket.contains(ratio, tol=0.01)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=3), st.integers(1, 400))
def test_lfree_mask_matches_factorization(coeffs, N):
    coeffs = coeffs + [1]
    for l in (2, 3):
        got = count_lfree_values(coeffs, l, N)
        f = IntPolynomial(tuple(coeffs))
        assert got == sum(is_lfree(f(m), l) for m in range(1, N + 1))
