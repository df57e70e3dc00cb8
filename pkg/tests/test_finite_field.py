import itertools
import random

import gmpy2
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF as sympy_GF
from sympy.polys.galoistools import gf_sqf_list
from sympy.polys.domains import ZZ

from charwalk.errors import InvalidInputError, ResourceLimitError
from charwalk.finite_field import (FpPolynomial, PrimeModulus, is_perfect_square,
                                   is_squarefree, jacobi_symbol, legendre_batch,
                                   legendre_euler, legendre_symbol, poly_eval,
                                   poly_eval_batch, poly_gcd, quadratic_character_table,
                                   shifted_product, squarefree_decomposition)
from charwalk.prime_walk import sieve_primes

SMALL_PRIMES = [int(p) for p in sieve_primes(997).primes[1:]]


def poly(coeffs, p):
    return FpPolynomial.from_coefficients(coeffs, p)


def test_legendre_examples():
    for p in (3, 5, 7, 101, 1000003):
        assert legendre_symbol(1, p) == 1
    assert legendre_symbol(0, 5) == 0
    squares7 = {x * x % 7 for x in range(1, 7)}
    assert squares7 == {1, 2, 4}
    assert legendre_symbol(2, 7) == 1
    assert legendre_symbol(3, 7) == -1


def test_legendre_reduces_negative_and_large():
    assert legendre_symbol(-1, 7) == -1
    assert legendre_symbol(-1, 13) == 1
    assert legendre_symbol(7 + 2, 7) == legendre_symbol(2, 7)
    assert legendre_symbol(10 ** 30 + 1, 1000003) == legendre_euler(10 ** 30 + 1, 1000003)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_legendre_matches_euler_exhaustively(p):
    fast = [legendre_symbol(n, p) for n in range(p)]
    assert fast == [legendre_euler(n, p) for n in range(p)]
    assert list(legendre_batch(np.arange(p), p)) == fast
    assert list(quadratic_character_table(p)) == fast


@pytest.mark.parametrize("p", [p for p in SMALL_PRIMES if p <= 499])
def test_half_the_units_are_residues(p):
    assert sum(legendre_symbol(n, p) == 1 for n in range(1, p)) == (p - 1) // 2


@given(st.sampled_from(SMALL_PRIMES + [1000003, 2 ** 61 - 1]),
       st.integers(-10 ** 12, 10 ** 12), st.integers(-10 ** 12, 10 ** 12))
def test_legendre_multiplicative(p, a, b):
    assert legendre_symbol(a * b, p) == legendre_symbol(a, p) * legendre_symbol(b, p)


@settings(max_examples=50)
@given(st.integers(0, 2 ** 61), st.sampled_from([2 ** 61 - 1, 4611686018427387847, 999999937]))
def test_jacobi_agrees_with_gmpy2_near_64_bits(a, p):
    assert legendre_symbol(a, p) == gmpy2.legendre(a, p) == legendre_euler(a, p)


def test_jacobi_on_composite_moduli():
    for n in range(1, 200, 2):
        for a in range(-20, 60):
            assert jacobi_symbol(a, n) == gmpy2.jacobi(a, n)


def test_legendre_batch_with_array_moduli():
    rng = random.Random(3)
    ps = [rng.choice(SMALL_PRIMES) for _ in range(500)]
    xs = [rng.randrange(-10 ** 9, 10 ** 9) for _ in range(500)]
    assert legendre_batch(xs, ps).tolist() == [legendre_symbol(x, p) for x, p in zip(xs, ps)]
    grid = legendre_batch(np.array([[2, 3], [5, 7]]), np.array([[11], [13]]))
    assert grid.shape == (2, 2)
    assert grid.tolist() == [[legendre_symbol(2, 11), legendre_symbol(3, 11)],
                             [legendre_symbol(5, 13), legendre_symbol(7, 13)]]


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -7, 2 ** 62 + 135])
def test_prime_modulus_rejects(bad):
    with pytest.raises(InvalidInputError):
        PrimeModulus(bad)


def test_prime_modulus_metadata():
    m = PrimeModulus(1000003)
    assert m.half_exponent == 500001
    assert m.bit_length == 20
    big = PrimeModulus(2 ** 61 - 1)
    assert big.bit_length == 61


def test_character_table_cap():
    with pytest.raises(ResourceLimitError):
        quadratic_character_table(2 ** 61 - 1)


def test_poly_eval_examples():
    assert poly_eval(poly([0, 1], 7), 3) == 3
    assert poly_eval(poly([1, 0, 1], 7), 2) == 5
    zero = poly([], 7)
    assert zero.degree == -1 and zero.is_zero()
    assert all(poly_eval(zero, x) == 0 for x in range(7))


def test_poly_canonical_form():
    assert poly([1, 2, 0, 0], 5) == poly([6, -3], 5)
    assert poly([0, 0], 5).coefficients == ()
    with pytest.raises(InvalidInputError):
        poly([0] * 5 + [1], 5)  # degree must stay below p


def test_poly_eval_batch_matches_scalar():
    F = poly([3, 1, 4, 1, 5], 101)
    xs = np.arange(101)
    assert poly_eval_batch(F, xs).tolist() == [poly_eval(F, int(x)) for x in xs]


def test_division_identity():
    rng = random.Random(11)
    p = 31
    for _ in range(100):
        a = poly([rng.randrange(p) for _ in range(rng.randrange(1, 9))], p)
        b = poly([rng.randrange(p) for _ in range(rng.randrange(1, 5))] + [1], p)
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_squarefree_examples():
    for p in (3, 7, 101):
        assert not is_squarefree(poly([0, 0, 1], p))
    assert is_squarefree(poly([0, 1, 1], 101))
    # -1 is a non-residue mod 7, so X^2 + 1 has no root and is irreducible
    assert legendre_symbol(-1, 7) == -1
    assert all(poly_eval(poly([1, 0, 1], 7), x) for x in range(7))
    assert is_squarefree(poly([1, 0, 1], 7))


@pytest.mark.parametrize("coeffs", [[], [3]])
def test_squarefree_rejects_constants(coeffs):
    with pytest.raises(InvalidInputError):
        is_squarefree(poly(coeffs, 7))


def test_perfect_square_examples():
    assert is_perfect_square(poly([1, 2, 1], 11))
    assert not is_perfect_square(poly([0, 1, 1], 101))
    F = poly([1, 0, 1], 101)
    assert not is_perfect_square(F * F.compose_linear(1, 1))
    with pytest.raises(InvalidInputError):
        is_perfect_square(poly([], 11))


def test_perfect_square_needs_square_leading_coefficient():
    p = 11
    G = poly([1, 1], p)
    nonres = next(c for c in range(2, p) if legendre_symbol(c, p) == -1)
    assert is_perfect_square(G * G * 4)
    assert not is_perfect_square(G * G * nonres)


def _trial_square(H):
    """Oracle: search c and monic G with H = c G^2 (deg H <= 4)."""
    p = H.p
    if H.degree % 2:
        return False
    e = H.degree // 2
    for tail in itertools.product(range(p), repeat=e):
        G = poly(list(tail) + [1], p)
        G2 = G * G
        c = H.leading
        if G2 * c == H:
            return legendre_symbol(c, p) == 1
    return False


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_perfect_square_against_trial_squaring(p):
    rng = random.Random(p)
    cases = [poly([rng.randrange(p) for _ in range(d)] + [rng.randrange(1, p)], p)
             for d in range(min(5, p)) for _ in range(40)]
    squares = [(poly([rng.randrange(p), 1], p) ** 2) * rng.randrange(1, p) for _ in range(20)]
    for H in cases + squares:
        assert is_perfect_square(H) == _trial_square(H), H


@st.composite
def random_poly(draw, p, max_degree=5):
    d = draw(st.integers(0, max_degree))
    coeffs = draw(st.lists(st.integers(0, p - 1), min_size=d, max_size=d))
    return poly(coeffs + [draw(st.integers(1, p - 1))], p)


@settings(max_examples=60)
@given(st.data(), st.sampled_from([13, 31, 101]))
def test_square_times_linear_is_not_square(data, p):
    G = data.draw(random_poly(p))
    G2 = G * G
    assert is_perfect_square(G2) == (legendre_symbol(G2.leading, p) == 1)
    c = data.draw(st.integers(0, p - 1).filter(lambda c: poly_eval(G2, (-c) % p) != 0))
    assert not is_perfect_square(G2 * poly([c, 1], p))


@settings(max_examples=60)
@given(st.data(), st.sampled_from([31, 101, 211]))
def test_decomposition_matches_sympy(data, p):
    F = data.draw(random_poly(p, 6))
    H = F * F * data.draw(random_poly(p, 3))
    ours = sorted((f.coefficients[::-1], k) for f, k in squarefree_decomposition(H))
    lc, factors = gf_sqf_list(list(H.coefficients[::-1]), p, ZZ)
    theirs = sorted((tuple(int(c) % p for c in f), k) for f, k in factors)
    assert ours == theirs


@pytest.mark.parametrize("p", [5, 7, 11, 13, 97])
def test_squarefree_agrees_with_root_distinctness(p):
    # split polynomials prod (X - r_i): square-free iff the roots are distinct
    rng = random.Random(p)
    for _ in range(200):
        roots = [rng.randrange(p) for _ in range(rng.randrange(1, 5))]
        F = poly([1], p)
        for r in roots:
            F = F * poly([-r, 1], p)
        found = [x for x in range(p) if poly_eval(F, x) == 0]
        assert set(found) == set(roots)
        assert is_squarefree(F) == (len(set(roots)) == len(roots))


def test_gcd_is_monic():
    p = 13
    a = poly([1, 1], p) * poly([2, 1], p) * 5
    b = poly([1, 1], p) * poly([3, 1], p) * 7
    assert poly_gcd(a, b) == poly([1, 1], p)


@pytest.mark.parametrize("coeffs,p", [([0, 1], 10007), ([1, 0, 1], 10007),
                                      ([2, 3, 0, 1], 100003)])
def test_shifted_products_are_not_squares(coeffs, p):
    F = poly(coeffs, p)
    assert is_squarefree(F)
    import math
    limit = math.log(p) / math.log(4 * F.degree)
    for L in range(2, int(limit) + 1):
        for a in (1, 3, L):
            H = shifted_product(F, a, range(1, L + 1))
            assert H.degree == L * F.degree
            assert not is_perfect_square(H)


def test_sympy_field_available():
    assert sympy_GF(7)(3) ** 2 == sympy_GF(7)(2)
