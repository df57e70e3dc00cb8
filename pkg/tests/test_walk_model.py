import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charwalk.errors import InvalidInputError
from charwalk.walk_model import (RootOfUnityCache, WalkKind, complex_power,
                                 log_psi_decay_bound, psi_convolve, psi_decay_bound,
                                 psi_enumerate, psi_exact, psi_log_deviation,
                                 step_characteristic, variance_sum_curve,
                                 variance_sum_exact, walk_enumerate, walk_monte_carlo)

R, B = WalkKind.RADEMACHER, WalkKind.BERNOULLI01


def brute_variance(kind, N, m):
    """Pure-Python Fraction oracle over itertools.product, one list per residue."""
    per = [Fraction(0)] * m
    walks = list(itertools.product(kind.steps, repeat=N))
    for steps in walks:
        s, hits = 0, [0] * m
        for x in steps:
            s += x
            hits[s % m] += 1
        for a in range(m):
            per[a] += (Fraction(hits[a], N) - Fraction(1, m)) ** 2
    return [x / len(walks) for x in per]


def test_psi_exact_hand_cases():
    assert psi_exact(R, 1, 3).probabilities == pytest.approx([0, 0.5, 0.5], abs=1e-15)
    # S_2 in {-2, 0, 0, 2} -> residues {1, 0, 0, 2}
    assert psi_exact(R, 2, 3).probabilities == pytest.approx([0.5, 0.25, 0.25], abs=1e-15)


def test_psi_exact_large_k_near_uniform():
    for k in (50, 200, 1000):
        law = psi_exact(R, k, 3)
        for x in law.probabilities:
            assert abs(x - 1 / 3) <= psi_decay_bound(3, k)


def test_psi_decay_bound_values():
    assert psi_decay_bound(3, 1) == pytest.approx((2 / 3) * (1 - math.pi ** 2 / 27), rel=1e-15)
    assert psi_decay_bound(3, 1) == pytest.approx(0.4230, abs=5e-5)
    # direct evaluation of (4/5)(1 - pi^2/75)^100
    assert psi_decay_bound(5, 100) == pytest.approx(5.96122e-7, rel=1e-5)
    vals = [psi_decay_bound(3, k) for k in range(1, 200)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    dev = max(abs(x - 0.2) for x in psi_exact(R, 100, 5).probabilities)
    assert dev <= psi_decay_bound(5, 100)


@pytest.mark.parametrize("m", [2, 4, 6])
def test_psi_decay_bound_rejects_even(m):
    with pytest.raises(InvalidInputError):
        psi_decay_bound(m, 5)


def test_log_bound_matches_plain():
    for m in (3, 5, 15):
        for k in (1, 10, 300):
            assert log_psi_decay_bound(m, k) == pytest.approx(math.log(psi_decay_bound(m, k)),
                                                              rel=1e-12)


def test_log_deviation_matches_direct():
    for m in (3, 5, 9):
        for k in (1, 5, 20):
            direct = [abs(x - 1 / m) for x in psi_enumerate(R, k, m)]
            logs = psi_log_deviation(k, m)
            for d, lg in zip(direct, logs):
                if d > 1e-12:
                    assert math.exp(lg) == pytest.approx(d, rel=1e-9)


@pytest.mark.parametrize("kind", [R, B])
def test_psi_matches_convolution_oracle(kind):
    worst = 0.0
    for m in range(2, 17):
        for k in range(1, 65):
            exact = psi_exact(kind, k, m).probabilities
            worst = max(worst, max(abs(x - y) for x, y in zip(exact, psi_convolve(kind, k, m))))
    assert worst <= 1e-12


@pytest.mark.parametrize("kind", [R, B])
def test_psi_normalized(kind):
    for m in (2, 3, 7, 16, 33, 64):
        for k in (1, 2, 17, 128, 512):
            law = psi_exact(kind, k, m).probabilities
            assert abs(math.fsum(law) - 1) <= 1e-12
            assert all(0 <= x <= 1 for x in law)


def test_parity_support_for_even_modulus():
    for m in (2, 4, 6, 10):
        for k in range(1, 30):
            law = psi_exact(R, k, m).probabilities
            assert all(x == 0 for a, x in enumerate(law) if (a - k) % 2)


def test_psi_rejects_bad_input():
    for args in ((R, 0, 3), (R, 3, 1), (B, 1, 0)):
        with pytest.raises(InvalidInputError):
            psi_exact(*args)


def test_root_cache():
    c = RootOfUnityCache(12)
    assert c[0] == 1
    assert np.all(np.abs(np.abs(c.values) - 1) <= 1e-12)
    assert c[3] == 1j and c[6] == -1


def test_complex_power_matches_builtin():
    for z in (0.3 + 0.4j, complex(math.cos(1), math.sin(1)), -1 + 0j, 0.5 + 0.5j):
        for n in (0, 1, 2, 7, 100, 513):
            assert complex_power(z, n) == pytest.approx(z ** n, rel=1e-12, abs=1e-15)
            assert abs(complex_power(z, n)) <= 1.0


def test_symmetric_power_sums_are_real():
    worst = 0.0
    for m in range(2, 65):
        w = step_characteristic(B, m)
        for d in (1, 2, 3, 50, 511, 512):
            s = sum(complex_power(complex(x), d) for x in w)
            worst = max(worst, abs(s.imag))
    assert worst < 1e-12


def test_enumeration_hand_cases():
    r = walk_enumerate(R, 1, 3)
    assert r.exact_total == Fraction(2, 3)
    assert [Fraction(x).limit_denominator(100) for x in r.per_residue] == \
        [Fraction(1, 9), Fraction(5, 18), Fraction(5, 18)]
    assert walk_enumerate(R, 2, 2).total == 0
    assert walk_enumerate(B, 1, 2).exact_total == Fraction(1, 2)


@pytest.mark.parametrize("kind", [R, B])
@pytest.mark.parametrize("N,m", [(1, 2), (3, 3), (5, 4), (6, 5), (7, 3)])
def test_enumeration_matches_fraction_oracle(kind, N, m):
    want = brute_variance(kind, N, m)
    got = walk_enumerate(kind, N, m)
    assert got.exact_total == sum(want)
    assert list(got.per_residue) == [float(x) for x in want]


def test_enumeration_limit():
    with pytest.raises(InvalidInputError):
        walk_enumerate(R, 25, 3)


@pytest.mark.parametrize("kind,N,m,want", [
    (R, 1, 2, Fraction(1, 2)), (R, 2, 2, Fraction(0)), (R, 2, 3, Fraction(1, 6)),
    (B, 2, 2, Fraction(1, 4)),
])
def test_variance_hand_cases(kind, N, m, want):
    assert sum(brute_variance(kind, N, m)) == want
    assert variance_sum_exact(kind, N, m) == pytest.approx(float(want), abs=1e-15)


def test_rademacher_two_steps_mod_three_by_hand():
    # per residue: 10/144, 7/144, 7/144
    assert brute_variance(R, 2, 3) == [Fraction(10, 144), Fraction(7, 144), Fraction(7, 144)]


@pytest.mark.parametrize("kind", [R, B])
def test_variance_matches_enumeration(kind):
    for N in range(1, 13):
        for m in range(2, 9):
            assert abs(variance_sum_exact(kind, N, m) - walk_enumerate(kind, N, m).total) <= 1e-12


@pytest.mark.parametrize("kind", [R, B])
@pytest.mark.parametrize("m", [2, 3, 4, 7, 12])
def test_curve_matches_scalar(kind, m):
    curve = variance_sum_curve(kind, 600, m)
    for N in (1, 2, 3, 10, 99, 100, 377, 600):
        assert curve[N - 1] == pytest.approx(variance_sum_exact(kind, N, m), rel=1e-10, abs=1e-15)


@pytest.mark.parametrize("kind", [R, B])
def test_variance_scaling_sample(kind):
    for m in (2, 3, 5, 8, 12):
        curve = variance_sum_curve(kind, 5000, m)
        N = np.arange(1, 5001)
        sel = N >= m * m
        assert np.max(curve[sel] * N[sel] / m ** 2) <= 2


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([R, B]), st.integers(1, 10), st.integers(2, 6))
def test_variance_nonnegative_and_bounded(kind, N, m):
    v = variance_sum_exact(kind, N, m)
    # each walk has sum_a (Phi - 1/m)^2 <= 1 - 1/m
    assert -1e-15 <= v <= 1 - 1 / m + 1e-12


def test_monte_carlo_two_steps():
    mc = walk_monte_carlo(R, 2, 3, 10 ** 6, 1)
    assert abs(mc.estimate - 1 / 6) <= 4 * mc.standard_error + 1e-12


def test_monte_carlo_deterministic():
    a = walk_monte_carlo(B, 37, 5, 5000, 99)
    b = walk_monte_carlo(B, 37, 5, 5000, 99)
    assert a == b
    c = walk_monte_carlo(B, 37, 5, 5000, 100)
    assert c.estimate != a.estimate


def test_monte_carlo_independent_of_batching():
    from concurrent.futures import ThreadPoolExecutor

    a = walk_monte_carlo(R, 70, 4, 3000, 7, batch=1000)
    b = walk_monte_carlo(R, 70, 4, 3000, 7, batch=128)
    with ThreadPoolExecutor(4) as ex:
        c = walk_monte_carlo(R, 70, 4, 3000, 7, batch=333, executor=ex)
    assert a == b == c


@pytest.mark.slow
def test_monte_carlo_long_walk():
    mc = walk_monte_carlo(B, 100, 4, 10 ** 6, 1)
    assert abs(mc.estimate - variance_sum_exact(B, 100, 4)) <= 4 * mc.standard_error


def test_monte_carlo_needs_trials():
    with pytest.raises(InvalidInputError):
        walk_monte_carlo(R, 5, 3, 99, 0)
