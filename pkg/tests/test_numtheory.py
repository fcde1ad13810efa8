import random
from math import comb, gcd

import pytest
from hypothesis import given, settings, strategies as st

from symjunta.errors import CertificateUnavailable, InvalidModulusError, InvalidQueryError, ResourceCapError
from symjunta.numtheory import (
    binomial_mod,
    is_prime,
    lucas_check,
    lucas_relation_check,
    mod_periodicity_check,
    primes_in_ap,
    primes_in_interval,
    two_periodicity_certificate,
)
from symjunta.structure import BinomialPolynomial, polynomial_of
from symjunta.boolfn import SymmetricFunction, max_null_order

from oracles import newton_eval, trial_division_primes


def test_interval_examples():
    assert primes_in_interval(10, 20) == [11, 13, 17, 19]
    assert primes_in_interval(14, 16) == []
    assert primes_in_interval(2, 2) == [2]


def test_interval_cap():
    with pytest.raises(ResourceCapError):
        primes_in_interval(2, 10**9)


def test_segments_against_trial_division():
    for lo, hi in [(2, 5000), (99_000, 101_000), (262_100, 262_200), (524_280, 524_300)]:
        assert primes_in_interval(lo, hi) == trial_division_primes(lo, hi)


def test_ap_examples():
    q = primes_in_ap(2, 30, 4, 1)
    assert q.primes == (5, 13, 17, 29) and q.count == 4 and q.phi == 2
    assert primes_in_ap(2, 40, 6, 1).primes == (7, 13, 19, 31, 37)
    assert list(primes_in_ap(3, 200, 2, 1).primes) == primes_in_interval(3, 200)
    with pytest.raises(InvalidQueryError):
        primes_in_ap(2, 100, 6, 3)


def test_miller_rabin():
    small = set(trial_division_primes(2, 20000))
    assert all(is_prime(n) == (n in small) for n in range(20000))
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_binomial_mod_examples():
    assert binomial_mod(10, 4, 5) == 0
    assert binomial_mod(10, 5, 5) == comb(2, 1) % 5 == 2
    with pytest.raises(InvalidModulusError):
        binomial_mod(10, 5, 6)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 3000), st.integers(0, 3000), st.sampled_from([2, 3, 5, 7, 11, 13, 97, 101]))
def test_binomial_mod_matches_exact(n, r, p):
    assert binomial_mod(n, r, p) == comb(n, r) % p


def test_lucas_check_trivial_and_invalid():
    assert lucas_check(5, 0, 7).ok
    with pytest.raises(InvalidModulusError):
        lucas_check(2, 1, 9)


def test_mod_periodicity_examples():
    P = BinomialPolynomial(3, (0, 1, 1))
    assert P.values(range(10)) == [0, 1, 3, 6, 10, 15, 21, 28, 36, 45]
    assert [v % 5 for v in P.values(range(5))] == [0, 1, 3, 1, 0]
    assert mod_periodicity_check(P, 5, range(20))
    const = BinomialPolynomial(1, (7,))
    assert mod_periodicity_check(const, 3, range(-10, 10))
    with pytest.raises(InvalidModulusError):
        mod_periodicity_check(P, 2, range(3))


PRIMES = [p for p in range(2, 60) if is_prime(p)]


@settings(max_examples=1000, deadline=None)
@given(st.integers(1, 8).flatmap(lambda N: st.tuples(
    st.lists(st.integers(-50, 50), min_size=N, max_size=N),
    st.sampled_from([p for p in PRIMES if p >= N]),
    st.integers(-30, 30),
)))
def test_mod_periodicity_property(args):
    a, p, j0 = args
    P = BinomialPolynomial(len(a), tuple(a))
    assert mod_periodicity_check(P, p, range(j0, j0 + 5)).modular


def _small_valued_polynomials(k):
    """Integer-valued P of degree < N with |P| <= 1 on [0, k-1], from sign patterns of symmetric f."""
    out = []
    for i in range(1 << (k + 1)):
        f = SymmetricFunction.from_index(i, k)
        N = k - max_null_order(f)
        out.append((N, polynomial_of(f, N)))
    return out


def test_exact_periodicity_on_generated_instances():
    checked = 0
    for k in range(4, 15):
        for N, P in _small_valued_polynomials(k):
            for p in (q for q in PRIMES if max(N, 3) <= q <= k - 1):
                rep = mod_periodicity_check(P, p, range(0, k - p))
                assert rep.modular and rep.exact_holds
                assert rep.exact_applicable == list(range(0, k - p))
                checked += 1
    assert checked > 100


def test_exact_equality_fails_for_p2_so_it_is_not_claimed():
    # f = 0110 is 1-null with N = 2; P = (1, 0, -1) on [0, 2] is 2-periodic only mod 2
    P = polynomial_of(SymmetricFunction.from_bits("0110"))
    assert P.N == 2 and P.values(range(3)) == [1, 0, -1]
    rep = mod_periodicity_check(P, 2, range(1))
    assert rep.modular and rep.exact_applicable == []


def test_certificate_twin_primes():
    c = two_periodicity_certificate(100, 400)
    assert (c.h, c.q, c.r, c.M) == (100, 101, 103, 2)
    assert c.verify()
    assert c.to_dict() == {"N": 100, "k": 400, "q": 101, "r": 103, "M": 2, "t": 101, "s": 103, "h": 100, "ell": 0}


def test_certificate_unavailable():
    with pytest.raises(CertificateUnavailable) as ei:
        two_periodicity_certificate(200, 205)
    assert ei.value.interval == (200, 201)


def test_certificate_general_gap():
    rng = random.Random(5)
    for _ in range(40):
        N = rng.randint(20, 5000)
        k = N + rng.randint(30, 600)
        try:
            c = two_periodicity_certificate(N, k)
        except CertificateUnavailable:
            continue
        assert c.verify()
        ps = primes_in_interval(N, N + c.h)
        assert c.M == min(b - a for a, b in zip(ps, ps[1:]))
        assert c.M <= max(b - a for a, b in zip(ps, ps[1:]))
        assert (c.s - c.t) % c.M == 2 % c.M


def test_certificate_with_residue_classes():
    # interval without twin primes forces M > 2 and genuine residue conditions
    for N in range(2, 3000):
        k = N + 3 * 12
        try:
            c = two_periodicity_certificate(N, k)
        except CertificateUnavailable:
            continue
        if c.M > 2:
            assert c.t % c.M == c.M - 1 and c.s % c.M == 1 and c.t < c.s
            assert c.verify()
            return
    pytest.fail("no interval with minimal gap above 2 found")


def test_lucas_relation_examples():
    one = BinomialPolynomial(1, (1,))
    for m in range(1, 6):
        rep = lucas_relation_check(one, m, 7, range(10))
        assert rep.exact_holds and rep.congruence_holds
    P = BinomialPolynomial(3, (0, 0, 1))
    rep = lucas_relation_check(P, 2, 7, [0])
    assert rep.sums == {0: 49} and rep.congruence_holds and not rep.exact_holds
    assert rep.bound_holds


def test_lucas_relation_on_null_functions():
    checked = 0
    for k in range(4, 15):
        for N, P in _small_valued_polynomials(k):
            for r in PRIMES:
                if N <= 2 * r <= k:
                    rep = lucas_relation_check(P, 2, r, range(0, k - 2 * r + 1))
                    assert rep.congruence_holds
                    checked += 1
    assert checked > 50
