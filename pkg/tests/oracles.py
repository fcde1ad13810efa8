"""Brute-force reference computations, deliberately independent of the package code paths."""
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np


def all_points(k):
    return list(product((0, 1), repeat=k))


def sym_value(values, x):
    return values[sum(x)]


def direct_coefficient(f, k, S):
    """sum_x f(x) * (-1)^(sum_{i in S} x_i); f a callable on tuples, S 0-based indices."""
    return sum(f(x) * (-1) ** sum(x[i] for i in S) for x in all_points(k))


def direct_conditional_prob(values, t, w):
    """Pr[f = 1 | first t coordinates fixed to a weight-w pattern], by enumerating completions."""
    k = len(values) - 1
    sigma = (1,) * w + (0,) * (t - w)
    hits = sum(sym_value(values, sigma + rest) for rest in product((0, 1), repeat=k - t))
    return Fraction(hits, 2 ** (k - t))


def trial_division_primes(lo, hi):
    """Primes in [lo, hi] by dividing every candidate by every integer 2..sqrt(hi)."""
    cand = np.arange(max(lo, 2), hi + 1, dtype=np.int64)
    alive = np.ones(cand.size, dtype=bool)
    d = 2
    while d * d <= hi:
        alive &= (cand % d != 0) | (cand == d)
        d += 1
    return cand[alive].tolist()


def newton_eval(a, x):
    """sum_j a_j C(x, j) for x >= 0 via math.comb."""
    return sum(c * comb(x, j) for j, c in enumerate(a))


def point_product_moment(table, k, idx):
    """E[prod X_i] under the measure proportional to table, by enumeration."""
    pts = all_points(k)
    F = sum(table[_enc(x)] for x in pts)
    num = sum(table[_enc(x)] for x in pts if all(x[i - 1] for i in idx))
    return Fraction(num, F)


def _enc(x):
    return sum(b << i for i, b in enumerate(x))
