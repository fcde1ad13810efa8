"""Measures induced by nonnegative functions on the cube and their moments.

Everything is exact: weights are integers, moments are ``Fraction``s.
Symmetric sources are carried per weight class (k + 1 numbers), so k can be
in the hundreds; general sources are carried per point.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .boolfn import BooleanFunction, SymmetricFunction, binom, popcount
from .errors import InvalidMeasureError


@dataclass(frozen=True)
class CubeMeasure:
    """Probability measure on {0,1}^k proportional to nonnegative integer weights.

    Exactly one of ``point_weights`` (length 2^k) or ``class_weights``
    (length k + 1, weight per point of each Hamming weight) is set.
    """

    k: int
    kind: str
    point_weights: tuple[int, ...] | None = None
    class_weights: tuple[int, ...] | None = None

    def __post_init__(self):
        w = self.point_weights if self.point_weights is not None else self.class_weights
        if w is None:
            raise InvalidMeasureError("no weights given")
        if any(v < 0 for v in w):
            raise InvalidMeasureError("weights must be nonnegative")
        if not any(w):
            raise InvalidMeasureError("source is identically zero")

    @property
    def total(self) -> int:
        if self.point_weights is not None:
            return sum(self.point_weights)
        return sum(g * binom(self.k, j) for j, g in enumerate(self.class_weights))

    def mass(self, x: int) -> Fraction:
        if self.point_weights is not None:
            return Fraction(self.point_weights[x], self.total)
        return Fraction(self.class_weights[popcount(x)], self.total)

    @property
    def symmetric(self) -> bool:
        return self.class_weights is not None


def uniform_measure(k: int) -> CubeMeasure:
    return CubeMeasure(k, "uniform", class_weights=(1,) * (k + 1))


def induced_measure(f: BooleanFunction | SymmetricFunction | Sequence[int], k: int | None = None) -> CubeMeasure:
    """x gets mass f(x) / sum f.  A plain sequence is read as a point table of length 2^k."""
    if isinstance(f, SymmetricFunction):
        return CubeMeasure(f.k, "induced", class_weights=f.values)
    if isinstance(f, BooleanFunction):
        return CubeMeasure(f.k, "induced", point_weights=f.table)
    table = tuple(int(v) for v in f)
    k = k if k is not None else len(table).bit_length() - 1
    if len(table) != 1 << k:
        raise InvalidMeasureError(f"table length {len(table)} is not 2^{k}")
    return CubeMeasure(k, "induced", point_weights=table)


def product_moment(measure: CubeMeasure, indices: Sequence[int]) -> Fraction:
    """E[prod_{i in indices} X_i] with 1-based coordinate indices."""
    idx = sorted(set(indices))
    if any(not 1 <= i <= measure.k for i in idx):
        raise ValueError(f"indices must lie in [1, {measure.k}]")
    s = len(idx)
    if measure.symmetric:
        k = measure.k
        num = sum(g * binom(k - s, j - s) for j, g in enumerate(measure.class_weights))
        return Fraction(num, measure.total)
    mask = sum(1 << (i - 1) for i in idx)
    num = sum(w for x, w in enumerate(measure.point_weights) if x & mask == mask)
    return Fraction(num, measure.total)


@dataclass(frozen=True)
class WeightDistribution:
    """Law of S = X_1 + ... + X_k; masses[j] = Pr[S = j]."""

    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.masses) != 1:
            raise InvalidMeasureError("masses must sum to 1")
        if any(m < 0 for m in self.masses):
            raise InvalidMeasureError("masses must be nonnegative")

    @property
    def k(self) -> int:
        return len(self.masses) - 1

    def is_symmetric(self) -> bool:
        return self.masses == self.masses[::-1]

    @property
    def mean(self) -> Fraction:
        return power_moment(self, 1)

    @property
    def variance(self) -> Fraction:
        return power_moment(self, 2) - power_moment(self, 1) ** 2


def weight_distribution(measure: CubeMeasure) -> WeightDistribution:
    k, F = measure.k, measure.total
    if measure.symmetric:
        return WeightDistribution(
            tuple(Fraction(g * binom(k, j), F) for j, g in enumerate(measure.class_weights))
        )
    acc = [0] * (k + 1)
    for x, w in enumerate(measure.point_weights):
        acc[popcount(x)] += w
    return WeightDistribution(tuple(Fraction(a, F) for a in acc))


def power_moment(dist: WeightDistribution, s: int) -> Fraction:
    if s < 0:
        raise ValueError("moment order must be nonnegative")
    return sum((m * j**s for j, m in enumerate(dist.masses) if m), Fraction(0))


def binomial_moment(k: int, s: int) -> Fraction:
    """s-th moment of S under the uniform measure, 2^-k sum_j C(k, j) j^s."""
    if s < 0:
        raise ValueError("moment order must be nonnegative")
    return Fraction(sum(binom(k, j) * j**s for j in range(k + 1)), 1 << k)


def uniform_variance(k: int) -> Fraction:
    return binomial_moment(k, 2) - binomial_moment(k, 1) ** 2


def symmetrize(f: SymmetricFunction | BooleanFunction):
    """g(x) = f(x) + f(complement of x)."""
    if isinstance(f, SymmetricFunction):
        v = f.values
        return SymmetricFunction(tuple(v[j] + v[f.k - j] for j in range(f.k + 1)))
    full = (1 << f.k) - 1
    return BooleanFunction(f.k, tuple(f.table[x] + f.table[x ^ full] for x in range(1 << f.k)))


def _mismatch(s, nu, mu, indices=None) -> dict:
    d = {"s": s, "nu": str(nu), "mu": str(mu)}
    if indices is not None:
        d["indices"] = list(indices)
    return d


def moment_match_report(f: SymmetricFunction | BooleanFunction | CubeMeasure, r: int) -> dict:
    """Compare product and power moments of the induced measure with the uniform one, orders 0..r."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    nu = f if isinstance(f, CubeMeasure) else induced_measure(f)
    k = nu.k
    r = min(r, k)
    mu = uniform_measure(k)

    matched, first = -1, None
    for s in range(r + 1):
        index_sets = [tuple(range(1, s + 1))] if nu.symmetric else combinations(range(1, k + 1), s)
        for idx in index_sets:
            a, b = product_moment(nu, idx), product_moment(mu, idx)
            if a != b:
                first = _mismatch(s, a, b, idx)
                break
        if first is not None:
            break
        matched = s

    tau, binom_dist = weight_distribution(nu), weight_distribution(mu)
    p_matched, p_first = -1, None
    for s in range(r + 1):
        a, b = power_moment(tau, s), power_moment(binom_dist, s)
        if a != b:
            p_first = _mismatch(s, a, b)
            break
        p_matched = s

    return {
        "r": r,
        "matched_up_to": matched,
        "first_mismatch": first,
        "power_matched_up_to": p_matched,
        "power_first_mismatch": p_first,
    }


def variance_gap_check(tau: WeightDistribution, k: int, eps: Fraction) -> dict:
    """Variance of S under tau versus the uniform measure.

    When tau is symmetric about k/2 and puts no mass strictly inside
    ((1 - eps) k / 2, (1 + eps) k / 2), Var_tau(S) >= (eps k / 2)^2 must hold.
    """
    if tau.k != k:
        raise ValueError(f"distribution has k={tau.k}, expected {k}")
    eps = Fraction(eps)
    lo, hi = (1 - eps) * k / 2, (1 + eps) * k / 2
    band_empty = all(m == 0 for j, m in enumerate(tau.masses) if lo < j < hi)
    symmetric = tau.is_symmetric()
    var_tau = tau.variance
    var_mu = uniform_variance(k)
    floor = (eps * k / 2) ** 2
    applies = band_empty and symmetric
    return {
        "k": k,
        "eps": str(eps),
        "var_tau": str(var_tau),
        "var_mu": str(var_mu),
        "symmetric": symmetric,
        "middle_band_empty": band_empty,
        "lower_bound": str(floor),
        "lower_bound_applies": applies,
        "lower_bound_holds": (var_tau >= floor) if applies else None,
        "exceeds_uniform": var_tau > var_mu,
        # the uniform variance is often quoted as k; the defining sums give k/4
        "claimed_uniform_variance": k,
        "claimed_matches": var_mu == k,
    }


def to_json(report: dict) -> str:
    return json.dumps(report)
