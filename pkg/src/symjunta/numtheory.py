"""Primes in intervals and progressions, Lucas congruences, and mod-p periodicity
certificates for integer-valued polynomials.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import comb, gcd, isqrt
from typing import Iterable

import numpy as np

from .errors import CertificateUnavailable, InvalidModulusError, InvalidQueryError, ResourceCapError
from .structure import BinomialPolynomial

SIEVE_CAP = 10**8
SEGMENT = 1 << 18

# deterministic for n < 3.3e24, which covers every 64-bit input
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit n."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _small_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


def primes_in_interval(lo: int, hi: int, cap: int = SIEVE_CAP) -> list[int]:
    """All primes in [lo, hi] by a segmented sieve of Eratosthenes."""
    if hi > cap:
        raise ResourceCapError(f"hi={hi} above sieve cap {cap}")
    lo = max(lo, 2)
    if hi < lo:
        return []
    base = _small_primes(isqrt(hi))
    out: list[int] = []
    for seg_lo in range(lo, hi + 1, SEGMENT):
        seg_hi = min(seg_lo + SEGMENT - 1, hi)
        mark = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > seg_hi:
                break
            start = max(p * p, (seg_lo + p - 1) // p * p)
            mark[start - seg_lo :: p] = False
        out.extend((np.flatnonzero(mark) + seg_lo).tolist())
    return out


@dataclass(frozen=True)
class APQuery:
    lo: int
    x: int
    M: int
    a: int
    primes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.primes)

    @property
    def phi(self) -> int:
        return euler_phi(self.M)

    def to_dict(self) -> dict:
        return {"lo": self.lo, "x": self.x, "M": self.M, "a": self.a,
                "count": self.count, "phi": self.phi, "primes": list(self.primes)}


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def primes_in_ap(lo: int, hi: int, M: int, a: int, cap: int = SIEVE_CAP) -> APQuery:
    if M < 1:
        raise InvalidQueryError(f"modulus must be positive, got {M}")
    if gcd(M, a) != 1:
        raise InvalidQueryError(f"gcd({M}, {a}) != 1")
    a %= M
    ps = tuple(p for p in primes_in_interval(lo, hi, cap) if p % M == a)
    return APQuery(lo, hi, M, a, ps)


# --------------------------------------------------------------------------
# Lucas


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise InvalidModulusError(f"{p} is not prime")


def binomial_mod(n: int, r: int, p: int) -> int:
    """C(n, r) mod p via base-p digits."""
    _require_prime(p)
    if r < 0 or r > n:
        return 0
    out = 1
    while n or r:
        ni, ri = n % p, r % p
        if ri > ni:
            return 0
        out = out * comb(ni, ri) % p
        n //= p
        r //= p
    return out


@dataclass
class LucasCheck:
    m: int
    l: int
    r: int
    multiple_clause: bool  # C(mr, n) = 0 mod r for every n <= mr with r not dividing n
    digit_clause: bool  # C(mr, lr) = C(m, l) mod r
    failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.multiple_clause and self.digit_clause

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        d["lhs"] = comb(self.m * self.r, self.l * self.r) % self.r
        d["rhs"] = comb(self.m, self.l) % self.r
        return d


def lucas_check(m: int, l: int, r: int) -> LucasCheck:
    """Check both congruences with exact binomials reduced mod r."""
    _require_prime(r)
    if not 0 <= l <= m:
        raise ValueError(f"need 0 <= l <= m, got l={l}, m={m}")
    mr = m * r
    failures = [n for n in range(mr + 1) if n % r and comb(mr, n) % r]
    digit = comb(mr, l * r) % r == comb(m, l) % r
    return LucasCheck(m, l, r, not failures, digit, failures)


# --------------------------------------------------------------------------
# periodicity of integer-valued polynomials


@dataclass
class PeriodicityReport:
    p: int
    modular: bool
    exact_applicable: list[int]  # j with P(j), P(j+p) both in {-1, 0, 1}
    exact_holds: bool
    failures: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.modular


def mod_periodicity_check(P: BinomialPolynomial, p: int, j_range: Iterable[int]) -> PeriodicityReport:
    """P(j+p) = P(j) mod p over j_range.

    Where both values lie in {-1, 0, 1} and p >= 3 the congruence forces equality;
    those j are listed and equality is checked.
    """
    _require_prime(p)
    if p < P.N:
        raise InvalidModulusError(f"p={p} below the degree bound N={P.N}")
    failures, exact = [], []
    exact_ok = True
    for j in j_range:
        u, v = P(j), P(j + p)
        if (v - u) % p:
            failures.append(j)
        if p >= 3 and abs(u) <= 1 and abs(v) <= 1:
            exact.append(j)
            exact_ok &= u == v
    return PeriodicityReport(p, not failures, exact, exact_ok, failures)


@dataclass(frozen=True)
class PeriodicityCertificate:
    N: int
    k: int
    h: int
    q: int
    r: int
    M: int
    t: int
    s: int
    ell: int  # s - t = ell * M + 2

    @property
    def index_set(self) -> list[int]:
        return sorted(set(range(0, self.k - self.N + 1)) | set(range(self.N, self.k)))

    def verify(self) -> bool:
        lo, hi = self.N, self.N + self.h
        primes = (self.q, self.r, self.t, self.s)
        if not all(is_prime(x) and lo <= x <= hi for x in primes):
            return False
        if self.r - self.q != self.M or self.M < 1:
            return False
        gaps = [b - a for a, b in zip(primes_in_interval(lo, hi), primes_in_interval(lo, hi)[1:])]
        if min(gaps) != self.M:
            return False
        return (self.s - self.t - 2) % self.M == 0 and self.s - self.t == self.ell * self.M + 2

    def to_dict(self) -> dict:
        return {"N": self.N, "k": self.k, "q": self.q, "r": self.r, "M": self.M,
                "t": self.t, "s": self.s, "h": self.h, "ell": self.ell}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def two_periodicity_certificate(N: int, k: int) -> PeriodicityCertificate:
    """Primes q < r at minimal gap M, and t = -1, s = 1 (mod M), all in [N, N + h].

    For M <= 2 the residue classes collapse; t and s are then the two smallest
    primes in the interval with s - t = 2 (mod M).
    """
    if not 1 <= N <= k:
        raise ValueError(f"need 1 <= N <= k, got N={N}, k={k}")
    h = (k - N) // 3
    lo, hi = N, N + h
    ps = primes_in_interval(lo, hi) if hi >= 2 else []
    if len(ps) < 2:
        raise CertificateUnavailable(f"fewer than two primes in [{lo}, {hi}]", (lo, hi))
    gaps = [(b - a, a, b) for a, b in zip(ps, ps[1:])]
    M, q, r = min(gaps)
    if M <= 2:
        odd = [p for p in ps if p % 2] if M == 2 else ps
        if len(odd) < 2:
            raise CertificateUnavailable(f"no usable pair in [{lo}, {hi}]", (lo, hi))
        t, s = odd[0], odd[1]
    else:
        t = next((p for p in ps if p % M == M - 1), None)
        if t is None:
            raise CertificateUnavailable(f"no prime = -1 mod {M} in [{lo}, {hi}]", (lo, hi))
        s = next((p for p in ps if p > t and p % M == 1), None)
        if s is None:
            raise CertificateUnavailable(f"no prime = 1 mod {M} in ({t}, {hi}]", (lo, hi))
    ell = (s - t - 2) // M
    return PeriodicityCertificate(N, k, h, q, r, M, t, s, ell)


@dataclass
class LucasRelationReport:
    m: int
    r: int
    sums: dict[int, int]
    congruence_holds: bool
    exact_holds: bool
    bound_holds: bool  # 2^m < r

    def to_dict(self) -> dict:
        return {"m": self.m, "r": self.r, "congruence_holds": self.congruence_holds,
                "exact_holds": self.exact_holds, "two_pow_m_below_r": self.bound_holds,
                "sums": {str(k): v for k, v in self.sums.items()}}


def lucas_relation_check(P: BinomialPolynomial, m: int, r: int, nu_range: Iterable[int]) -> LucasRelationReport:
    """sum_l (-1)^l C(m, l) P(nu + l r) = 0 (mod r) for each nu.

    Requires m r >= N so that the (m r)-th difference of P vanishes.
    """
    _require_prime(r)
    if m * r < P.N:
        raise ValueError(f"m*r={m * r} below degree bound N={P.N}")
    sums = {
        nu: sum((-1) ** l * comb(m, l) * P(nu + l * r) for l in range(m + 1)) for nu in nu_range
    }
    return LucasRelationReport(
        m, r, sums,
        congruence_holds=all(v % r == 0 for v in sums.values()),
        exact_holds=all(v == 0 for v in sums.values()),
        bound_holds=2**m < r,
    )
