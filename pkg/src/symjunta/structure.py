"""t-nullity, the window equations, exhaustive min-order enumeration, and the
difference-sequence / integer-valued polynomial machinery for symmetric functions.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Sequence

import numpy as np

from .boolfn import (
    BooleanFunction,
    SymmetricFunction,
    binom,
    index_bits,
    level_coefficients,
    level_matrix_array,
    max_null_order,
)
from .errors import FitError, ResourceCapError

DEFAULT_ENUM_CAP = int(os.environ.get("SYMJUNTA_ENUM_CAP", "22"))
CHUNK = 1 << 16


# --------------------------------------------------------------------------
# conditional probabilities and nullity


@dataclass(frozen=True)
class NullityProfile:
    k: int
    t: int
    numerators: tuple[int, ...]  # over 2^(k-t), one per w = 0..t

    @property
    def denominator(self) -> int:
        return 1 << (self.k - self.t)

    @property
    def probs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.denominator) for n in self.numerators)

    @property
    def is_null(self) -> bool:
        return len(set(self.numerators)) <= 1

    def __bool__(self) -> bool:
        return self.is_null


def _completion_count(f: SymmetricFunction, t: int, w: int) -> int:
    k = f.k
    return sum(v * binom(k - t, i - w) for i, v in enumerate(f.values) if v)


def conditional_prob(f: SymmetricFunction, t: int, w: int) -> Fraction:
    """Pr[f(x) = 1 | x_S = sigma] for any |S| = t and |sigma| = w."""
    if not 0 <= w <= t <= f.k:
        raise ValueError(f"need 0 <= w <= t <= k, got w={w}, t={t}, k={f.k}")
    return Fraction(_completion_count(f, t, w), 1 << (f.k - t))


def is_t_null(f: SymmetricFunction, t: int) -> NullityProfile:
    if not 1 <= t <= f.k:
        raise ValueError(f"t={t} outside [1, {f.k}]")
    return NullityProfile(f.k, t, tuple(_completion_count(f, t, w) for w in range(t + 1)))


def is_t_null_table(f: BooleanFunction, t: int) -> bool:
    """Definition-level check on an arbitrary function: every p_{S,sigma} with |S|=t agrees."""
    return bool(t_null_batch(np.asarray([f.table]), f.k, t)[0])


def t_null_batch(tables: np.ndarray, k: int, t: int) -> np.ndarray:
    """Row-wise t-nullity for a (batch, 2^k) array of 0/1 truth tables."""
    tables = np.asarray(tables, dtype=np.int64)
    xs = np.arange(1 << k)
    ref = None
    ok = np.ones(tables.shape[0], dtype=bool)
    for S in combinations(range(k), t):
        proj = np.zeros_like(xs)
        for pos, i in enumerate(S):
            proj |= ((xs >> i) & 1) << pos
        for sigma in range(1 << t):
            # all conditioning events have the same size 2^(k-t), so counts compare directly
            counts = tables[:, proj == sigma].sum(axis=1)
            if ref is None:
                ref = counts
            else:
                ok &= counts == ref
    return ok


# --------------------------------------------------------------------------
# window equations


@dataclass(frozen=True)
class WindowSystem:
    k: int
    N: int
    sums: tuple[int, ...]

    @property
    def c_N(self) -> int | None:
        return self.sums[0] if len(set(self.sums)) == 1 else None

    @property
    def consistent(self) -> bool:
        return self.c_N is not None

    @property
    def epsilon(self) -> Fraction:
        return Fraction(self.k - self.N, self.k)


def window_system(f: SymmetricFunction, t0: int) -> WindowSystem:
    k = f.k
    if not 1 <= t0 <= k:
        raise ValueError(f"t0={t0} outside [1, {k}]")
    N = k - t0
    sums = tuple(
        sum(binom(N, j) * f.values[nu + j] for j in range(N + 1)) for nu in range(k - N + 1)
    )
    return WindowSystem(k, N, sums)


# --------------------------------------------------------------------------
# difference sequence and integer-valued polynomials


@dataclass(frozen=True)
class DifferenceSequence:
    x: tuple[int, ...]

    def alternates(self) -> bool:
        """Nonzero entries alternate in sign and are all +-1."""
        nz = [v for v in self.x if v]
        if any(abs(v) != 1 for v in nz):
            return False
        return all(a == -b for a, b in zip(nz, nz[1:]))

    def __len__(self) -> int:
        return len(self.x)


def difference_sequence(f: SymmetricFunction) -> DifferenceSequence:
    v = f.values
    return DifferenceSequence(tuple(v[j + 1] - v[j] for j in range(f.k)))


def generalized_binom(x: int, j: int) -> int:
    """C(x, j) for any integer x (falling factorial over j!)."""
    if j < 0:
        return 0
    num = 1
    for i in range(j):
        num *= x - i
    den = 1
    for i in range(2, j + 1):
        den *= i
    return num // den


@dataclass(frozen=True)
class BinomialPolynomial:
    """P(x) = sum_j a[j] * C(x, j), j < N; the zero polynomial when N = 0."""

    N: int
    a: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) != self.N:
            raise ValueError(f"expected {self.N} coefficients, got {len(self.a)}")

    def __call__(self, x: int) -> int:
        return sum(c * generalized_binom(x, j) for j, c in enumerate(self.a) if c)

    def values(self, xs: Sequence[int] | range) -> list[int]:
        return [self(x) for x in xs]

    @property
    def degree(self) -> int:
        """Actual degree; -1 for the zero polynomial."""
        for j in range(self.N - 1, -1, -1):
            if self.a[j]:
                return j
        return -1

    def to_dict(self) -> dict:
        return {"N": self.N, "a": list(self.a)}


def fit_binomial_polynomial(values: Sequence[int], N: int) -> BinomialPolynomial:
    """Newton forward-difference fit of a degree < N polynomial to P(0), P(1), ...

    All samples beyond the first N must agree with the fit.
    """
    values = [int(v) for v in values]
    if N < 0 or N > len(values):
        raise FitError(f"need 0 <= N <= {len(values)}, got N={N}")
    a = []
    row = list(values)
    for _ in range(N):
        a.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    # the N-th differences of a degree < N polynomial vanish
    if any(row):
        bad = next(i for i, v in enumerate(row) if v)
        raise FitError(f"samples not fit by a degree < {N} polynomial (N-th difference at {bad} is {row[bad]})")
    return BinomialPolynomial(N, tuple(a))


def signed_differences(f: SymmetricFunction) -> list[int]:
    """(-1)^j X_j, the sample values of P."""
    return [(-1) ** j * x for j, x in enumerate(difference_sequence(f).x)]


def polynomial_of(f: SymmetricFunction, N: int | None = None) -> BinomialPolynomial:
    """The P with X_j = (-1)^j P(j); N defaults to k minus the maximal null order."""
    if N is None:
        N = f.k - max_null_order(f)
    return fit_binomial_polynomial(signed_differences(f), N)


def verify_recurrence(f: SymmetricFunction, N1: int) -> bool:
    """sum_j C(N1, j) X_{nu+j} = 0 for every nu in [0, k-N1-1]."""
    k = f.k
    if not 0 <= N1 <= k:
        raise ValueError(f"N1={N1} outside [0, {k}]")
    X = difference_sequence(f).x
    return all(
        sum(binom(N1, j) * X[nu + j] for j in range(N1 + 1)) == 0 for nu in range(k - N1)
    )


def check_two_periodicity(P: BinomialPolynomial, N: int, k: int) -> bool:
    """P(j) == P(j+2) whenever j and j+2 both lie in [0, k-N] u [N, k-1]."""
    A = set(range(0, k - N + 1)) | set(range(N, k))
    return all(P(j) == P(j + 2) for j in A if j + 2 in A)


# --------------------------------------------------------------------------
# exhaustive enumeration


def exceptional_indices(k: int) -> frozenset[int]:
    return frozenset(
        f.index
        for f in (
            SymmetricFunction.zero(k),
            SymmetricFunction.one(k),
            SymmetricFunction.parity(k),
            SymmetricFunction.parity_complement(k),
        )
    )


def level_coeff_batch(indices: np.ndarray, k: int) -> np.ndarray:
    """(batch, k+1) scaled level coefficients for enumeration indices."""
    return index_bits(indices, k) @ level_matrix_array(k)


def completion_counts_batch(bits: np.ndarray, k: int, t: int) -> np.ndarray:
    """(batch, t+1) numerators of p_{t,w} over 2^(k-t) for rows of values f_0..f_k."""
    B = np.array([[binom(k - t, i - w) for w in range(t + 1)] for i in range(k + 1)], dtype=np.int64)
    return bits @ B


def t_null_symmetric_batch(bits: np.ndarray, k: int, t: int) -> np.ndarray:
    c = completion_counts_batch(bits, k, t)
    return (c == c[:, :1]).all(axis=1)


def window_sums_batch(bits: np.ndarray, k: int, N: int) -> np.ndarray:
    W = np.zeros((k + 1, k - N + 1), dtype=np.int64)
    for nu in range(k - N + 1):
        for j in range(N + 1):
            W[nu + j, nu] = binom(N, j)
    return bits @ W


def _min_orders(coeffs: np.ndarray) -> np.ndarray:
    """First nonzero level >= 1 per row; 0 when every nonconstant level is zero."""
    nz = coeffs[:, 1:] != 0
    first = nz.argmax(axis=1) + 1
    return np.where(nz.any(axis=1), first, 0)


def _shard_range(k: int, shard_index: int, shard_count: int) -> range:
    total = 1 << (k + 1)
    if not 0 <= shard_index < shard_count:
        raise ValueError(f"shard index {shard_index} not in [0, {shard_count})")
    lo = total * shard_index // shard_count
    hi = total * (shard_index + 1) // shard_count
    return range(lo, hi)


def iter_min_orders(
    k: int, shard_index: int = 0, shard_count: int = 1, cap: int = DEFAULT_ENUM_CAP
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (indices, min_orders) chunks; min order 0 means 'none'."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > cap:
        raise ResourceCapError(f"k={k} above enumeration cap {cap}")
    r = _shard_range(k, shard_index, shard_count)
    for lo in range(r.start, r.stop, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, r.stop), dtype=np.int64)
        yield idx, _min_orders(level_coeff_batch(idx, k))


@dataclass
class VerificationReport:
    k: int
    bound: float | None
    max_min_order: int = 0
    histogram: list[int] = field(default_factory=list)
    argmax_functions: list[str] = field(default_factory=list)
    counterexamples: list[str] = field(default_factory=list)
    counterexample_count: int = 0
    functions_checked: int = 0
    max_listed: int = 1000

    def __post_init__(self):
        if not self.histogram:
            self.histogram = [0] * (self.k + 1)

    @property
    def ok(self) -> bool:
        return self.counterexample_count == 0

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        if other.k != self.k:
            raise ValueError("cannot merge reports for different k")
        out = VerificationReport(self.k, self.bound, max_listed=self.max_listed)
        out.histogram = [a + b for a, b in zip(self.histogram, other.histogram)]
        out.max_min_order = max(self.max_min_order, other.max_min_order)
        out.argmax_functions = sorted(
            (self.argmax_functions if self.max_min_order == out.max_min_order else [])
            + (other.argmax_functions if other.max_min_order == out.max_min_order else [])
        )
        out.counterexamples = sorted(self.counterexamples + other.counterexamples)[: self.max_listed]
        out.counterexample_count = self.counterexample_count + other.counterexample_count
        out.functions_checked = self.functions_checked + other.functions_checked
        return out

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "bound": self.bound,
            "max_min_order": self.max_min_order,
            "histogram": self.histogram,
            "argmax_functions": self.argmax_functions,
            "counterexamples": self.counterexamples,
            "counterexample_count": self.counterexample_count,
            "functions_checked": self.functions_checked,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _bitstring(index: int, k: int) -> str:
    return format(index, f"0{k + 1}b")


def enumerate_and_verify(
    k: int,
    bound_fn: Callable[[int], float] | None = None,
    shard_index: int = 0,
    shard_count: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
    max_listed: int = 1000,
) -> VerificationReport:
    """Min nonzero order over every non-exceptional symmetric f on k bits.

    A counterexample is a function whose min order exceeds ``bound_fn(k)``.
    """
    bound = None if bound_fn is None else bound_fn(k)
    rep = VerificationReport(k, bound, max_listed=max_listed)
    skip = np.array(sorted(exceptional_indices(k)), dtype=np.int64)
    best = 0
    argmax: list[int] = []
    for idx, orders in iter_min_orders(k, shard_index, shard_count, cap):
        keep = ~np.isin(idx, skip)
        idx, orders = idx[keep], orders[keep]
        if idx.size == 0:
            continue
        rep.functions_checked += int(idx.size)
        rep.histogram = [
            h + c for h, c in zip(rep.histogram, np.bincount(orders, minlength=k + 1).tolist())
        ]
        top = int(orders.max())
        if top > best:
            best, argmax = top, []
        if top == best:
            argmax.extend(idx[orders == best].tolist())
        if bound is not None:
            bad = idx[orders > bound]
            rep.counterexample_count += int(bad.size)
            room = max_listed - len(rep.counterexamples)
            rep.counterexamples.extend(_bitstring(int(i), k) for i in bad[:room])
    rep.max_min_order = best
    rep.argmax_functions = [_bitstring(i, k) for i in argmax]
    return rep


def min_order_rows(
    k: int, shard_index: int = 0, shard_count: int = 1, cap: int = DEFAULT_ENUM_CAP
) -> Iterator[tuple[str, int | None, bool]]:
    """(bitstring, min order or None, exceptional) for every function in the shard."""
    exc = exceptional_indices(k)
    for idx, orders in iter_min_orders(k, shard_index, shard_count, cap):
        for i, o in zip(idx.tolist(), orders.tolist()):
            yield _bitstring(i, k), (o or None), i in exc


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["function", "min_order", "exceptional"])
    for s, o, e in rows:
        w.writerow([s, "none" if o is None else o, int(e)])
    return buf.getvalue()


def report_for(f: SymmetricFunction) -> dict:
    """Nullity summary of one function, used by the CLI."""
    lv = level_coefficients(f.values)
    m = next((ell for ell in range(1, f.k + 1) if lv[ell]), None)
    return {
        "function": str(f),
        "k": f.k,
        "min_order": m,
        "exceptional": f.is_exceptional(),
        "levels": list(lv),
    }
