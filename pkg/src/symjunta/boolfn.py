"""Boolean functions on the k-cube, symmetric functions, and exact Fourier analysis.

Assignments are encoded as integers: bit ``i`` holds coordinate ``x_{i+1}``.
Subsets of ``[k]`` use the same bitmask encoding, so ``chi_S(x)`` is
``(-1) ** popcount(S & x)``.  Fourier coefficients are kept at integer scale
``2^k * fhat(S)`` throughout.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import ArityError, ResourceCapError

DEFAULT_FOURIER_CAP = int(os.environ.get("SYMJUNTA_FOURIER_CAP", "24"))


@lru_cache(maxsize=None)
def _binomial_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _binomial_row(n - 1)
    return (1,) + tuple(prev[i] + prev[i + 1] for i in range(n - 1)) + (1,)


def binom(n: int, m: int) -> int:
    """C(n, m) for n >= 0, with C(n, m) = 0 when m < 0 or m > n."""
    if n < 0:
        raise ValueError(f"binom expects n >= 0, got {n}")
    if m < 0 or m > n:
        return 0
    if n > 512:
        from math import comb

        return comb(n, m)
    return _binomial_row(n)[m]


def popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class Assignment:
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("assignment must have at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("assignment bits must be 0 or 1")

    @classmethod
    def from_string(cls, s: str) -> "Assignment":
        return cls(tuple(int(c) for c in s.strip()))

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of a function on {0,1}^k, indexed by the integer encoding of x."""

    k: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ArityError("arity must be at least 1")
        if len(self.table) != 1 << self.k:
            raise ArityError(f"table length {len(self.table)} != 2^{self.k}")

    def __call__(self, x: Assignment | int) -> int:
        if isinstance(x, Assignment):
            if len(x) != self.k:
                raise ArityError(f"assignment of length {len(x)} for arity {self.k}")
            x = x.to_int()
        return self.table[x]

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.k, tuple(1 - v for v in self.table))

    def is_symmetric(self) -> bool:
        seen: dict[int, int] = {}
        for x, v in enumerate(self.table):
            w = popcount(x)
            if seen.setdefault(w, v) != v:
                return False
        return True


@dataclass(frozen=True)
class SymmetricFunction:
    """Value vector f_0 ... f_k of a symmetric function, f_i the value at weight i.

    Values are normally bits; nonnegative integer values are accepted so that
    sums such as f(x) + f(~x) can reuse the same machinery.
    """

    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise ArityError("a symmetric function needs at least one value")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @classmethod
    def from_bits(cls, s: str) -> "SymmetricFunction":
        s = s.strip()
        if not s or any(c not in "01" for c in s):
            raise ValueError(f"not a bitstring: {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_index(cls, index: int, k: int) -> "SymmetricFunction":
        """Function whose bitstring f_0...f_k, read as a binary number, equals ``index``."""
        if not 0 <= index < 1 << (k + 1):
            raise ValueError(f"index {index} out of range for k={k}")
        return cls(tuple((index >> (k - i)) & 1 for i in range(k + 1)))

    @classmethod
    def zero(cls, k: int) -> "SymmetricFunction":
        return cls((0,) * (k + 1))

    @classmethod
    def one(cls, k: int) -> "SymmetricFunction":
        return cls((1,) * (k + 1))

    @classmethod
    def parity(cls, k: int) -> "SymmetricFunction":
        return cls(tuple(i & 1 for i in range(k + 1)))

    @classmethod
    def parity_complement(cls, k: int) -> "SymmetricFunction":
        return cls(tuple(1 - (i & 1) for i in range(k + 1)))

    @property
    def k(self) -> int:
        return len(self.values) - 1

    @property
    def index(self) -> int:
        return int("".join(map(str, self.values)), 2)

    def is_boolean(self) -> bool:
        return all(v in (0, 1) for v in self.values)

    def is_exceptional(self) -> bool:
        """True for the constants and the two parities."""
        k = self.k
        return self.values in (
            SymmetricFunction.zero(k).values,
            SymmetricFunction.one(k).values,
            SymmetricFunction.parity(k).values,
            SymmetricFunction.parity_complement(k).values,
        )

    def complement(self) -> "SymmetricFunction":
        return SymmetricFunction(tuple(1 - v for v in self.values))

    def __call__(self, x: Assignment) -> int:
        return eval_symmetric(self, x)

    def expand(self) -> BooleanFunction:
        if self.k < 1:
            raise ArityError("cannot expand a 0-ary function")
        if self.k > DEFAULT_FOURIER_CAP:
            raise ResourceCapError(f"arity {self.k} above cap {DEFAULT_FOURIER_CAP}")
        weights = _weights(self.k)
        vals = np.asarray(self.values, dtype=np.int64)[weights]
        return BooleanFunction(self.k, tuple(int(v) for v in vals))

    def __str__(self) -> str:
        return "".join(map(str, self.values))


def eval_symmetric(f: SymmetricFunction, x: Assignment) -> int:
    if len(x) != f.k:
        raise ArityError(f"assignment of length {len(x)} for arity {f.k}")
    return f.values[x.weight]


@lru_cache(maxsize=8)
def _weights(k: int) -> np.ndarray:
    w = np.zeros(1 << k, dtype=np.int64)
    for i in range(k):
        w += (np.arange(1 << k) >> i) & 1
    w.setflags(write=False)
    return w


def subsets_in_order(k: int) -> Iterator[int]:
    """Subset bitmasks of [k] by increasing size, lexicographic within a size."""
    for size in range(k + 1):
        for combo in combinations(range(k), size):
            yield sum(1 << i for i in combo)


def mask_to_indices(mask: int) -> list[int]:
    """1-based coordinate indices of a subset bitmask."""
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def walsh_hadamard(table: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis (integer in, integer out)."""
    a = np.array(table, dtype=np.int64, copy=True)
    size = a.shape[-1]
    if size & (size - 1):
        raise ArityError("length must be a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < size:
        a = a.reshape(*lead, size // (2 * h), 2, h)
        lo = a[..., 0, :].copy()
        hi = a[..., 1, :]
        a[..., 0, :] = lo + hi
        a[..., 1, :] = lo - hi
        a = a.reshape(*lead, size)
        h *= 2
    return a


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients scaled by 2^k.  ``scaled`` is indexed by subset bitmask."""

    k: int
    scaled: tuple[int, ...]
    level_coeffs: tuple[int, ...] | None = None

    @property
    def scale(self) -> int:
        return 1 << self.k

    def __getitem__(self, subset: int | Sequence[int]) -> int:
        if not isinstance(subset, int):
            subset = sum(1 << (i - 1) for i in subset)
        return self.scaled[subset]

    def to_records(self) -> list[dict]:
        return [
            {"subset": mask_to_indices(s), "scaled_coeff": self.scaled[s]}
            for s in subsets_in_order(self.k)
        ]

    def to_json(self) -> str:
        doc: dict = {"k": self.k, "scale": self.scale}
        if self.level_coeffs is not None:
            doc["levels"] = list(self.level_coeffs)
        else:
            doc["coefficients"] = self.to_records()
        return json.dumps(doc)


def fourier_transform(
    f: BooleanFunction | SymmetricFunction, cap: int = DEFAULT_FOURIER_CAP
) -> FourierSpectrum:
    if isinstance(f, SymmetricFunction):
        sym = f
        f = f.expand()
    else:
        sym = None
    if f.k > cap:
        raise ResourceCapError(f"arity {f.k} above Fourier cap {cap}")
    coeffs = walsh_hadamard(np.asarray(f.table, dtype=np.int64))
    levels = None
    if sym is not None:
        levels = tuple(int(coeffs[(1 << ell) - 1]) for ell in range(f.k + 1))
    return FourierSpectrum(f.k, tuple(int(c) for c in coeffs), levels)


@lru_cache(maxsize=64)
def level_matrix(k: int) -> tuple[tuple[int, ...], ...]:
    """Row w, column l: sum over weight-w points x of chi_S(x) for one fixed |S| = l."""
    return tuple(
        tuple(
            sum((-1) ** j * binom(ell, j) * binom(k - ell, w - j) for j in range(ell + 1))
            for ell in range(k + 1)
        )
        for w in range(k + 1)
    )


def level_coefficients(values: Sequence[int]) -> tuple[int, ...]:
    """Scaled coefficient 2^k * fhat(S) at every level |S| = 0..k of a symmetric function."""
    k = len(values) - 1
    mat = level_matrix(k)
    return tuple(
        sum(v * mat[w][ell] for w, v in enumerate(values) if v) for ell in range(k + 1)
    )


def level_coefficient(f: SymmetricFunction, ell: int) -> int:
    if not 0 <= ell <= f.k:
        raise ValueError(f"level {ell} outside [0, {f.k}]")
    k = f.k
    return sum(
        v * sum((-1) ** j * binom(ell, j) * binom(k - ell, w - j) for j in range(ell + 1))
        for w, v in enumerate(f.values)
        if v
    )


def min_nonzero_order(f: SymmetricFunction) -> int | None:
    """Smallest level l >= 1 with a nonzero coefficient, or None if there is none."""
    for ell, c in enumerate(level_coefficients(f.values)):
        if ell >= 1 and c != 0:
            return ell
    return None


def max_null_order(f: SymmetricFunction) -> int:
    """Largest t such that levels 1..t all vanish (0 when level 1 is nonzero)."""
    m = min_nonzero_order(f)
    return f.k if m is None else m - 1


def level_matrix_array(k: int) -> np.ndarray:
    return np.array(level_matrix(k), dtype=np.int64)


def index_bits(indices: np.ndarray, k: int) -> np.ndarray:
    """Rows f_0..f_k for a batch of enumeration indices (f_0 is the most significant bit)."""
    shifts = np.arange(k, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.int64)
