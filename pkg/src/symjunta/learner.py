"""PAC learning of symmetric k-juntas from uniform labeled examples.

Variables are identified by their 0-based column in the example bitstring.
The pipeline tries the constant and parity special cases first, then searches
Fourier levels 1, 2, ... for a coefficient above the detection threshold, and
finally reads the truth table off per-weight-class majorities.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .boolfn import SymmetricFunction, binom
from .errors import BudgetError, ExampleParseError, LearningFailure

log = logging.getLogger(__name__)

_STREAMS = {"plant": 0, "draw": 1, "core": 2}


def rng_for(seed: int, purpose: str) -> np.random.Generator:
    """Counter-based generator with an independent stream per purpose."""
    ss = np.random.SeedSequence(seed, spawn_key=(_STREAMS[purpose],))
    return np.random.Generator(np.random.Philox(ss))


# --------------------------------------------------------------------------
# instances, examples, oracles


@dataclass(frozen=True)
class PlantedInstance:
    n: int
    relevant: tuple[int, ...]
    core: SymmetricFunction
    seed: int | None = None

    def __post_init__(self):
        if len(self.relevant) != self.core.k:
            raise ValueError(f"{len(self.relevant)} relevant variables for a core of arity {self.core.k}")
        if len(set(self.relevant)) != len(self.relevant) or any(not 0 <= i < self.n for i in self.relevant):
            raise ValueError("relevant variables must be distinct columns in [0, n)")

    @property
    def k(self) -> int:
        return self.core.k

    def labels(self, X: np.ndarray) -> np.ndarray:
        w = X[:, list(self.relevant)].sum(axis=1) if self.relevant else np.zeros(len(X), dtype=np.int64)
        return np.asarray(self.core.values, dtype=np.uint8)[w]

    def normalized(self) -> tuple[tuple[int, ...], str]:
        return _normalize(self.relevant, self.core)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "core": str(self.core), "seed": self.seed,
                "relevant": list(self.relevant)}


def _normalize(relevant: Sequence[int], core: SymmetricFunction) -> tuple[tuple[int, ...], str]:
    """Canonical form: nonconstant symmetric cores depend on every variable."""
    if len(set(core.values)) == 1:
        return (), str(core.values[0])
    order = sorted(range(len(relevant)), key=lambda i: relevant[i])
    return tuple(relevant[i] for i in order), str(core)


def plant_instance(n: int, k: int, core: SymmetricFunction | str, seed: int) -> PlantedInstance:
    if isinstance(core, str):
        core = SymmetricFunction.from_bits(core)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if core.k != k:
        raise ValueError(f"core has arity {core.k}, expected {k}")
    rel = rng_for(seed, "plant").choice(n, size=k, replace=False)
    return PlantedInstance(n, tuple(sorted(int(i) for i in rel)), core, seed)


def random_core(k: int, seed: int, exclude_exceptional: bool = True) -> SymmetricFunction:
    rng = rng_for(seed, "core")
    while True:
        f = SymmetricFunction.from_index(int(rng.integers(0, 1 << (k + 1))), k)
        if not (exclude_exceptional and f.is_exceptional()):
            return f


@dataclass(frozen=True)
class Example:
    x: str
    label: int

    def to_line(self) -> str:
        return f"{self.x} {self.label}"


def _to_arrays(examples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(examples, tuple):
        X, y = examples
        return np.asarray(X, dtype=np.uint8), np.asarray(y, dtype=np.uint8)
    if not examples:
        raise ValueError("no examples")
    X = np.array([[int(c) for c in e.x] for e in examples], dtype=np.uint8)
    y = np.array([e.label for e in examples], dtype=np.uint8)
    return X, y


def _to_examples(X: np.ndarray, y: np.ndarray) -> list[Example]:
    return [Example("".join(map(str, row)), int(b)) for row, b in zip(X.tolist(), y.tolist())]


class PlantedOracle:
    """Uniform example oracle for a planted instance; one persistent draw stream."""

    exhausted = False

    def __init__(self, inst: PlantedInstance, seed: int | None = None):
        self.inst = inst
        self.n = inst.n
        self._rng = rng_for(inst.seed if seed is None else seed, "draw")
        self.drawn = 0

    def sample(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        X = self._rng.integers(0, 2, size=(m, self.n), dtype=np.uint8)
        self.drawn += m
        return X, self.inst.labels(X)


class DatasetOracle:
    """Replays a fixed example set in order; reports exhaustion instead of repeating."""

    def __init__(self, X: np.ndarray, y: np.ndarray):
        self.X = np.asarray(X, dtype=np.uint8)
        self.y = np.asarray(y, dtype=np.uint8)
        self.n = self.X.shape[1]
        self.drawn = 0

    @property
    def exhausted(self) -> bool:
        return self.drawn >= len(self.y)

    @property
    def remaining(self) -> int:
        return len(self.y) - self.drawn

    def sample(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.drawn, min(self.drawn + m, len(self.y))
        self.drawn = hi
        return self.X[lo:hi], self.y[lo:hi]

    @classmethod
    def exhaustive(cls, inst: PlantedInstance) -> "DatasetOracle":
        n = inst.n
        xs = np.arange(1 << n)
        X = ((xs[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)
        return cls(X, inst.labels(X))

    @classmethod
    def from_examples(cls, examples: Sequence[Example]) -> "DatasetOracle":
        return cls(*_to_arrays(list(examples)))

    @classmethod
    def from_file(cls, path: str | Path) -> "DatasetOracle":
        return cls.from_examples(read_examples(path))


def draw_examples(inst: PlantedInstance, m: int, seed: int | None = None) -> list[Example]:
    if m < 1:
        raise ValueError("m must be at least 1")
    return _to_examples(*PlantedOracle(inst, seed).sample(m))


def parse_examples(lines: Iterable[str]) -> list[Example]:
    out: list[Example] = []
    n = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ExampleParseError(f"expected '<bits> <label>', got {line!r}", lineno)
        bits, label = parts
        if not bits or set(bits) - {"0", "1"}:
            raise ExampleParseError(f"assignment {bits!r} is not a bitstring", lineno)
        if label not in ("0", "1"):
            raise ExampleParseError(f"label {label!r} is not 0 or 1", lineno)
        if n is None:
            n = len(bits)
        elif len(bits) != n:
            raise ExampleParseError(f"assignment has {len(bits)} bits, expected {n}", lineno)
        out.append(Example(bits, int(label)))
    if not out:
        raise ExampleParseError("no examples in input")
    return out


def read_examples(path: str | Path) -> list[Example]:
    with open(path, encoding="utf-8") as fh:
        return parse_examples(fh)


def write_examples(path: str | Path, examples: Iterable[Example]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in examples:
            fh.write(e.to_line() + "\n")


# --------------------------------------------------------------------------
# estimation


def estimate_coefficient(examples, S: Iterable[int]) -> Fraction:
    """(1/m) sum of label * chi_S(x) over the examples."""
    X, y = _to_arrays(examples)
    if len(y) == 0:
        raise ValueError("no examples")
    S = list(S)
    par = X[:, S].sum(axis=1) & 1 if S else np.zeros(len(y), dtype=np.int64)
    total = int(y[par == 0].sum()) - int(y[par == 1].sum())
    return Fraction(total, len(y))


@dataclass(frozen=True)
class EstimationPlan:
    k: int
    n: int
    t_max: int
    delta: float
    tested_sets_bound: int
    m: int

    @property
    def tau(self) -> Fraction:
        return Fraction(1, 1 << (self.k + 1))

    def above(self, total: int, m: int) -> bool:
        """|total / m| > tau, compared exactly."""
        return abs(total) << (self.k + 1) > m


def sample_size(k: int, n: int, t_max: int, delta: float) -> EstimationPlan:
    """Hoeffding with a union bound over every set of size <= t_max."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 1 <= t_max <= n:
        raise ValueError(f"t_max={t_max} outside [1, {n}]")
    T = sum(binom(n, ell) for ell in range(t_max + 1))
    tau = 2.0 ** -(k + 1)
    m = math.ceil(2 / tau**2 * math.log(2 * T / delta))
    return EstimationPlan(k, n, t_max, delta, T, m)


def level_sums(X: np.ndarray, y: np.ndarray, ell: int) -> dict[tuple[int, ...], int]:
    """sum_x label * chi_S(x) for every S of size ell.

    Sums of +-1 terms below 2^53 are exact in float64, which lets the pair
    sums go through a matrix product.
    """
    n = X.shape[1]
    A = 1.0 - 2.0 * X[y == 1].astype(np.float64)
    if len(A) >= 1 << 53:
        raise ValueError("too many examples for exact float accumulation")
    out: dict[tuple[int, ...], int] = {}
    if ell == 0:
        return {(): int(len(A))}
    if ell == 1:
        col = A.sum(axis=0)
        return {(i,): int(round(c)) for i, c in enumerate(col)}
    for prefix in combinations(range(n), ell - 2):
        start = prefix[-1] + 1 if prefix else 0
        if start > n - 2:
            continue
        w = np.prod(A[:, list(prefix)], axis=1) if prefix else np.ones(len(A))
        G = (A[:, start:] * w[:, None]).T @ A[:, start:]
        for a in range(n - start):
            for b in range(a + 1, n - start):
                out[prefix + (start + a, start + b)] = int(round(G[a, b]))
    return out


# --------------------------------------------------------------------------
# parity over GF(2)


@dataclass
class ParityResult:
    consistent: bool
    subset: tuple[int, ...] = ()
    complemented: bool = False
    unique: bool = False
    witness: list[int] = field(default_factory=list)  # example indices whose x's XOR to 0 but labels don't

    def __bool__(self) -> bool:
        return self.consistent


def learn_parity(examples) -> ParityResult:
    """Solve x . a + c = label over GF(2); c = 1 means the complemented parity."""
    X, y = _to_arrays(examples)
    m, n = X.shape

    def bits(i: int) -> int:
        return sum(1 << j for j in np.flatnonzero(X[i]).tolist())

    one = 1 << n  # constant column
    lab = 1 << (n + 1)
    pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, example-index mask)
    full = n + 1

    def reduce(row: int, tag: int) -> tuple[int, int]:
        for bit in range(n, -1, -1):
            if row >> bit & 1 and bit in pivots:
                prow, ptag = pivots[bit]
                row ^= prow
                tag ^= ptag
        return row, tag

    def insert(i: int) -> ParityResult | None:
        row, tag = reduce(bits(i) | one | (int(y[i]) * lab), 1 << i)
        if row == lab:
            return ParityResult(False, witness=[j for j in range(tag.bit_length()) if tag >> j & 1])
        if row & (lab - 1):
            pivots[(row & (lab - 1)).bit_length() - 1] = (row, tag)
        return None

    i = 0
    while i < m and len(pivots) < full:
        bad = insert(i)
        if bad is not None:
            return bad
        i += 1

    # back-substitute with free variables set to 0
    sol = 0
    for bit in sorted(pivots):
        row, _ = pivots[bit]
        rhs = (row >> (n + 1)) & 1
        rest = row & (lab - 1) & ~(1 << bit)
        rhs ^= bin(rest & sol).count("1") & 1
        if rhs:
            sol |= 1 << bit
    a = np.array([(sol >> j) & 1 for j in range(n)], dtype=np.int64)
    c = (sol >> n) & 1

    if i < m:
        pred = ((X[i:].astype(np.int64) @ a) + c) & 1
        miss = np.flatnonzero(pred != y[i:])
        if miss.size:
            bad = insert(i + int(miss[0]))
            if bad is not None:
                return bad
            raise AssertionError("full-rank system accepted an inconsistent row")
    return ParityResult(True, tuple(int(j) for j in np.flatnonzero(a)), bool(c), len(pivots) == full)


# --------------------------------------------------------------------------
# truth table and the full learner


def class_hits_needed(k: int, delta: float) -> int:
    return math.ceil(math.log((k + 1) / delta) / math.log(2))


def recover_truth_table(
    oracle,
    relevant: Sequence[int],
    delta: float = 0.05,
    examples: tuple[np.ndarray, np.ndarray] | None = None,
    budget: int | None = None,
) -> SymmetricFunction:
    """Majority label per weight class of the restriction to ``relevant``.

    Draws until each class has enough hits, or the budget / data runs out.
    """
    rel = list(relevant)
    k = len(rel)
    if k < 1:
        raise ValueError("relevant set is empty")
    need = class_hits_needed(k, delta)
    if budget is None:
        budget = max(10_000, 4 * need * (1 << k))
    ones = np.zeros(k + 1, dtype=np.int64)
    hits = np.zeros(k + 1, dtype=np.int64)

    def absorb(X, y):
        if len(y):
            w = X[:, rel].sum(axis=1)
            np.add.at(hits, w, 1)
            np.add.at(ones, w, y.astype(np.int64))

    if examples is not None:
        absorb(*examples)
    used = 0
    while hits.min() < need and used < budget and not oracle.exhausted:
        batch = min(max(1024, 2 * need << k), budget - used)
        X, y = oracle.sample(batch)
        used += len(y)
        absorb(X, y)
    if hits.min() == 0:
        missing = [int(w) for w in np.flatnonzero(hits == 0)]
        p = min(binom(k, w) for w in missing) / 2**k
        raise BudgetError(
            f"weight classes {missing} never sampled after {used} extra draws "
            f"(per-draw probability {p:.3g})"
        )
    return SymmetricFunction(tuple(int(2 * o > h) for o, h in zip(ones, hits)))


@dataclass
class LearnResult:
    class_tag: str
    relevant: tuple[int, ...]
    core: SymmetricFunction
    examples_used: int
    detected_level: int | None = None

    def normalized(self) -> tuple[tuple[int, ...], str]:
        return _normalize(self.relevant, self.core)

    def matches(self, inst: PlantedInstance) -> bool:
        """Same function on {0,1}^n as the planted instance."""
        return self.normalized() == inst.normalized()

    def to_dict(self) -> dict:
        return {"class": self.class_tag, "relevant": list(self.relevant),
                "core": str(self.core), "examples_used": self.examples_used}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _class_of(core: SymmetricFunction) -> str:
    k = core.k
    if core == SymmetricFunction.zero(k):
        return "constant-0"
    if core == SymmetricFunction.one(k):
        return "constant-1"
    if core == SymmetricFunction.parity(k):
        return "parity"
    if core == SymmetricFunction.parity_complement(k):
        return "parity-complement"
    return "general-symmetric"


def learn_symmetric_junta(
    oracle,
    n: int,
    k: int,
    delta: float = 0.05,
    t_max: int | None = None,
    budget: int | None = None,
) -> LearnResult:
    """Exact identification of a symmetric junta on at most k of the n variables."""
    t_max = min(k, n) if t_max is None else t_max
    plan = sample_size(k, n, t_max, delta)
    # a finite dataset is used in full: a prefix of an ordered enumeration is biased
    X, y = oracle.sample(max(plan.m, getattr(oracle, "remaining", 0)))
    m = len(y)
    if m == 0:
        raise LearningFailure("oracle returned no examples")
    log.info("drew %d examples (plan %d, %d tested sets)", m, plan.m, plan.tested_sets_bound)

    if y.min() == y.max():
        b = int(y[0])
        return LearnResult(f"constant-{b}", (), SymmetricFunction((b,)), oracle.drawn)

    par = learn_parity((X, y))
    if par.consistent and par.unique and 1 <= len(par.subset) <= k:
        core = (SymmetricFunction.parity_complement if par.complemented else SymmetricFunction.parity)(len(par.subset))
        return LearnResult(_class_of(core), par.subset, core, oracle.drawn)

    for ell in range(1, t_max + 1):
        sums = level_sums(X, y, ell)
        hit = [S for S, v in sums.items() if plan.above(v, m)]
        if not hit:
            log.info("level %d: nothing above threshold", ell)
            continue
        relevant = tuple(sorted(set().union(*hit)))
        log.info("level %d: %d sets above threshold, relevant %s", ell, len(hit), relevant)
        if len(relevant) > k:
            raise LearningFailure(f"found {len(relevant)} relevant variables, more than k={k}")
        core = recover_truth_table(oracle, relevant, delta, (X, y), budget)
        return LearnResult(_class_of(core), relevant, core, oracle.drawn, ell)

    raise LearningFailure(
        f"no coefficient above 2^-{k + 1} up to level {t_max} with {m} examples; "
        "the sample may be too small or the oracle is not a symmetric k-junta"
    )
