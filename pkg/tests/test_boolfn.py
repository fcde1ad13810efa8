import json
import random
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symjunta.boolfn import (
    Assignment,
    BooleanFunction,
    SymmetricFunction,
    binom,
    eval_symmetric,
    fourier_transform,
    level_coefficient,
    level_coefficients,
    min_nonzero_order,
    subsets_in_order,
    walsh_hadamard,
)
from symjunta.errors import ArityError, ResourceCapError

from oracles import direct_coefficient


MAJ3 = SymmetricFunction.from_bits("0011")


@pytest.mark.parametrize("bits,x,expected", [("0011", "101", 1), ("0101", "111", 1), ("0000", "110", 0)])
def test_eval_symmetric(bits, x, expected):
    assert eval_symmetric(SymmetricFunction.from_bits(bits), Assignment.from_string(x)) == expected


def test_eval_arity_mismatch():
    with pytest.raises(ArityError):
        eval_symmetric(MAJ3, Assignment.from_string("10"))


def test_binom_conventions():
    assert binom(5, -1) == 0 and binom(5, 6) == 0 and binom(0, 0) == 1
    assert binom(64, 32) == 1832624140942590534


def test_fourier_and2():
    spec = fourier_transform(SymmetricFunction.from_bits("001"))
    assert [spec[s] for s in ([], [1], [2], [1, 2])] == [1, -1, -1, 1]


def test_fourier_parity2():
    spec = fourier_transform(SymmetricFunction.from_bits("010"))
    assert [spec[s] for s in ([], [1], [2], [1, 2])] == [2, 0, 0, -2]


@pytest.mark.parametrize("k", [1, 3, 6])
def test_fourier_constant_one(k):
    spec = fourier_transform(SymmetricFunction.one(k))
    assert spec.scaled[0] == 2**k and not any(spec.scaled[1:])


def test_fourier_cap():
    with pytest.raises(ResourceCapError):
        fourier_transform(SymmetricFunction.one(5), cap=4)


def test_walsh_hadamard_matches_direct_sum():
    rng = random.Random(3)
    k = 5
    table = [rng.randint(0, 1) for _ in range(1 << k)]
    coeffs = walsh_hadamard(np.array(table))
    f = lambda x: table[sum(b << i for i, b in enumerate(x))]
    for S in range(1 << k):
        idx = [i for i in range(k) if S >> i & 1]
        assert coeffs[S] == direct_coefficient(f, k, idx)


def test_reconstruction_exact():
    rng = random.Random(11)
    k = 6
    f = BooleanFunction(k, tuple(rng.randint(0, 1) for _ in range(1 << k)))
    spec = fourier_transform(f)
    back = walsh_hadamard(np.array(spec.scaled))
    # WHT is its own inverse up to 2^k
    assert (back == (1 << k) * np.array(f.table)).all()


def test_level_coefficient_examples():
    assert level_coefficient(MAJ3, 1) == -2
    for k in range(2, 9):
        par = SymmetricFunction.parity(k)
        assert all(level_coefficient(par, ell) == 0 for ell in range(1, k))
    f = SymmetricFunction.from_bits("0110101")
    assert level_coefficient(f, 0) == sum(v * binom(f.k, i) for i, v in enumerate(f.values))
    with pytest.raises(ValueError):
        level_coefficient(MAJ3, 4)


@pytest.mark.parametrize("k", range(1, 13))
def test_level_formula_agrees_with_direct_transform(k):
    """Closed form against the 2^k transform of the expansion for every symmetric f (sampled above k=8)."""
    indices = range(1 << (k + 1)) if k <= 8 else random.Random(k).sample(range(1 << (k + 1)), 200)
    for i in indices:
        f = SymmetricFunction.from_index(i, k)
        spec = fourier_transform(f)
        levels = level_coefficients(f.values)
        assert spec.level_coeffs == levels
        for S in subsets_in_order(k):
            assert spec.scaled[S] == levels[bin(S).count("1")]


def test_level_formula_direct_sum_oracle_small():
    for k in range(1, 6):
        for i in range(1 << (k + 1)):
            f = SymmetricFunction.from_index(i, k)
            g = lambda x: f.values[sum(x)]
            for ell in range(k + 1):
                assert level_coefficient(f, ell) == direct_coefficient(g, k, list(range(ell)))


def test_min_nonzero_order_examples():
    assert min_nonzero_order(MAJ3) == 1
    assert min_nonzero_order(SymmetricFunction.parity(7)) == 7
    assert min_nonzero_order(SymmetricFunction.zero(3)) is None


@pytest.mark.parametrize("k", range(1, 15))
def test_min_order_characterizes_exceptional(k):
    from symjunta.structure import iter_min_orders

    zero, one = 0, (1 << (k + 1)) - 1
    par = SymmetricFunction.parity(k).index
    parc = SymmetricFunction.parity_complement(k).index
    for idx, orders in iter_min_orders(k):
        none = set(idx[orders == 0].tolist())
        top = set(idx[orders == k].tolist())
        assert none == {zero, one}
        assert top == {par, parc}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10).flatmap(lambda k: st.lists(st.integers(0, 1), min_size=k + 1, max_size=k + 1)))
def test_parseval_and_complement(values):
    f = SymmetricFunction(tuple(values))
    k = f.k
    spec = fourier_transform(f)
    assert sum(c * c for c in spec.scaled) == (1 << k) * sum(f.expand().table)
    comp = fourier_transform(f.complement())
    assert comp.scaled[0] == (1 << k) - spec.scaled[0]
    assert all(a == -b for a, b in zip(comp.scaled[1:], spec.scaled[1:]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7).flatmap(lambda k: st.tuples(st.lists(st.integers(0, 1), min_size=k + 1, max_size=k + 1), st.randoms())))
def test_expansion_permutation_invariant(args):
    values, rnd = args
    f = SymmetricFunction(tuple(values)).expand()
    k = f.k
    perm = list(range(k))
    rnd.shuffle(perm)
    for x in range(1 << k):
        px = sum(((x >> i) & 1) << perm[i] for i in range(k))
        assert f(x) == f(px)
    assert f.is_symmetric()


def test_subset_order():
    assert list(subsets_in_order(3)) == [0, 1, 2, 4, 3, 5, 6, 7]


def test_spectrum_json():
    doc = json.loads(fourier_transform(MAJ3).to_json())
    assert doc == {"k": 3, "scale": 8, "levels": [4, -2, 0, 2]}
    doc = json.loads(fourier_transform(MAJ3.expand()).to_json())
    assert doc["coefficients"][1] == {"subset": [1], "scaled_coeff": -2}


def test_from_index_roundtrip():
    for i in range(32):
        assert SymmetricFunction.from_index(i, 4).index == i
    assert str(SymmetricFunction.from_index(3, 3)) == "0011"
