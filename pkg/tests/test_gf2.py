import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vkflores import gf2
from vkflores.errors import ResourceError, UsageError
from vkflores.gf2 import BitMatrix, BitVector, rank, solve_linear


def brute_rank(dense):
    """log2 of the size of the row space, by enumerating all row combinations."""
    dense = np.asarray(dense, dtype=np.uint8)
    span = set()
    for coeffs in itertools.product((0, 1), repeat=dense.shape[0]):
        v = np.zeros(dense.shape[1], dtype=np.uint8)
        for c, row in zip(coeffs, dense):
            if c:
                v ^= row
        span.add(v.tobytes())
    return len(span).bit_length() - 1


def brute_solutions(dense, b):
    dense = np.asarray(dense, dtype=np.uint8)
    out = []
    for x in itertools.product((0, 1), repeat=dense.shape[1]):
        if np.array_equal((dense @ np.array(x)) % 2, b):
            out.append(x)
    return out


def test_rank_examples():
    assert rank(BitMatrix.identity(3)) == 3
    assert rank(BitMatrix.zeros(4, 7)) == 0
    assert rank(BitMatrix.zeros(0, 5)) == 0
    assert rank(BitMatrix.from_rows(["110", "011", "101"])) == 2


def test_rank_does_not_mutate():
    m = BitMatrix.from_rows(["110", "011", "101"])
    before = m.data.copy()
    rank(m)
    assert np.array_equal(m.data, before)


def test_solve_examples():
    b = BitVector.from_bits([1, 0, 1, 1])
    assert solve_linear(BitMatrix.identity(4), b) == b
    assert solve_linear(BitMatrix.zeros(3, 3), BitVector.from_bits([0, 1, 0])) is None
    a = BitMatrix.from_rows(["110", "011"])
    rhs = BitVector.from_bits([1, 1])
    x = solve_linear(a, rhs)
    # enumeration of all 8 candidates gives exactly these two solutions
    assert brute_solutions(a.to_dense(), np.array([1, 1])) == [(0, 1, 0), (1, 0, 1)]
    assert tuple(x.to_bits()) in {(0, 1, 0), (1, 0, 1)}
    assert a @ x == rhs


def test_solve_dimension_mismatch():
    with pytest.raises(UsageError):
        solve_linear(BitMatrix.identity(3), BitVector.zeros(4))


def test_bitvector_tail_bits_are_zero():
    v = BitVector(70, np.array([2**64 - 1, 2**64 - 1], dtype=np.uint64))
    assert v.popcount() == 70
    assert int(v.words[1]) == 2**6 - 1


def test_packing_round_trip_across_word_boundary():
    rng = np.random.default_rng(1)
    dense = rng.integers(0, 2, size=(5, 130), dtype=np.uint8)
    m = BitMatrix.from_dense(dense)
    assert np.array_equal(m.to_dense(), dense)
    assert m[3, 129] == dense[3, 129]
    assert np.array_equal(m.transpose().to_dense(), dense.T)


def test_from_entries_cancels_mod_2():
    m = BitMatrix.from_entries(2, 2, [0, 0, 1], [1, 1, 0])
    assert m.to_dense().tolist() == [[0, 0], [1, 0]]


def test_memory_budget_guard():
    gf2.set_memory_budget(1024)
    try:
        with pytest.raises(ResourceError):
            BitMatrix.zeros(1000, 1000)
    finally:
        gf2.set_memory_budget(None)


def test_memory_budget_env(monkeypatch):
    monkeypatch.setenv(gf2.MEMORY_BUDGET_ENV, "4096")
    assert gf2.memory_budget() == 4096
    with pytest.raises(ResourceError):
        gf2.check_budget(100, 1000)


small_matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_rank_matches_enumeration(rows):
    assert rank(BitMatrix.from_dense(np.array(rows))) == brute_rank(rows)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 64), st.integers(1, 64), st.integers(0, 2**32 - 1))
def test_rank_of_transpose(r, c, seed):
    rng = np.random.default_rng(seed)
    dense = (rng.random((r, c)) < rng.uniform(0.05, 0.6)).astype(np.uint8)
    m = BitMatrix.from_dense(dense)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_solve_consistency_and_exactness(r, c, seed):
    rng = np.random.default_rng(seed)
    dense = (rng.random((r, c)) < 0.3).astype(np.uint8)
    if rng.random() < 0.5:
        b_bits = (dense @ rng.integers(0, 2, c)) % 2
    else:
        b_bits = rng.integers(0, 2, r)
    a = BitMatrix.from_dense(dense)
    b = BitVector.from_bits(b_bits)
    x = solve_linear(a, b)
    consistent = rank(a) == rank(a.augment(b))
    assert (x is not None) == consistent
    if x is not None:
        assert a @ x == b


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_solve_matches_enumeration(r, c, seed):
    rng = np.random.default_rng(seed)
    dense = rng.integers(0, 2, (r, c)).astype(np.uint8)
    b_bits = rng.integers(0, 2, r).astype(np.uint8)
    x = solve_linear(BitMatrix.from_dense(dense), BitVector.from_bits(b_bits))
    sols = brute_solutions(dense, b_bits)
    assert (x is None) == (not sols)
    if x is not None:
        assert tuple(int(v) for v in x.to_bits()) in sols


def test_elimination_is_deterministic():
    rng = np.random.default_rng(7)
    dense = (rng.random((60, 90)) < 0.2).astype(np.uint8)
    a = BitMatrix.from_dense(dense)
    b = a @ BitVector.from_bits(rng.integers(0, 2, 90))
    assert solve_linear(a, b) == solve_linear(a, b)
