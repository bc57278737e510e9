"""Packed linear algebra over GF(2).

Bits are stored little-endian in ``uint64`` words: bit ``j`` of a row lives in
word ``j >> 6`` at position ``j & 63``.  Elimination runs in numba-compiled
kernels doing word-level XOR.
"""

from __future__ import annotations

import os

import numpy as np
from numba import njit

from .errors import ResourceError, UsageError

WORD_BITS = 64
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
MEMORY_BUDGET_ENV = "VKF_MEMORY_BUDGET"

_budget_override: int | None = None


def memory_budget() -> int:
    """Current budget in bytes for packed matrix payloads."""
    if _budget_override is not None:
        return _budget_override
    env = os.environ.get(MEMORY_BUDGET_ENV)
    if env:
        try:
            return int(float(env))
        except ValueError as exc:
            raise UsageError(f"{MEMORY_BUDGET_ENV}={env!r} is not a byte count") from exc
    return DEFAULT_MEMORY_BUDGET


def set_memory_budget(nbytes: int | None) -> None:
    """Override the memory budget for this process (``None`` restores the default)."""
    global _budget_override
    if nbytes is not None and nbytes <= 0:
        raise UsageError("memory budget must be positive")
    _budget_override = nbytes


def n_words(nbits: int) -> int:
    return (nbits + WORD_BITS - 1) // WORD_BITS


def check_budget(rows: int, cols: int, copies: int = 1, degree=None) -> None:
    need = rows * n_words(cols) * 8 * copies
    budget = memory_budget()
    if need > budget:
        raise ResourceError(
            f"packed {rows}x{cols} matrix needs {need} bytes "
            f"(x{copies}), budget is {budget} bytes",
            degree=degree,
        )


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array row-wise into uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    rows, cols = bits.shape
    W = n_words(cols)
    padded = np.zeros((rows, W * WORD_BITS), dtype=np.uint8)
    padded[:, :cols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(rows, W).copy()


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    as_bytes = np.ascontiguousarray(words).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols].copy()


class BitVector:
    """Fixed-length vector over GF(2)."""

    __slots__ = ("_length", "_words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise UsageError("negative length")
        self._length = int(length)
        W = n_words(length)
        if words is None:
            words = np.zeros(W, dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64).reshape(-1)
            if words.shape[0] != W:
                raise UsageError(f"expected {W} words for length {length}")
            rem = length % WORD_BITS
            if rem and W:
                words[-1] &= np.uint64((1 << rem) - 1)
        words.setflags(write=False)
        self._words = words

    @classmethod
    def from_bits(cls, bits) -> BitVector:
        arr = np.asarray(bits, dtype=np.uint8).reshape(1, -1)
        return cls(arr.shape[1], _pack(arr)[0])

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    @property
    def length(self) -> int:
        return self._length

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self._length:
            raise IndexError(i)
        return int((int(self._words[i >> 6]) >> (i & 63)) & 1)

    def to_bits(self) -> np.ndarray:
        return _unpack(self._words.reshape(1, -1), self._length)[0]

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.to_bits())]

    def any(self) -> bool:
        return bool(self._words.any())

    def popcount(self) -> int:
        return int(self.to_bits().sum())

    def __xor__(self, other: BitVector) -> BitVector:
        if other.length != self.length:
            raise UsageError("length mismatch")
        return BitVector(self._length, self._words ^ other._words)

    __add__ = __xor__

    def dot(self, other: BitVector) -> int:
        if other.length != self.length:
            raise UsageError("length mismatch")
        return int(np.bitwise_count(self._words & other._words).sum() & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._length == other._length and np.array_equal(self._words, other._words)

    def __hash__(self):
        return hash((self._length, self._words.tobytes()))

    def __repr__(self) -> str:
        if self._length <= 64:
            return "BitVector(" + "".join(str(b) for b in self.to_bits()) + ")"
        return f"BitVector(length={self._length}, weight={self.popcount()})"


class BitMatrix:
    """Dense packed matrix over GF(2); immutable once built."""

    __slots__ = ("_rows", "_cols", "_data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None, *, _check=True):
        if rows < 0 or cols < 0:
            raise UsageError("negative shape")
        W = n_words(cols)
        if data is None:
            if _check:
                check_budget(rows, cols)
            data = np.zeros((rows, W), dtype=np.uint64)
        elif data.shape != (rows, W):
            raise UsageError(f"payload shape {data.shape} != {(rows, W)}")
        data.setflags(write=False)
        self._rows, self._cols, self._data = int(rows), int(cols), data

    # construction
    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, arr) -> BitMatrix:
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim != 2:
            raise UsageError("expected a 2-D array")
        check_budget(*arr.shape)
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_rows(cls, rows) -> BitMatrix:
        """Build from an iterable of bit strings such as ``"110"`` or 0/1 sequences."""
        parsed = [[int(c) for c in r] if isinstance(r, str) else list(r) for r in rows]
        if not parsed:
            return cls(0, 0)
        return cls.from_dense(np.array(parsed, dtype=np.uint8))

    @classmethod
    def from_entries(cls, rows: int, cols: int, row_idx, col_idx, degree=None) -> BitMatrix:
        """Sum (mod 2) of unit entries at ``(row_idx[t], col_idx[t])``."""
        check_budget(rows, cols, degree=degree)
        data = np.zeros((rows, n_words(cols)), dtype=np.uint64)
        r = np.asarray(row_idx, dtype=np.int64)
        c = np.asarray(col_idx, dtype=np.int64)
        if r.size:
            if r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols:
                raise UsageError("entry index out of range")
            _xor_entries(data, r, c)
        return cls(rows, cols, data)

    # accessors
    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._cols

    @property
    def data(self) -> np.ndarray:
        return self._data

    def row(self, i: int) -> BitVector:
        return BitVector(self._cols, self._data[i])

    def __getitem__(self, ij) -> int:
        i, j = ij
        return int((int(self._data[i, j >> 6]) >> (j & 63)) & 1)

    def to_dense(self) -> np.ndarray:
        return _unpack(self._data, self._cols)

    def transpose(self) -> BitMatrix:
        check_budget(self._cols, self._rows)
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def __matmul__(self, x: BitVector) -> BitVector:
        if not isinstance(x, BitVector):
            return NotImplemented
        if x.length != self._cols:
            raise UsageError(f"cannot apply {self.shape} matrix to length-{x.length} vector")
        bits = (np.bitwise_count(self._data & x.words[None, :]).sum(axis=1) & 1).astype(np.uint8)
        return BitVector.from_bits(bits)

    def augment(self, b: BitVector) -> BitMatrix:
        if b.length != self._rows:
            raise UsageError("column length mismatch")
        dense = np.concatenate([self.to_dense(), b.to_bits()[:, None]], axis=1)
        return BitMatrix.from_dense(dense)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self._rows}x{self._cols})"


@njit(cache=True)
def _xor_entries(data, r, c):
    for t in range(r.shape[0]):
        data[r[t], c[t] >> 6] ^= np.uint64(1) << np.uint64(c[t] & 63)


@njit(cache=True)
def _forward_eliminate(data, ncols, rhs):
    """Row-echelon form in place; pivots taken column by column, first row wins.

    ``rhs`` is a uint8 vector carried along the row operations.  Returns the
    pivot columns, one per pivot row.
    """
    m, W = data.shape
    pivots = np.empty(min(m, ncols), dtype=np.int64)
    prow = 0
    for col in range(ncols):
        if prow == m:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        r = prow
        while r < m and (data[r, w] & bit) == 0:
            r += 1
        if r == m:
            continue
        if r != prow:
            for j in range(w, W):
                tmp = data[r, j]
                data[r, j] = data[prow, j]
                data[prow, j] = tmp
            tb = rhs[r]
            rhs[r] = rhs[prow]
            rhs[prow] = tb
        for r2 in range(prow + 1, m):
            if data[r2, w] & bit:
                for j in range(w, W):
                    data[r2, j] ^= data[prow, j]
                rhs[r2] ^= rhs[prow]
        pivots[prow] = col
        prow += 1
    return pivots[:prow]


@njit(cache=True)
def _popcount_parity(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return x & np.uint64(1)


@njit(cache=True)
def _back_substitute(data, pivots, rhs, ncols):
    W = data.shape[1]
    x = np.zeros(W, dtype=np.uint64)
    for i in range(pivots.shape[0] - 1, -1, -1):
        col = pivots[i]
        acc = np.uint64(rhs[i])
        for j in range(col >> 6, W):
            acc ^= _popcount_parity(data[i, j] & x[j])
        if acc:
            x[col >> 6] |= np.uint64(1) << np.uint64(col & 63)
    return x


def rank(m: BitMatrix) -> int:
    """GF(2) rank; works on a copy of the payload."""
    if m.rows == 0 or m.cols == 0:
        return 0
    check_budget(m.rows, m.cols)
    work = m.data.copy()
    rhs = np.zeros(m.rows, dtype=np.uint8)
    return int(_forward_eliminate(work, m.cols, rhs).shape[0])


def solve_linear(a: BitMatrix, b: BitVector) -> BitVector | None:
    """Some ``x`` with ``a @ x == b``, or ``None`` if the system is inconsistent."""
    if b.length != a.rows:
        raise UsageError(f"right-hand side has length {b.length}, matrix has {a.rows} rows")
    if a.cols == 0 or a.rows == 0:
        return BitVector(a.cols) if not b.any() else None
    check_budget(a.rows, a.cols)
    work = a.data.copy()
    rhs = b.to_bits().astype(np.uint8)
    pivots = _forward_eliminate(work, a.cols, rhs)
    r = pivots.shape[0]
    if rhs[r:].any():
        return None
    x = _back_substitute(work, pivots, rhs, a.cols)
    return BitVector(a.cols, x)
