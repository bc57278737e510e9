"""Mod-2 (co)homology of Delta-complexes and the Stiefel-Whitney height.

The height of a free Z2-complex is the largest ``n`` for which the ``n``-th
cup power of the double-cover class is nonzero in ``H^n`` of the quotient.
Cup powers are evaluated with the Alexander-Whitney formula: on an ordered
``n``-simplex the power is the product of ``z`` over the edges
``(0,1), (1,2), ..., (n-1,n)``.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import gf2
from .deleted_product import DeltaComplex, QuotientComplex
from .errors import IntegrityError, UsageError
from .gf2 import BitMatrix, BitVector


@dataclass(frozen=True)
class Cochain:
    dim: int
    values: BitVector

    def any(self) -> bool:
        return self.values.any()


class ChainComplexGF2:
    """Boundary operators of a Delta-complex; matrices are packed on request.

    ``boundary(q)`` maps q-chains to (q-1)-chains, so it has one column per
    q-simplex.  ``d∘d = 0`` is checked from the face tables at construction.
    """

    def __init__(self, x: DeltaComplex):
        self.counts = x.counts()
        self._faces = [x.face_array(q) for q in range(len(self.counts))]
        self._cache: dict[int, BitMatrix] = {}
        self.check_dd_zero()

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def count(self, q: int) -> int:
        return self.counts[q] if 0 <= q < len(self.counts) else 0

    def check_dd_zero(self) -> None:
        for q in range(2, self.dim + 1):
            F, G = self._faces[q], self._faces[q - 1]
            if F.shape[0] == 0:
                continue
            ff = np.sort(G[F].reshape(F.shape[0], -1), axis=1)
            if not np.array_equal(ff[:, 0::2], ff[:, 1::2]):
                bad = int(np.flatnonzero((ff[:, 0::2] != ff[:, 1::2]).any(axis=1))[0])
                raise IntegrityError(f"boundary of boundary is nonzero on {q}-simplex {bad}")

    def boundary(self, q: int) -> BitMatrix:
        if q not in self._cache:
            rows, cols = self.count(q - 1), self.count(q)
            if q <= 0 or cols == 0 or rows == 0:
                m = BitMatrix(rows, cols)
            else:
                F = self._faces[q]
                col_idx = np.repeat(np.arange(cols), q + 1)
                m = BitMatrix.from_entries(rows, cols, F.reshape(-1), col_idx, degree=q)
            self._cache[q] = m
        return self._cache[q]

    def coboundary(self, q: int) -> BitMatrix:
        """Matrix of ``delta: C^q -> C^(q+1)``, i.e. the transpose of ``boundary(q+1)``."""
        rows, cols = self.count(q + 1), self.count(q)
        if rows == 0 or cols == 0:
            return BitMatrix(rows, cols)
        F = self._faces[q + 1]
        row_idx = np.repeat(np.arange(rows), q + 2)
        return BitMatrix.from_entries(rows, cols, row_idx, F.reshape(-1), degree=q + 1)

    def apply_coboundary(self, c: Cochain) -> Cochain:
        q = c.dim
        if self.count(q + 1) == 0:
            return Cochain(q + 1, BitVector(0))
        F = self._faces[q + 1]
        vals = c.values.to_bits()
        out = np.bitwise_xor.reduce(vals[F], axis=1)
        return Cochain(q + 1, BitVector.from_bits(out))

    def rank(self, q: int) -> int:
        return gf2.rank(self.boundary(q))


def boundary_matrices(x: DeltaComplex) -> ChainComplexGF2:
    return ChainComplexGF2(x)


def betti_mod2(x: DeltaComplex | ChainComplexGF2, q: int) -> int:
    if q < 0:
        raise UsageError("degree must be non-negative")
    cc = x if isinstance(x, ChainComplexGF2) else ChainComplexGF2(x)
    if q > cc.dim:
        return 0
    return cc.count(q) - cc.rank(q) - cc.rank(q + 1)


def betti_numbers(x: DeltaComplex) -> list[int]:
    cc = ChainComplexGF2(x)
    ranks = [cc.rank(q) for q in range(cc.dim + 2)]
    return [cc.count(q) - ranks[q] - ranks[q + 1] for q in range(cc.dim + 1)]


def cup_power(q: QuotientComplex, n: int) -> Cochain:
    """``n``-th cup power of the double-cover class, as an ``n``-cochain."""
    if n < 1 or n > q.dim:
        raise UsageError(f"exponent {n} outside 1..{q.dim}")
    flags = q.noncanonical_flags(n)
    if n == 1:
        return Cochain(1, BitVector.from_bits(q.z))
    steps = flags[:, 1:] ^ flags[:, :-1]
    return Cochain(n, BitVector.from_bits(steps.all(axis=1).astype(np.uint8)))


def is_coboundary(cc: ChainComplexGF2, c: Cochain) -> bool:
    n = c.dim
    if not c.any():
        return True
    if n == 0:
        return False
    gf2.check_budget(cc.count(n), cc.count(n - 1), copies=2, degree=n)
    return gf2.solve_linear(cc.coboundary(n - 1), c.values) is not None


@dataclass
class DegreeDiagnostics:
    degree: int
    support: int
    cocycle_verified: bool
    coboundary: bool
    seconds: float


@dataclass
class HeightReport:
    h: int
    dim: int
    counts: list[int]
    degrees: list[DegreeDiagnostics] = field(default_factory=list)
    max_degree: int = 0
    # True when every computed power was nonzero up to a cap below dim
    lower_bound_only: bool = False
    seconds: float = 0.0

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("seconds")
            for g in d["degrees"]:
                g.pop("seconds")
        return d


def sw_height(q: QuotientComplex, max_degree: int | None = None) -> HeightReport:
    """Stiefel-Whitney height by ascending coboundary tests, stopping at the first vanishing power.

    Once a power is a coboundary every higher power is too, so the scan can stop.
    """
    t0 = time.perf_counter()
    cc = ChainComplexGF2(q)
    cap = q.dim if max_degree is None else min(max_degree, q.dim)
    report = HeightReport(h=0, dim=q.dim, counts=q.counts(), max_degree=max(cap, 0))
    for n in range(1, cap + 1):
        t1 = time.perf_counter()
        c = cup_power(q, n)
        dc = cc.apply_coboundary(c)
        if dc.any():
            raise IntegrityError(f"cup power {n} is not a cocycle")
        vanishes = is_coboundary(cc, c)
        report.degrees.append(DegreeDiagnostics(
            degree=n, support=c.values.popcount(), cocycle_verified=True,
            coboundary=vanishes, seconds=time.perf_counter() - t1,
        ))
        if vanishes:
            break
        report.h = n
    else:
        report.lower_bound_only = cap < q.dim and report.h == cap
    report.seconds = time.perf_counter() - t0
    if report.h > q.dim:
        raise IntegrityError("height exceeds dimension")
    return report
