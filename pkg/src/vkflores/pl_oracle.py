"""Exact checks that PL maps identify points of disjoint simplices.

Everything here is rational arithmetic with :class:`fractions.Fraction`.  Two
image hulls meet iff there are barycentric weights ``lam >= 0``, ``mu >= 0``
with ``sum(lam) = sum(mu) = 1`` and ``P lam = Q mu``.  Feasibility of that
system is decided by enumerating basic solutions when the solution space has
at most three free directions, and by a phase-1 simplex with Bland's rule
otherwise.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .complex import Simplex, SimplicialComplex
from .errors import UsageError

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class PLMap:
    """Affine-on-simplices map given by vertex images (indexed by dense vertex id)."""

    complex: SimplicialComplex
    target_dim: int
    coords: tuple[Vector, ...]

    def __post_init__(self):
        if self.target_dim < 1:
            raise UsageError("target dimension must be >= 1")
        if len(self.coords) != self.complex.n_vertices:
            raise UsageError("every vertex needs coordinates")
        for c in self.coords:
            if len(c) != self.target_dim:
                raise UsageError("coordinate vector has wrong length")

    def image(self, v: int) -> Vector:
        return self.coords[v]

    def to_dict(self) -> dict:
        return {
            "target_dim": self.target_dim,
            "coordinates": {
                str(lab): [str(x) for x in self.coords[i]] for i, lab in enumerate(self.complex.vertices)
            },
        }


def make_map(k: SimplicialComplex, coords) -> PLMap:
    """``coords`` maps labels to coordinate sequences (ints, Fractions or ``"p/q"``)."""
    items = coords.items() if isinstance(coords, dict) else zip(k.vertices, coords)
    table = {}
    for lab, vec in items:
        table[k.index_of(lab)] = tuple(Fraction(x) for x in vec)
    if len(table) != k.n_vertices:
        raise UsageError("coordinates missing for some vertices")
    dims = {len(v) for v in table.values()}
    if len(dims) != 1:
        raise UsageError("coordinate vectors have different lengths")
    return PLMap(k, dims.pop(), tuple(table[i] for i in range(k.n_vertices)))


def random_rational_map(k: SimplicialComplex, m: int, seed: int, low: int = -100, high: int = 100) -> PLMap:
    """Seeded map with integer coordinates drawn uniformly from ``[low, high]``."""
    if m < 1:
        raise UsageError("target dimension must be >= 1")
    if low > high:
        raise UsageError("empty coordinate range")
    rng = random.Random(seed)
    coords = tuple(
        tuple(Fraction(rng.randint(low, high)) for _ in range(m)) for _ in range(k.n_vertices)
    )
    return PLMap(k, m, coords)


def read_map(k: SimplicialComplex, path) -> PLMap:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read map file {path}: {exc}") from exc
    return map_from_dict(k, doc)


def map_from_dict(k: SimplicialComplex, doc: dict) -> PLMap:
    by_str = {str(lab): lab for lab in k.vertices}
    raw = doc.get("coordinates")
    if not isinstance(raw, dict):
        raise UsageError("map document needs a 'coordinates' object")
    coords = {}
    for key, vec in raw.items():
        if key not in by_str:
            raise UsageError(f"map mentions unknown vertex {key!r}")
        try:
            coords[by_str[key]] = [Fraction(x) for x in vec]
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad coordinate for vertex {key!r}: {exc}") from exc
    f = make_map(k, coords)
    if "target_dim" in doc and int(doc["target_dim"]) != f.target_dim:
        raise UsageError("target_dim does not match coordinate length")
    return f


# ----------------------------------------------------------------------------
# exact feasibility of {x >= 0, A x = b}


def _rref(A: list[list[Fraction]], b: list[Fraction]):
    """Reduced row echelon form of ``[A | b]``; returns rows, pivot columns, consistent."""
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    n = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    consistent = all(rows[i][n] == 0 for i in range(r, len(rows)))
    return rows[:r], pivots, consistent


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    rows, pivots, ok = _rref(M, rhs)
    if not ok or len(pivots) != len(M[0]):
        return None
    x = [Fraction(0)] * len(M[0])
    for row, c in zip(rows, pivots):
        x[c] = row[-1]
    return x


def _vertex_enumeration(rows, pivots, n) -> list[Fraction] | None:
    """Try every basis of the (full row rank) system given in RREF."""
    r = len(pivots)
    if r == 0:
        return [Fraction(0)] * n
    A = [row[:n] for row in rows]
    b = [row[n] for row in rows]
    for basis in combinations(range(n), r):
        M = [[A[i][j] for j in basis] for i in range(r)]
        xb = _solve_square(M, b)
        if xb is None or any(v < 0 for v in xb):
            continue
        x = [Fraction(0)] * n
        for j, v in zip(basis, xb):
            x[j] = v
        return x
    return None


def _phase_one_simplex(A, b) -> list[Fraction] | None:
    """Minimise the sum of artificials for ``A x = b, x >= 0``; Bland's rule."""
    m, n = len(A), len(A[0])
    T = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        T.append([sign * a for a in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [sign * b[i]])
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced costs of the phase-1 objective
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        cost = [c - t for c, t in zip(cost, T[i])]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return None  # unbounded cannot happen for phase 1; be safe
        i = best[1]
        pv = T[i][enter]
        T[i] = [x / pv for x in T[i]]
        for r in range(m):
            if r != i and T[r][enter] != 0:
                f = T[r][enter]
                T[r] = [x - f * y if y else x for x, y in zip(T[r], T[i])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, T[i])]
        basis[i] = enter
    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    if any(x[n + i] != 0 for i in range(m)):
        return None
    return x[:n]


def feasible_point(A, b, method: str = "auto") -> list[Fraction] | None:
    """Some ``x >= 0`` with ``A x = b`` or ``None``; exact.

    ``method`` is ``"auto"``, ``"vertex"`` (basis enumeration) or ``"simplex"``.
    """
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    n = len(A[0]) if A else 0
    if method == "simplex":
        return _phase_one_simplex(A, b)
    rows, pivots, consistent = _rref(A, b)
    if not consistent:
        return None
    if method == "auto" and n - len(pivots) > 3:
        return _phase_one_simplex(A, b)
    if method not in ("auto", "vertex"):
        raise UsageError(f"unknown feasibility method {method!r}")
    return _vertex_enumeration(rows, pivots, n)


# ----------------------------------------------------------------------------
# intersections of image hulls


def _hull_system(f: PLMap, sigma: Simplex, tau: Simplex):
    a, c = len(sigma), len(tau)
    A = []
    for coord in range(f.target_dim):
        A.append([f.coords[v][coord] for v in sigma] + [-f.coords[v][coord] for v in tau])
    A.append([Fraction(1)] * a + [Fraction(0)] * c)
    A.append([Fraction(0)] * a + [Fraction(1)] * c)
    b = [Fraction(0)] * f.target_dim + [Fraction(1), Fraction(1)]
    return A, b


def _boxes_separated(f: PLMap, sigma: Simplex, tau: Simplex) -> bool:
    for coord in range(f.target_dim):
        s = [f.coords[v][coord] for v in sigma]
        t = [f.coords[v][coord] for v in tau]
        if max(s) < min(t) or max(t) < min(s):
            return True
    return False


def simplex_images_intersect(f: PLMap, sigma: Simplex, tau: Simplex, method: str = "auto") -> Vector | None:
    """A common point of the convex hulls of ``f(sigma)`` and ``f(tau)``, or ``None``."""
    sigma, tau = tuple(sigma), tuple(tau)
    if not sigma or not tau:
        raise UsageError("simplices must be nonempty")
    if _boxes_separated(f, sigma, tau):
        return None
    A, b = _hull_system(f, sigma, tau)
    x = feasible_point(A, b, method)
    if x is None:
        return None
    lam = x[: len(sigma)]
    point = tuple(sum(l * f.coords[v][c] for l, v in zip(lam, sigma)) for c in range(f.target_dim))
    return point


def verify_witness(f: PLMap, sigma: Simplex, tau: Simplex, point: Vector) -> bool:
    """Re-check a witness: it lies in both hulls (decided exactly)."""
    for simplex in (sigma, tau):
        A = [[f.coords[v][c] for v in simplex] for c in range(f.target_dim)] + [[Fraction(1)] * len(simplex)]
        b = list(point) + [Fraction(1)]
        if feasible_point(A, b, "simplex") is None:
            return False
    return True


def disjoint_pairs(k: SimplicialComplex, max_dim_sum: int) -> list[tuple[Simplex, Simplex]]:
    """Unordered disjoint pairs with ``dim sigma + dim tau <= max_dim_sum``.

    Sorted by (dimension sum, sigma, tau) with sigma the smaller of the two
    under (dimension, lexicographic) order.
    """
    simplices = sorted(k.simplices(), key=lambda s: (len(s), s))
    rank = {s: i for i, s in enumerate(simplices)}
    out = []
    for i, s in enumerate(simplices):
        ss = set(s)
        for t in simplices[i + 1:]:
            if len(s) + len(t) - 2 > max_dim_sum:
                break
            if ss.isdisjoint(t):
                out.append((s, t))
    out.sort(key=lambda p: (len(p[0]) + len(p[1]), rank[p[0]], rank[p[1]]))
    return out


@dataclass
class Coincidence:
    sigma: Simplex
    tau: Simplex
    point: Vector

    def to_dict(self, k: SimplicialComplex | None = None) -> dict:
        lab = (lambda s: list(k.labels(s))) if k is not None else list
        return {
            "sigma": lab(self.sigma),
            "tau": lab(self.tau),
            "dim_sum": len(self.sigma) + len(self.tau) - 2,
            "point": [str(x) for x in self.point],
        }


def find_coincidence_pair(f: PLMap, max_dim_sum: int, method: str = "auto") -> Coincidence | None:
    """First disjoint pair (in scan order) whose images meet."""
    for s, t in disjoint_pairs(f.complex, max_dim_sum):
        p = simplex_images_intersect(f, s, t, method)
        if p is not None:
            return Coincidence(s, t, p)
    return None
