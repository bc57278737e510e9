"""Simplicial deleted products as free Z2 Delta-complexes, and their swap quotients.

A q-simplex of the triangulated deleted product is a strictly increasing chain
``(u_0, v_0) < ... < (u_q, v_q)`` of vertex pairs in the componentwise order
whose two projections are disjoint simplices of the source complex.  The
chains whose projections are exactly ``sigma`` and ``tau`` are the lattice
paths from corner to corner of the ``|sigma| x |tau|`` grid with unit steps
right, up or diagonal; they triangulate the cell ``sigma x tau``.

The quotient by the coordinate swap is kept as a Delta-complex (ordered
simplices with face tables).  It is generally not a simplicial complex:
distinct orbit simplices may share their vertex set.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .complex import Simplex, SimplicialComplex, build_complex
from .errors import IntegrityError, UsageError


@dataclass(frozen=True, order=True)
class CellPair:
    """A closed cell ``sigma x tau`` of the simplicial deleted product."""

    sigma: Simplex
    tau: Simplex

    def __post_init__(self):
        if set(self.sigma) & set(self.tau):
            raise UsageError(f"cell pair {self.sigma} x {self.tau} is not disjoint")

    @property
    def dim(self) -> int:
        return len(self.sigma) + len(self.tau) - 2

    def swapped(self) -> CellPair:
        return CellPair(self.tau, self.sigma)


def deleted_cell_pairs(k: SimplicialComplex) -> list[CellPair]:
    """All ordered pairs of disjoint simplices, sorted by (dimension, sigma, tau)."""
    simplices = k.simplices()
    out = []
    for s in simplices:
        ss = set(s)
        for t in simplices:
            if ss.isdisjoint(t):
                out.append(CellPair(s, t))
    out.sort(key=lambda c: (c.dim, len(c.sigma), c.sigma, c.tau))
    return out


@lru_cache(maxsize=None)
def staircase_paths(p: int, q: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Lattice paths (0,0) -> (p,q) with steps (1,0), (0,1), (1,1), as point tuples.

    These are the chains of the grid poset that surject onto both factors;
    the ones with ``p + q`` steps are the ``C(p+q, p)`` top simplices.
    """
    if p < 0 or q < 0:
        raise UsageError("negative grid size")
    if p == 0 and q == 0:
        return (((0, 0),),)
    out = []
    for dp, dq in ((1, 0), (0, 1), (1, 1)):
        if p - dp >= 0 and q - dq >= 0:
            for path in staircase_paths(p - dp, q - dq):
                out.append(path + ((p, q),))
    return tuple(sorted(out))


class DeltaComplex:
    """Ordered simplices with face tables.

    ``simplices[q]`` is a list of vertex-id tuples; ``faces[q]`` is an
    ``(n_q, q+1)`` int array with ``faces[q][s, i]`` the id of the face
    obtained by deleting vertex ``i`` of simplex ``s``.
    """

    def __init__(self, simplices: list[list[tuple]], faces: list[np.ndarray]):
        self.simplices = simplices
        self.faces = faces

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, q: int) -> int:
        if 0 <= q < len(self.simplices):
            return len(self.simplices[q])
        return 0

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * c for q, c in enumerate(self.counts()))

    def face_array(self, q: int) -> np.ndarray:
        if q <= 0 or q > self.dim:
            return np.zeros((0, q + 1), dtype=np.int64)
        return self.faces[q]

    def check_simplicial_identities(self) -> None:
        """``d_i d_j == d_{j-1} d_i`` for ``i < j``; raises IntegrityError."""
        for q in range(2, self.dim + 1):
            F, G = self.faces[q], self.faces[q - 1]
            for j in range(q + 1):
                for i in range(j):
                    lhs = G[F[:, j], i]
                    rhs = G[F[:, i], j - 1]
                    if not np.array_equal(lhs, rhs):
                        bad = int(np.flatnonzero(lhs != rhs)[0])
                        raise IntegrityError(
                            f"simplicial identity d_{i}d_{j} fails on {q}-simplex {bad}"
                        )


def _intern(simplices_by_dim: list[list[tuple]]) -> tuple[list[dict], list[np.ndarray]]:
    index = [{s: i for i, s in enumerate(layer)} for layer in simplices_by_dim]
    faces = [np.zeros((len(simplices_by_dim[0]), 1), dtype=np.int64)]
    for q in range(1, len(simplices_by_dim)):
        layer = simplices_by_dim[q]
        lower = index[q - 1]
        arr = np.empty((len(layer), q + 1), dtype=np.int64)
        try:
            for s_id, s in enumerate(layer):
                for i in range(q + 1):
                    arr[s_id, i] = lower[s[:i] + s[i + 1:]]
        except KeyError as exc:
            raise IntegrityError(f"face {exc.args[0]} of a {q}-simplex is missing") from None
        faces.append(arr)
    return index, faces


class EquivariantDeltaComplex(DeltaComplex):
    """Delta-complex with a free simplicial involution.

    Vertex ids are assigned in increasing key order, so the canonical lift of
    a vertex orbit is its member with the smaller id.  The involution acts on
    an ordered simplex vertex by vertex; the vertex order must be preserved by
    it, which holds for the componentwise pair order and for index-ordered
    antipodal spheres.
    """

    def __init__(self, vertex_labels, vertex_involution, simplices, faces, involution, source=None):
        super().__init__(simplices, faces)
        self.vertex_labels = list(vertex_labels)
        self.vertex_involution = np.asarray(vertex_involution, dtype=np.int64)
        self.involution = involution
        self.source = source

    @classmethod
    def from_chains(cls, vertex_labels, vertex_involution, chains, source=None) -> EquivariantDeltaComplex:
        """Build from vertex-id tuples (any order); ids become lexicographic order."""
        by_dim: dict[int, set] = {}
        for c in chains:
            by_dim.setdefault(len(c) - 1, set()).add(tuple(c))
        top = max(by_dim) if by_dim else -1
        simplices = [sorted(by_dim.get(q, ())) for q in range(top + 1)]
        index, faces = _intern(simplices)
        vinv = np.asarray(vertex_involution, dtype=np.int64)
        involution = []
        for q, layer in enumerate(simplices):
            arr = np.empty(len(layer), dtype=np.int64)
            for s_id, s in enumerate(layer):
                image = tuple(int(vinv[v]) for v in s)
                try:
                    arr[s_id] = index[q][image]
                except KeyError:
                    raise IntegrityError(f"involution image of {s} is not a simplex") from None
            involution.append(arr)
        return cls(vertex_labels, vinv, simplices, faces, involution, source)

    @property
    def vertex_canonical(self) -> np.ndarray:
        """True for the canonical lift (smaller id) of each vertex orbit."""
        ids = np.arange(len(self.vertex_labels))
        return ids < self.vertex_involution

    def skeleton(self, n: int) -> EquivariantDeltaComplex:
        """Equivariant n-skeleton; simplex ids are unchanged."""
        if n < 0:
            raise UsageError("skeleton dimension must be non-negative")
        m = min(n, self.dim) + 1
        return EquivariantDeltaComplex(
            self.vertex_labels, self.vertex_involution,
            self.simplices[:m], self.faces[:m], self.involution[:m], self.source,
        )

    def check_involution(self) -> None:
        """Free, an involution, and commuting with every face map."""
        for q in range(self.dim + 1):
            inv = self.involution[q]
            ids = np.arange(inv.shape[0])
            if np.any(inv == ids):
                raise IntegrityError(f"involution fixes a {q}-simplex")
            if not np.array_equal(inv[inv], ids):
                raise IntegrityError(f"involution does not square to the identity in degree {q}")
            if q >= 1:
                F = self.faces[q]
                if not np.array_equal(F[inv], self.involution[q - 1][F]):
                    raise IntegrityError(f"involution does not commute with faces in degree {q}")

    def check_all(self) -> None:
        self.check_simplicial_identities()
        self.check_involution()
        for q, c in enumerate(self.counts()):
            if c % 2:
                raise IntegrityError(f"odd number of {q}-simplices")


def triangulated_deleted_product(k: SimplicialComplex) -> EquivariantDeltaComplex:
    """Staircase triangulation of the simplicial deleted product of ``k``.

    Vertex labels are ordered pairs ``(u, v)`` of dense vertex indices of ``k``.
    """
    n = k.n_vertices
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    pid = {p: i for i, p in enumerate(pairs)}
    vinv = [pid[(v, u)] for (u, v) in pairs]
    chains = []
    for cell in deleted_cell_pairs(k):
        s, t = cell.sigma, cell.tau
        if s[0] > t[0]:
            continue  # the swapped cell contributes the mirror chains below
        for path in staircase_paths(len(s) - 1, len(t) - 1):
            chain = tuple(pid[(s[i], t[j])] for i, j in path)
            chains.append(chain)
            chains.append(tuple(pid[(t[j], s[i])] for i, j in path))
    x = EquivariantDeltaComplex.from_chains(pairs, vinv, chains, source=k)
    return x


def chain_pairs(x: EquivariantDeltaComplex, q: int, s: int) -> list[tuple[int, int]]:
    return [x.vertex_labels[v] for v in x.simplices[q][s]]


def check_projections(x: EquivariantDeltaComplex, k: SimplicialComplex) -> None:
    """Every chain projects to two disjoint simplices of ``k``, and never
    contains both ``(u, v)`` and ``(v, u)``."""
    for q, layer in enumerate(x.simplices):
        for s in layer:
            prs = [x.vertex_labels[v] for v in s]
            us = tuple(sorted({u for u, _ in prs}))
            vs = tuple(sorted({v for _, v in prs}))
            if set(us) & set(vs):
                raise IntegrityError(f"chain {prs} has overlapping projections")
            if us not in k or vs not in k:
                raise IntegrityError(f"chain {prs} projects outside the complex")
            ps = set(prs)
            if any((v, u) in ps for u, v in prs):
                raise IntegrityError(f"chain {prs} contains a swapped pair")


def antipodal_sphere(d: int) -> EquivariantDeltaComplex:
    """Boundary of the d-dimensional cross-polytope with the antipodal map.

    Vertices ``+i`` and ``-i`` are ordered by index ``i`` (``+i`` first), so each
    simplex is ordered by index and negation preserves that order.
    """
    if d < 1:
        raise UsageError("antipodal_sphere needs d >= 1")
    labels = [s * i for i in range(1, d + 1) for s in (1, -1)]
    vid = {v: j for j, v in enumerate(labels)}
    vinv = [vid[-v] for v in labels]
    chains = []
    for size in range(1, d + 1):
        for idx in combinations(range(1, d + 1), size):
            for signs in range(2**size):
                chains.append(tuple(
                    vid[i * (-1 if (signs >> b) & 1 else 1)] for b, i in enumerate(idx)
                ))
    facets = [[i * (-1 if (m >> (i - 1)) & 1 else 1) for i in range(1, d + 1)] for m in range(2**d)]
    return EquivariantDeltaComplex.from_chains(labels, vinv, chains, source=build_complex(facets))


class QuotientComplex(DeltaComplex):
    """Swap quotient with the double-cover cocycle ``z`` on its 1-simplices.

    ``reps[q]`` holds the canonical representative chain (vertex ids of the
    equivariant complex) of each orbit; ``vertex_canonical`` flags canonical
    lifts among those ids.
    """

    def __init__(self, simplices, faces, z, vertex_canonical, vertex_labels=None, rep_ids=None):
        super().__init__(simplices, faces)
        self.z = np.asarray(z, dtype=np.uint8)
        self.vertex_canonical = np.asarray(vertex_canonical, dtype=bool)
        self.vertex_labels = vertex_labels
        self.rep_ids = rep_ids

    @property
    def reps(self) -> list[list[tuple]]:
        return self.simplices

    def noncanonical_flags(self, q: int) -> np.ndarray:
        """``(n_q, q+1)`` array: vertex ``i`` of representative ``s`` is not a canonical lift."""
        if self.count(q) == 0:
            return np.zeros((0, q + 1), dtype=np.uint8)
        verts = np.asarray(self.simplices[q], dtype=np.int64).reshape(-1, q + 1)
        return (~self.vertex_canonical[verts]).astype(np.uint8)

    def check_cocycle(self) -> None:
        if self.dim < 2:
            return
        F = self.faces[2]
        total = self.z[F[:, 0]] ^ self.z[F[:, 1]] ^ self.z[F[:, 2]]
        if total.any():
            raise IntegrityError(f"z is not a cocycle on 2-simplex {int(np.flatnonzero(total)[0])}")

    def skeleton(self, n: int) -> QuotientComplex:
        m = min(n, self.dim) + 1
        return QuotientComplex(
            self.simplices[:m], self.faces[:m], self.z if m > 1 else np.zeros(0, np.uint8),
            self.vertex_canonical, self.vertex_labels,
            self.rep_ids[:m] if self.rep_ids is not None else None,
        )

    def to_dict(self) -> dict:
        labels = self.vertex_labels
        lab = (lambda v: list(labels[v]) if isinstance(labels[v], tuple) else labels[v]) if labels else int
        return {
            "kind": "swap_quotient",
            "counts": self.counts(),
            "vertex_canonical": [bool(b) for b in self.vertex_canonical],
            "vertex_labels": [lab(v) for v in range(len(self.vertex_canonical))],
            "simplices": [[list(map(int, s)) for s in layer] for layer in self.simplices],
            "faces": [f.tolist() for f in self.faces[1:]],
            "z": [int(b) for b in self.z],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> QuotientComplex:
        if doc.get("kind") != "swap_quotient":
            raise UsageError("not a swap_quotient document")
        simplices = [[tuple(s) for s in layer] for layer in doc["simplices"]]
        faces = [np.zeros((len(simplices[0]), 1), dtype=np.int64)]
        for q, f in enumerate(doc["faces"], start=1):
            faces.append(np.asarray(f, dtype=np.int64).reshape(-1, q + 1))
        labels = [tuple(v) if isinstance(v, list) else v for v in doc.get("vertex_labels", [])]
        return cls(simplices, faces, doc["z"], doc["vertex_canonical"], labels or None)


def swap_quotient(x: EquivariantDeltaComplex) -> QuotientComplex:
    """Orbit Delta-complex of ``x`` plus the double-cover cocycle."""
    x.check_involution()
    simplices, faces, rep_ids = [], [], []
    orbit_of = []
    for q in range(x.dim + 1):
        inv = x.involution[q]
        ids = np.arange(inv.shape[0])
        # ids follow lexicographic chain order, so the smaller id is the smaller chain
        reps = ids[ids < inv]
        if 2 * reps.shape[0] != ids.shape[0]:
            raise IntegrityError(f"orbits in degree {q} do not all have two elements")
        orbit = np.empty(ids.shape[0], dtype=np.int64)
        orbit[reps] = np.arange(reps.shape[0])
        orbit[inv[reps]] = np.arange(reps.shape[0])
        orbit_of.append(orbit)
        rep_ids.append(reps)
        simplices.append([x.simplices[q][r] for r in reps])
        if q == 0:
            faces.append(np.zeros((reps.shape[0], 1), dtype=np.int64))
        else:
            faces.append(orbit_of[q - 1][x.faces[q][reps]])
    canonical = x.vertex_canonical
    if x.dim >= 1:
        e = np.asarray(simplices[1], dtype=np.int64).reshape(-1, 2)
        z = ((~canonical[e[:, 0]]) ^ (~canonical[e[:, 1]])).astype(np.uint8)
    else:
        z = np.zeros(0, dtype=np.uint8)
    qc = QuotientComplex(simplices, faces, z, canonical, x.vertex_labels, rep_ids)
    qc.check_cocycle()
    return qc


def quotient_of(k: SimplicialComplex) -> QuotientComplex:
    """Convenience: quotient of the triangulated deleted product of ``k``."""
    return swap_quotient(triangulated_deleted_product(k))
