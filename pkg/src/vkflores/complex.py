"""Abstract simplicial complexes given by their facets.

Vertex labels are mapped once to dense indices ``0..n-1`` in sorted label
order; every simplex is a sorted tuple of dense indices.  That order is the
global vertex order used by the deleted-product triangulation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations
from pathlib import Path

from .errors import IntegrityError, UsageError

Simplex = tuple[int, ...]

CORPUS = ("rp2_6", "torus_7", "cp2_9")


def _sorted_labels(labels):
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=lambda v: (type(v).__name__, str(v)))


class SimplicialComplex:
    """Immutable complex; facets are stored, lower faces are derived on demand."""

    def __init__(self, vertices, facets: list[Simplex]):
        self._vertices = tuple(vertices)
        self._facets = tuple(sorted(facets, key=lambda f: (len(f), f)))
        self._index = {v: i for i, v in enumerate(self._vertices)}

    @property
    def vertices(self) -> tuple:
        """Vertex labels in global order."""
        return self._vertices

    @property
    def facets(self) -> tuple[Simplex, ...]:
        return self._facets

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UsageError(f"unknown vertex {label!r}") from None

    def simplex(self, labels) -> Simplex:
        """Dense-index simplex for a collection of labels."""
        s = tuple(sorted(self.index_of(v) for v in labels))
        if not s or len(set(s)) != len(s):
            raise UsageError(f"not a simplex: {labels!r}")
        return s

    def labels(self, s: Simplex) -> tuple:
        return tuple(self._vertices[i] for i in s)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self._facets), default=0) - 1

    @cached_property
    def _faces(self) -> list[list[Simplex]]:
        out: list[set] = [set() for _ in range(self.dim + 1)]
        for f in self._facets:
            for k in range(1, len(f) + 1):
                out[k - 1].update(combinations(f, k))
        return [sorted(s) for s in out]

    @cached_property
    def _face_set(self) -> frozenset:
        return frozenset(s for layer in self._faces for s in layer)

    def faces(self, q: int) -> list[Simplex]:
        """All ``q``-dimensional simplices, lexicographically sorted."""
        if q < 0 or q > self.dim:
            return []
        return list(self._faces[q])

    def simplices(self) -> list[Simplex]:
        return [s for layer in self._faces for s in layer]

    def __contains__(self, s) -> bool:
        return tuple(s) in self._face_set

    def f_vector(self) -> list[int]:
        return [len(layer) for layer in self._faces]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and set(self._facets) == set(other._facets)

    def __hash__(self):
        return hash((self._vertices, frozenset(self._facets)))

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector()})"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self._vertices),
            "facets": [list(self.labels(f)) for f in self._facets],
        }


def build_complex(facets, vertices=None) -> SimplicialComplex:
    """Complex generated by ``facets``; nested facets are absorbed.

    ``vertices`` may fix the label order explicitly; by default labels are
    sorted.  Every listed vertex must occur in some facet.
    """
    facet_sets = []
    for f in facets:
        fs = frozenset(f)
        if not fs:
            raise UsageError("empty facet")
        if len(fs) != len(list(f)):
            raise UsageError(f"repeated vertex in facet {list(f)!r}")
        facet_sets.append(fs)
    if not facet_sets:
        raise UsageError("a complex needs at least one facet")
    used = set().union(*facet_sets)
    if vertices is None:
        order = _sorted_labels(used)
    else:
        order = list(vertices)
        if len(set(order)) != len(order):
            raise UsageError("duplicate vertex labels")
        if set(order) != used:
            raise UsageError("vertex list does not match the vertices used by facets")
    index = {v: i for i, v in enumerate(order)}
    # absorb nested facets: keep only maximal ones
    unique = sorted(set(facet_sets), key=len, reverse=True)
    maximal: list[frozenset] = []
    for fs in unique:
        if not any(fs <= m for m in maximal):
            maximal.append(fs)
    dense = [tuple(sorted(index[v] for v in fs)) for fs in maximal]
    return SimplicialComplex(order, dense)


def skeleton(k: SimplicialComplex, n: int) -> SimplicialComplex:
    """Subcomplex of all simplices of dimension at most ``n``."""
    if n < 0:
        raise UsageError("skeleton dimension must be non-negative")
    if n >= k.dim:
        return k
    facets = set()
    for f in k.facets:
        if len(f) <= n + 1:
            facets.add(f)
        else:
            facets.update(combinations(f, n + 1))
    labelled = [k.labels(f) for f in facets]
    return build_complex(labelled, vertices=k.vertices)


def euler_characteristic(k: SimplicialComplex) -> int:
    return sum((-1) ** q * c for q, c in enumerate(k.f_vector()))


# ----------------------------------------------------------------------------
# standard complexes and the corpus


def _simplex(n: int) -> SimplicialComplex:
    if n < 0:
        raise UsageError("simplex dimension must be >= 0")
    return build_complex([range(1, n + 2)])


def _boundary_simplex(n: int) -> SimplicialComplex:
    if n < 1:
        raise UsageError("boundary_simplex needs n >= 1")
    return build_complex(combinations(range(1, n + 2), n))


def _cross_polytope_boundary(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross-polytope, vertices ``±1..±d``."""
    if d < 1:
        raise UsageError("cross_polytope_boundary needs d >= 1")
    facets = []
    for signs in range(2**d):
        facets.append([(i + 1) * (-1 if (signs >> i) & 1 else 1) for i in range(d)])
    return build_complex(facets)


def _load_corpus_entry(name: str) -> tuple[SimplicialComplex, dict]:
    text = resources.files("vkflores.data").joinpath(f"{name}.json").read_text()
    doc = json.loads(text)
    return complex_from_dict(doc), doc


def load_corpus(name: str) -> SimplicialComplex:
    """Load a built-in triangulation, validating it against its stored metadata."""
    if name not in CORPUS:
        raise UsageError(f"unknown corpus entry {name!r}; known: {', '.join(CORPUS)}")
    k, doc = _load_corpus_entry(name)
    report = check_closed_pseudomanifold(k)
    if not report.passed:
        raise IntegrityError(f"corpus entry {name} fails the pseudomanifold check: {report}")
    chi = euler_characteristic(k)
    if chi != doc["euler_characteristic"]:
        raise IntegrityError(f"corpus entry {name}: chi={chi}, expected {doc['euler_characteristic']}")
    return k


_KINDS = {
    "simplex": _simplex,
    "boundary_simplex": _boundary_simplex,
    "cross_polytope_boundary": _cross_polytope_boundary,
}


def standard_complex(kind: str, *params: int) -> SimplicialComplex:
    """Built-in complexes: ``simplex(n)``, ``boundary_simplex(n)``,
    ``cross_polytope_boundary(d)`` and the corpus names ``rp2_6``, ``torus_7``,
    ``cp2_9``."""
    if kind in CORPUS:
        if params:
            raise UsageError(f"{kind} takes no parameters")
        return load_corpus(kind)
    try:
        ctor = _KINDS[kind]
    except KeyError:
        raise UsageError(f"unknown complex kind {kind!r}") from None
    if len(params) != 1:
        raise UsageError(f"{kind} takes exactly one integer parameter")
    return ctor(int(params[0]))


# ----------------------------------------------------------------------------
# file format


def complex_from_dict(doc: dict) -> SimplicialComplex:
    if "facets" not in doc:
        raise UsageError("complex document needs a 'facets' field")
    return build_complex(doc["facets"], vertices=doc.get("vertices"))


def read_complex(path) -> SimplicialComplex:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read complex file {path}: {exc}") from exc
    return complex_from_dict(doc)


def write_complex(k: SimplicialComplex, path) -> None:
    Path(path).write_text(json.dumps(k.to_dict()) + "\n")


# ----------------------------------------------------------------------------
# sanity checks


@dataclass
class PseudomanifoldReport:
    pure: bool
    ridges_in_two_facets: bool
    facet_connected: bool
    bad_ridges: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.pure and self.ridges_in_two_facets and self.facet_connected

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "pure": self.pure,
            "ridges_in_two_facets": self.ridges_in_two_facets,
            "facet_connected": self.facet_connected,
            "bad_ridges": [list(r) for r in self.bad_ridges[:10]],
        }


def check_closed_pseudomanifold(k: SimplicialComplex) -> PseudomanifoldReport:
    """Pure, every ridge in exactly two facets, and connected through ridges."""
    d = k.dim
    pure = all(len(f) == d + 1 for f in k.facets)
    incidence: dict[Simplex, list[int]] = {}
    for i, f in enumerate(k.facets):
        if len(f) != d + 1:
            continue
        for r in combinations(f, d):
            incidence.setdefault(r, []).append(i)
    bad = sorted(r for r, fs in incidence.items() if len(fs) != 2)
    ridges_ok = d >= 1 and not bad
    # union-find over facets sharing a ridge
    parent = list(range(len(k.facets)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for fs in incidence.values():
        for other in fs[1:]:
            parent[find(other)] = find(fs[0])
    connected = len({find(i) for i in range(len(k.facets))}) == 1
    return PseudomanifoldReport(pure, ridges_ok, connected, bad)
