"""Deformation retraction of the deleted product onto the simplicial deleted product.

Points of ``K`` are barycentric vectors over all vertices.  For ``x != y`` the
map ``alpha(x, y)`` normalises the positive part of ``x - y``; the homotopy

    ((1-t) x + t alpha(x, y), (1-t) y + t alpha(y, x))

ends in a pair of points with disjoint supports.  This module evaluates it in
floating point and samples its properties.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex
from .errors import DomainError, UsageError

TOL = 1e-12
T_GRID = tuple(i / 10 for i in range(11))


def support(p: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(p > 0))


def check_point(k: SimplicialComplex, p: np.ndarray) -> None:
    """Raise DomainError unless ``p`` is a point of ``k``."""
    p = np.asarray(p, dtype=float)
    if p.shape != (k.n_vertices,):
        raise DomainError(f"point has {p.shape} coordinates, complex has {k.n_vertices} vertices")
    if not np.all(np.isfinite(p)) or np.any(p < 0) or abs(p.sum() - 1.0) > TOL:
        raise DomainError("not a barycentric vector")
    if support(p) not in k:
        raise DomainError(f"support {support(p)} is not a simplex")


def alpha(k: SimplicialComplex, x, y, validate: bool = True) -> np.ndarray:
    """Normalised positive part of ``x - y``; lies in the support of ``x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if validate:
        check_point(k, x)
        check_point(k, y)
    delta = np.maximum(x - y, 0.0)
    total = delta.sum()
    if total <= 0.0:
        raise DomainError("alpha is undefined on the diagonal (x == y)")
    return delta / total


def retraction_path(k: SimplicialComplex, x, y, t: float, validate: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """The pair at time ``t`` of the deformation starting at ``(x, y)``."""
    if not 0.0 <= t <= 1.0:
        raise UsageError("t must lie in [0, 1]")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ax = alpha(k, x, y, validate)
    ay = alpha(k, y, x, validate)
    return (1 - t) * x + t * ax, (1 - t) * y + t * ay


# ----------------------------------------------------------------------------
# sampling harness


def _random_in(rng: np.random.Generator, n: int, simplex) -> np.ndarray:
    p = np.zeros(n)
    p[list(simplex)] = rng.dirichlet(np.ones(len(simplex)))
    return p


def _sample_pair(rng, k: SimplicialComplex, kind: str):
    n = k.n_vertices
    simplices = k.simplices()
    if kind == "disjoint":
        for _ in range(100):
            s = simplices[rng.integers(len(simplices))]
            t = simplices[rng.integers(len(simplices))]
            if set(s).isdisjoint(t):
                return _random_in(rng, n, s), _random_in(rng, n, t)
        kind = "generic"
    if kind == "near_diagonal":
        facet = k.facets[rng.integers(len(k.facets))]
        if len(facet) >= 2:
            x = _random_in(rng, n, facet)
            x[list(facet)] = 0.5 * x[list(facet)] + 0.5 / len(facet)  # keep away from the boundary
            i, j = rng.choice(list(facet), size=2, replace=False)
            step = np.zeros(n)
            step[i], step[j] = 1.0, -1.0
            y = x + step * (1e-9 / np.linalg.norm(step))
            return x, y
        kind = "generic"
    while True:
        x = _random_in(rng, n, k.facets[rng.integers(len(k.facets))])
        y = _random_in(rng, n, k.facets[rng.integers(len(k.facets))])
        if not np.array_equal(x, y):
            return x, y


@dataclass
class RetractionReport:
    samples: int
    seed: int
    kinds: dict = field(default_factory=dict)
    failures: dict = field(default_factory=lambda: {
        "endpoint_disjoint": 0, "fixed_points": 0, "stays_in_deleted_product": 0, "equivariance": 0,
        "support_containment": 0, "non_finite": 0,
    })
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def _fail(self, family: str, x, y, detail: str) -> None:
        self.failures[family] += 1
        if len(self.counterexamples) < 10:
            self.counterexamples.append({
                "family": family, "x": x.tolist(), "y": y.tolist(), "detail": detail,
            })

    def to_dict(self) -> dict:
        return {
            "samples": self.samples, "seed": self.seed, "passed": self.passed,
            "kinds": self.kinds, "failures": self.failures, "counterexamples": self.counterexamples,
        }


KINDS = ("generic", "disjoint", "near_diagonal")


def check_retraction_properties(k: SimplicialComplex, samples: int, seed: int = 0) -> RetractionReport:
    """Sample pairs and check the deformation's properties.

    Sample kinds rotate between generic pairs, pairs with disjoint supports,
    and near-diagonal pairs at distance ``1e-9``.
    """
    if samples < 1:
        raise UsageError("need at least one sample")
    rng = np.random.default_rng(seed)
    rep = RetractionReport(samples=samples, seed=seed, kinds={kd: 0 for kd in KINDS})
    for s in range(samples):
        kind = KINDS[s % len(KINDS)]
        x, y = _sample_pair(rng, k, kind)
        rep.kinds[kind] += 1
        _check_pair(k, x, y, rep)
    return rep


def _check_pair(k: SimplicialComplex, x: np.ndarray, y: np.ndarray, rep: RetractionReport) -> None:
    ax = alpha(k, x, y, validate=False)
    ay = alpha(k, y, x, validate=False)
    if not (np.all(np.isfinite(ax)) and np.all(np.isfinite(ay))):
        rep._fail("non_finite", x, y, "alpha produced a non-finite value")
        return
    sx, sy = set(support(x)), set(support(y))
    if not set(support(ax)) <= sx or not set(support(ay)) <= sy:
        rep._fail("support_containment", x, y, "alpha leaves the support of its first argument")

    e1, e2 = retraction_path(k, x, y, 1.0, validate=False)
    s1, s2 = support(e1), support(e2)
    if set(s1) & set(s2) or s1 not in k or s2 not in k:
        rep._fail("endpoint_disjoint", x, y, f"endpoint supports {s1}, {s2}")

    disjoint = not (sx & sy)
    for t in T_GRID:
        p1, p2 = retraction_path(k, x, y, t, validate=False)
        q1, q2 = retraction_path(k, y, x, t, validate=False)
        if np.array_equal(p1, p2):
            rep._fail("stays_in_deleted_product", x, y, f"coordinates collide at t={t}")
        elif not (_in_complex(k, p1) and _in_complex(k, p2)):
            rep._fail("stays_in_deleted_product", x, y, f"left the complex at t={t}")
        if not (np.array_equal(q1, p2) and np.array_equal(q2, p1)):
            rep._fail("equivariance", x, y, f"swap mismatch at t={t}")
        if disjoint and (np.max(np.abs(p1 - x)) > TOL or np.max(np.abs(p2 - y)) > TOL):
            rep._fail("fixed_points", x, y, f"disjoint-support pair moved at t={t}")


def _in_complex(k: SimplicialComplex, p: np.ndarray) -> bool:
    return bool(np.all(p >= 0) and abs(p.sum() - 1.0) <= TOL and support(p) in k)
