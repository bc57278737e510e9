from itertools import combinations
from math import comb

import numpy as np
import pytest

from vkflores.cohomology import betti_numbers
from vkflores.complex import build_complex, skeleton, standard_complex
from vkflores.deleted_product import (
    CellPair, antipodal_sphere, check_projections, deleted_cell_pairs, staircase_paths,
    swap_quotient, triangulated_deleted_product,
)
from vkflores.errors import IntegrityError, UsageError


def brute_chains(k):
    """All chains of the pair poset with disjoint simplex projections, by subset enumeration."""
    n = k.n_vertices
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    leq = lambda a, b: a[0] <= b[0] and a[1] <= b[1]
    out = set()
    for size in range(1, 2 * n):
        found = False
        for subset in combinations(pairs, size):
            ordered = sorted(subset)
            if not all(leq(a, b) for a, b in zip(ordered, ordered[1:])):
                continue
            us = tuple(sorted({u for u, _ in ordered}))
            vs = tuple(sorted({v for _, v in ordered}))
            if set(us) & set(vs) or us not in k or vs not in k:
                continue
            out.add(tuple(ordered))
            found = True
        if not found:
            break
    return out


def chains_of(x):
    return {tuple(x.vertex_labels[v] for v in s) for layer in x.simplices for s in layer}


def test_cell_pair_examples():
    tri = standard_complex("simplex", 2)
    cells = deleted_cell_pairs(tri)
    vv = [c for c in cells if len(c.sigma) == len(c.tau) == 1]
    ve = [c for c in cells if {len(c.sigma), len(c.tau)} == {1, 2}]
    assert len(cells) == 12 and len(vv) == 6 and len(ve) == 6
    edge = standard_complex("simplex", 1)
    assert deleted_cell_pairs(edge) == [CellPair((0,), (1,)), CellPair((1,), (0,))]
    k5 = skeleton(standard_complex("simplex", 4), 1)
    cells = deleted_cell_pairs(k5)
    counts = {}
    for c in cells:
        key = (len(c.sigma), len(c.tau))
        counts[key] = counts.get(key, 0) + 1
    assert counts[(1, 1)] == 20
    assert counts[(1, 2)] == counts[(2, 1)] == 5 * comb(4, 2) == 30
    assert counts[(2, 2)] == 30
    assert len(cells) == 110


def test_cell_pairs_deterministic_and_symmetric():
    k = standard_complex("rp2_6")
    cells = deleted_cell_pairs(k)
    assert cells == deleted_cell_pairs(k)
    assert {c.swapped() for c in cells} == set(cells)


def test_cell_pair_rejects_overlap():
    with pytest.raises(UsageError):
        CellPair((0, 1), (1, 2))


@pytest.mark.parametrize("p, q", [(p, q) for p in range(4) for q in range(4)])
def test_top_chains_per_cell(p, q):
    top = [path for path in staircase_paths(p, q) if len(path) == p + q + 1]
    assert len(top) == comb(p + q, p)


@pytest.mark.parametrize("k", [
    standard_complex("simplex", 1),
    standard_complex("simplex", 2),
    standard_complex("simplex", 3),
    skeleton(standard_complex("simplex", 4), 1),
    standard_complex("cross_polytope_boundary", 2),
    build_complex([(1, 2, 3), (3, 4), (4, 5, 6)]),
], ids=["d1", "d2", "d3", "k5", "square", "mixed"])
def test_triangulation_matches_brute_force(k):
    x = triangulated_deleted_product(k)
    assert chains_of(x) == brute_chains(k)


def test_edge_deleted_product():
    x = triangulated_deleted_product(standard_complex("simplex", 1))
    assert x.counts() == [2]
    assert x.vertex_labels[0] == (0, 1) and x.involution[0].tolist() == [1, 0]


def test_triangle_deleted_product_is_circle():
    x = triangulated_deleted_product(standard_complex("simplex", 2))
    assert betti_numbers(x) == [1, 1]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_simplex_deleted_product_is_sphere(n):
    x = triangulated_deleted_product(standard_complex("simplex", n))
    assert betti_numbers(x) == [1] + [0] * (n - 2) + [1]


@pytest.mark.parametrize("name", ["rp2_6", "torus_7"])
def test_structural_invariants_corpus(name):
    k = standard_complex(name)
    x = triangulated_deleted_product(k)
    x.check_all()
    check_projections(x, k)
    q = swap_quotient(x)
    assert [2 * c for c in q.counts()] == x.counts()
    assert x.euler_characteristic() == 2 * q.euler_characteristic()
    q.check_cocycle()
    q.check_simplicial_identities()


def test_quotient_of_d3_is_rp2():
    q = swap_quotient(triangulated_deleted_product(standard_complex("simplex", 3)))
    assert betti_numbers(q) == [1, 1, 1]


def test_antipodal_square_quotient_is_circle():
    x = antipodal_sphere(2)
    x.check_all()
    q = swap_quotient(x)
    assert q.counts() == [2, 2] and betti_numbers(q) == [1, 1]
    # the two edges form the loop; z sums to 1 around it
    assert int(q.z.sum()) % 2 == 1


def test_antipodal_sphere_matches_cross_polytope():
    for d in range(1, 5):
        x = antipodal_sphere(d)
        k = standard_complex("cross_polytope_boundary", d)
        assert x.counts() == k.f_vector()


def test_quotient_is_not_simplicial_witness():
    k = standard_complex("simplex", 3)
    x = triangulated_deleted_product(k)
    q = swap_quotient(x)
    pid = {lab: i for i, lab in enumerate(x.vertex_labels)}
    idx = {s: i for i, s in enumerate(x.simplices[1])}
    a = idx[(pid[(0, 1)], pid[(2, 3)])]
    b = idx[(pid[(0, 1)], pid[(3, 2)])]
    orbit = {int(r): i for i, r in enumerate(q.rep_ids[1])}
    inv = x.involution[1]
    qa = orbit.get(a, orbit.get(int(inv[a])))
    qb = orbit.get(b, orbit.get(int(inv[b])))
    assert qa != qb
    vorb = lambda v: min(v, int(x.vertex_involution[v]))
    assert {vorb(v) for v in q.simplices[1][qa]} == {vorb(v) for v in q.simplices[1][qb]}


def test_z_independent_of_representative():
    x = triangulated_deleted_product(standard_complex("rp2_6"))
    canon = x.vertex_canonical
    for s, t in zip(x.simplices[1], [x.simplices[1][i] for i in x.involution[1]]):
        z_s = (not canon[s[0]]) ^ (not canon[s[1]])
        z_t = (not canon[t[0]]) ^ (not canon[t[1]])
        assert z_s == z_t


def test_non_free_involution_rejected():
    x = antipodal_sphere(2)
    x.involution[0] = np.arange(x.count(0))
    with pytest.raises(IntegrityError):
        swap_quotient(x)


def test_equivariant_skeleton_keeps_ids():
    x = triangulated_deleted_product(standard_complex("simplex", 4))
    s = x.skeleton(1)
    assert s.counts() == x.counts()[:2]
    assert s.simplices[1] == x.simplices[1]


def test_quotient_round_trip():
    from vkflores.deleted_product import QuotientComplex

    q = swap_quotient(triangulated_deleted_product(standard_complex("simplex", 3)))
    again = QuotientComplex.from_dict(q.to_dict())
    assert again.counts() == q.counts()
    assert all(np.array_equal(a, b) for a, b in zip(again.faces, q.faces))
    assert np.array_equal(again.z, q.z)

