"""Acceptance criteria 1-10 with their tolerances and time limits.

Each test is tagged with ``criterion(n)``; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run.
"""

import time

import pytest

from vkflores.char_class import (
    a_polynomial, generic_model, parse_model_name, sphere_reduce_power, standard_model, total_class, wk_classes,
)
from vkflores.cohomology import betti_numbers, sw_height
from vkflores.complex import skeleton, standard_complex
from vkflores.deleted_product import antipodal_sphere, swap_quotient, triangulated_deleted_product
from vkflores.obstruction import RADON, SKELETON, certify_height_bound, enumerate_claims
from vkflores.pl_oracle import find_coincidence_pair, random_rational_map
from vkflores.retraction import check_retraction_properties

criterion = pytest.mark.criterion


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


@criterion(1)
def test_recursion_reduction_identity():
    with Timer() as t:
        for d in range(1, 7):
            for k in range(d):
                assert sphere_reduce_power(d, k) == [a_polynomial(i, k, d) for i in range(1, d + 1)], (d, k)
    assert t.seconds < 5


BUILTIN_MODELS = ["rp1", "rp2", "rp3", "rp4", "rp5", "rp6", "cp1", "cp2", "cp3", "s1", "s2", "s3", "s4",
                  "rp2xs1", "s1xs1", "rp2xrp2", "cp2xs1"]


@criterion(2)
def test_worked_identities():
    for name in BUILTIN_MODELS:
        alg, w = parse_model_name(name)
        assert wk_classes(alg, w, 0).total == total_class(alg, w), name
    for d in range(2, 7):
        alg, w = generic_model(d)
        assert wk_classes(alg, w, 1).by_degree(d) == w[0] * w[d - 2] + w[d - 1], d


@criterion(3)
def test_height_oracles():
    with Timer() as t:
        for d in range(2, 6):
            assert sw_height(swap_quotient(antipodal_sphere(d))).h == d - 1, d
        for n in range(2, 5):
            q = swap_quotient(triangulated_deleted_product(standard_complex("simplex", n)))
            assert sw_height(q).h == n - 1, n
            assert betti_numbers(q) == [1] * n, n
    assert t.seconds < 30


@criterion(4)
def test_van_kampen_flores_base_case():
    with Timer() as t:
        k5 = skeleton(standard_complex("simplex", 4), 1)
        h_k5 = sw_height(swap_quotient(triangulated_deleted_product(k5))).h
        h_plane = sw_height(swap_quotient(antipodal_sphere(2))).h
    assert h_k5 == 2 and h_plane == 1
    assert h_k5 > h_plane  # no Z2-map, so K5 does not embed in the plane
    assert t.seconds < 5


@criterion(5)
def test_skeleton_heights():
    with Timer() as t:
        x = antipodal_sphere(5)
        for n in range(0, 4):
            assert sw_height(swap_quotient(x.skeleton(n))).h == n, n
    assert t.seconds < 60


@criterion(6)
def test_certify_rp2():
    with Timer() as t:
        rep = certify_height_bound(standard_complex("rp2_6"), 2, 0, model="rp2", name="rp2_6")
    assert rep.computed_h >= 2 and rep.certified
    assert t.seconds < 10


@criterion(6)
def test_certify_cp2():
    with Timer() as t:
        rep = certify_height_bound(standard_complex("cp2_9"), 4, 1, model="cp2", name="cp2_9")
    assert rep.computed_h >= 5 and rep.certified
    assert t.seconds < 600


@criterion(7)
def test_hypothesis_calculus():
    alg, w = standard_model("rp", 3)
    assert total_class(alg, w) == alg.one()
    assert enumerate_claims(alg, w, 3) == []
    alg, w = standard_model("rp", 5)
    assert total_class(alg, w) == alg.element(["1", "a^2", "a^4"])
    assert {c.kind for c in enumerate_claims(alg, w, 5) if c.k == 0} == {RADON, SKELETON}
    alg, w = standard_model("cp", 2)
    assert wk_classes(alg, w, 1).nontrivial
    assert any(c.kind == RADON and c.k == 1 for c in enumerate_claims(alg, w, 4))


@criterion(8)
def test_oracle_statistics():
    with Timer() as t:
        for d in (1, 2, 3):
            k = standard_complex("simplex", d + 1)
            for seed in range(100):
                hit = find_coincidence_pair(random_rational_map(k, d, seed), d + 1)
                assert hit is not None, (d, seed)
        k5 = skeleton(standard_complex("simplex", 4), 1)
        for seed in range(100):
            assert find_coincidence_pair(random_rational_map(k5, 2, seed), 2) is not None, seed
    assert t.seconds < 60


@criterion(9)
def test_retraction_harness():
    with Timer() as t:
        for name, params in (("simplex", (3,)), ("rp2_6", ())):
            rep = check_retraction_properties(standard_complex(name, *params), 1000, seed=0)
            assert rep.passed, rep.to_dict()
            assert rep.kinds["near_diagonal"] > 0
    assert t.seconds < 10


def _processed_complexes():
    for d in range(2, 6):
        yield f"antipodal:{d}", antipodal_sphere(d)
    for n in range(2, 5):
        yield f"simplex:{n}", triangulated_deleted_product(standard_complex("simplex", n))
    yield "k5", triangulated_deleted_product(skeleton(standard_complex("simplex", 4), 1))
    x = antipodal_sphere(5)
    for n in range(0, 4):
        yield f"antipodal:5/skeleton:{n}", x.skeleton(n)
    for name in ("rp2_6", "cp2_9"):
        yield name, triangulated_deleted_product(standard_complex(name))


@criterion(10)
def test_structural_invariants():
    from vkflores.cohomology import ChainComplexGF2

    for name, x in _processed_complexes():
        x.check_all()  # simplicial identities, free involution, even counts
        assert all(c % 2 == 0 for c in x.counts()), name
        q = swap_quotient(x)
        q.check_cocycle()
        ChainComplexGF2(x)  # raises unless boundary of boundary vanishes
        ChainComplexGF2(q)
        assert x.euler_characteristic() == 2 * q.euler_characteristic(), name
