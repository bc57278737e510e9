"""Non-embeddability verdicts from characteristic classes, certified by heights.

For a closed ``D``-manifold ``M`` with ``w^(k)(M) != 1`` every map of a
triangulation into ``R^(D+k)`` has a coincidence pair with dimension sum at
most ``D+k``.  When moreover ``D = 2d+k+1`` with ``0 <= k <= d-1``, the
``(d+k)``-skeleton does not embed in ``R^(2d+2k)``.  Certification computes the
height of the triangulated deleted product and checks ``h >= D + k``, which is
what the coincidence statement needs on that triangulation.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field

from .char_class import AlgebraElement, GradedAlgebra, parse_model_name, wk_classes
from .cohomology import sw_height
from .complex import SimplicialComplex, check_closed_pseudomanifold, euler_characteristic
from .deleted_product import swap_quotient, triangulated_deleted_product
from .errors import UsageError

log = logging.getLogger(__name__)

RADON = "radon-coincidence"
SKELETON = "skeleton-non-embeddable"

CLAUSES = {
    (RADON, 0): "coincidence from the height bound h >= D via the Borsuk-Ulam-type argument (k = 0)",
    (RADON, 1): "topological Radon theorem for manifold triangulations (1 <= k <= D-1)",
    (SKELETON, 0): "van Kampen-Flores type: d-skeleton of a (2d+1)-manifold with w != 1",
    (SKELETON, 1): "van Kampen-Flores type: (d+k)-skeleton of a (2d+k+1)-manifold with w^(k) != 1",
}

# the header of the Radon statement requires k >= 1; its proof covers k = 0
K0_NOTE = "Radon statement is stated for k >= 1; k = 0 follows the same height route"


@dataclass
class Verdict:
    manifold: str
    D: int
    k: int
    kind: str
    target_dim: int
    dim_sum_bound: int | None = None
    skeleton_dim: int | None = None
    d: int | None = None
    evidence: list[str] = field(default_factory=list)
    clause: str = ""
    note: str = ""
    certification: str = "symbolic-only"
    computed_h: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def skeleton_parameters(D: int, k: int) -> int | None:
    """``d`` with ``D = 2d + k + 1``, ``d >= 1`` and ``k <= d - 1``, if any."""
    rest = D - k - 1
    if rest < 2 or rest % 2:
        return None
    d = rest // 2
    return d if 0 <= k <= d - 1 else None


def enumerate_claims(model: GradedAlgebra, w: list[AlgebraElement], D: int, name: str = "M") -> list[Verdict]:
    """All verdicts implied by nontrivial ``w^(k)``, ``0 <= k <= D-1``."""
    if model.top != D:
        raise UsageError(f"model top degree {model.top} does not match manifold dimension {D}")
    if len(w) != D:
        raise UsageError(f"expected {D} Stiefel-Whitney classes, got {len(w)}")
    out = []
    for k in range(D):
        res = wk_classes(model, w, k)
        if not res.nontrivial:
            continue
        evidence = [f"w_{i}^({k}) = {c!r}" for i, c in enumerate(res.classes, start=1) if not c.is_zero()]
        out.append(Verdict(
            manifold=name, D=D, k=k, kind=RADON, target_dim=D + k, dim_sum_bound=D + k,
            evidence=evidence, clause=CLAUSES[(RADON, min(k, 1))],
            note=K0_NOTE if k == 0 else "",
        ))
        d = skeleton_parameters(D, k)
        if d is not None:
            out.append(Verdict(
                manifold=name, D=D, k=k, kind=SKELETON, target_dim=2 * d + 2 * k,
                skeleton_dim=d + k, d=d, evidence=evidence, clause=CLAUSES[(SKELETON, min(k, 1))],
            ))
    return out


# models for complexes whose manifold type is known
KNOWN_MODELS = {
    "rp2_6": "rp2",
    "torus_7": "s1xs1",
    "cp2_9": "cp2",
}


def model_for_complex(name: str) -> str | None:
    if name in KNOWN_MODELS:
        return KNOWN_MODELS[name]
    kind, _, arg = name.partition(":")
    if kind == "boundary_simplex" and arg.isdigit():
        return f"s{int(arg) - 1}"
    if kind in ("cross", "cross_polytope_boundary") and arg.isdigit():
        return f"s{int(arg) - 1}"
    return None


@dataclass
class CertificationReport:
    D: int
    level: int
    target: int
    computed_h: int
    certified: bool
    status: str
    hypothesis: str
    pseudomanifold: dict
    euler_characteristic: int
    claim: dict | None
    height: dict
    warnings: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        d["height"] = self.height if timings else _strip_seconds(self.height)
        if not timings:
            d.pop("seconds")
        return d


def _strip_seconds(h: dict) -> dict:
    h = dict(h)
    h.pop("seconds", None)
    h["degrees"] = [{k: v for k, v in g.items() if k != "seconds"} for g in h.get("degrees", [])]
    return h


def certify_height_bound(
    k: SimplicialComplex,
    D: int,
    level: int,
    model: tuple[GradedAlgebra, list[AlgebraElement]] | str | None = None,
    max_degree: int | None = None,
    name: str = "K",
) -> CertificationReport:
    """Compute the height of ``k``'s deleted product and test ``h >= D + level``.

    ``model`` supplies ``w(M)``; without it the hypothesis is reported as
    unknown and only the height inequality is checked.
    """
    t0 = time.perf_counter()
    if level < 0 or (D >= 1 and level > D - 1):
        raise UsageError(f"level {level} outside 0..{D - 1}")
    warnings = []
    pm = check_closed_pseudomanifold(k)
    if not pm.passed:
        warnings.append("input fails the closed-pseudomanifold check")
    if k.dim != D:
        warnings.append(f"complex has dimension {k.dim}, not {D}")
    for msg in warnings:
        log.warning(msg)

    claim = None
    if model is None:
        hypothesis = "unknown"
    else:
        alg, w = parse_model_name(model) if isinstance(model, str) else model
        claims = enumerate_claims(alg, w, D, name=name)
        match = [c for c in claims if c.kind == RADON and c.k == level]
        hypothesis = "satisfied" if match else "not satisfied"
        claim = match[0] if match else None

    target = D + level
    q = swap_quotient(triangulated_deleted_product(k))
    rep = sw_height(q, max_degree=max_degree)
    certified = rep.h >= target
    if hypothesis == "not satisfied":
        status = "no claim to certify"
    elif certified:
        status = "height-certified"
    elif rep.lower_bound_only and rep.h < target:
        status = "inconclusive (degree cap)"
    elif hypothesis == "satisfied":
        status = "contradiction"
    else:
        status = "not certified"
    if claim is not None and certified:
        claim.certification = "height-certified"
        claim.computed_h = rep.h
    return CertificationReport(
        D=D, level=level, target=target, computed_h=rep.h, certified=certified,
        status=status, hypothesis=hypothesis, pseudomanifold=pm.to_dict(),
        euler_characteristic=euler_characteristic(k),
        claim=claim.to_dict() if claim else None, height=rep.to_dict(),
        warnings=warnings, seconds=time.perf_counter() - t0,
    )
