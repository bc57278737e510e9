"""Command-line front end.

Every command prints one JSON report.  Exit codes: 0 success, 1 hypothesis
not satisfied (``--strict`` only), 2 usage error, 3 integrity or resource error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__, gf2
from .char_class import model_to_dict, parse_model_name, read_model, symbolic_sphere_height, total_class, wk_classes
from .cohomology import betti_numbers, sw_height
from .complex import (
    CORPUS, check_closed_pseudomanifold, euler_characteristic, load_corpus, read_complex,
    skeleton, standard_complex,
)
from .deleted_product import (
    QuotientComplex, antipodal_sphere, check_projections, swap_quotient, triangulated_deleted_product,
)
from .errors import IntegrityError, ResourceError, UsageError
from .obstruction import certify_height_bound, enumerate_claims, model_for_complex
from .pl_oracle import find_coincidence_pair, random_rational_map, read_map, verify_witness
from .retraction import check_retraction_properties

SCHEMA = "vkflores.report/1"
EXIT_OK, EXIT_HYPOTHESIS, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3

log = logging.getLogger("vkflores")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def resolve_complex(spec: str, skel: int | None = None):
    """Complex from a corpus name, ``kind:param`` (simplex, boundary_simplex,
    cross) or a JSON file path."""
    if spec in CORPUS:
        k = load_corpus(spec)
    elif ":" in spec and not Path(spec).exists():
        kind, _, arg = spec.partition(":")
        kind = {"cross": "cross_polytope_boundary"}.get(kind, kind)
        try:
            k = standard_complex(kind, int(arg))
        except ValueError:
            raise UsageError(f"bad complex parameter in {spec!r}") from None
    else:
        k = read_complex(spec)
    if skel is not None:
        k = skeleton(k, skel)
    return k


def _resolve_model(spec: str):
    if Path(spec).exists():
        return read_model(spec)
    return parse_model_name(spec)


def _load_quotient_doc(spec: str):
    p = Path(spec)
    if p.suffix == ".json" and p.exists():
        try:
            doc = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if isinstance(doc, dict) and doc.get("kind") == "swap_quotient":
            return QuotientComplex.from_dict(doc), doc
    return None


# ----------------------------------------------------------------------------
# commands: each returns (results, inputs, timings, exit code)


def cmd_height(args):
    t0 = time.perf_counter()
    inputs = {}
    if args.complex.startswith("antipodal:"):
        d = int(args.complex.partition(":")[2])
        x = antipodal_sphere(d)
        x.check_all()
        q = swap_quotient(x)
        inputs["complex"] = f"antipodal cross-polytope boundary, d={d}"
        source = {"kind": "antipodal_sphere", "d": d}
    elif (loaded := _load_quotient_doc(args.complex)) is not None:
        q, doc = loaded
        inputs["complex"] = _digest(doc)
        source = {"kind": "swap_quotient_file"}
    else:
        k = resolve_complex(args.complex, args.skeleton)
        inputs["complex"] = _digest(k.to_dict())
        x = triangulated_deleted_product(k)
        x.check_all()
        q = swap_quotient(x)
        source = {"kind": "deleted_product", "f_vector": k.f_vector()}
    build = time.perf_counter() - t0
    rep = sw_height(q, max_degree=args.max_degree)
    results = {"source": source, "height": rep.to_dict(timings=False)}
    return results, inputs, {"build": build, "height": rep.seconds}, EXIT_OK


def cmd_delprod(args):
    k = resolve_complex(args.complex, args.skeleton)
    t0 = time.perf_counter()
    x = triangulated_deleted_product(k)
    x.check_all()
    check_projections(x, k)
    q = swap_quotient(x)
    results = {
        "f_vector": k.f_vector(),
        "equivariant_counts": x.counts(),
        "quotient_counts": q.counts(),
        "euler_characteristic": {"equivariant": x.euler_characteristic(), "quotient": q.euler_characteristic()},
        "checks": {"simplicial_identities": True, "free_involution": True, "projections": True, "cocycle": True},
        "note": "simplex counts are specific to the staircase triangulation",
    }
    if args.betti:
        results["betti_quotient"] = betti_numbers(q)
    if args.emit:
        Path(args.emit).write_text(json.dumps(q.to_dict()) + "\n")
        results["emitted"] = str(args.emit)
    return results, {"complex": _digest(k.to_dict())}, {"build": time.perf_counter() - t0}, EXIT_OK


def _wk_report(model, w, k):
    res = wk_classes(model, w, k)
    d = len(w)
    return {
        "k": k,
        "w": repr(total_class(model, w)),
        "classes": {f"w_{i}^({k})": repr(c) for i, c in enumerate(res.classes, start=1)},
        "total": repr(res.total),
        "nontrivial": res.nontrivial,
        "by_degree": {str(j): repr(res.by_degree(j)) for j in range(k + 1, d + k + 1)},
        "index_note": (
            "classes are indexed by i (cohomological degree i+k); by_degree lists the "
            "degree-j part, which is a_(j-k)^(k)(w)"
        ),
    }


def cmd_wk(args):
    model, w = _resolve_model(args.model)
    results = _wk_report(model, w, args.k)
    results["symbolic_sphere_height"] = symbolic_sphere_height(model, w)
    return results, {"model": _digest(model_to_dict(model, w))}, {}, EXIT_OK


def cmd_claims(args):
    model, w = _resolve_model(args.model)
    claims = enumerate_claims(model, w, args.dim, name=args.model)
    code = EXIT_HYPOTHESIS if (args.strict and not claims) else EXIT_OK
    results = {"w": repr(total_class(model, w)), "claims": [c.to_dict() for c in claims]}
    return results, {"model": _digest(model_to_dict(model, w))}, {}, code


def cmd_certify(args):
    k = resolve_complex(args.complex, None)
    model = args.model or model_for_complex(args.complex)
    model_arg = _resolve_model(model) if model else None
    rep = certify_height_bound(k, args.dim, args.k, model=model_arg, max_degree=args.max_degree,
                               name=args.complex)
    results = rep.to_dict(timings=False)
    results["model"] = model
    code = EXIT_OK
    if rep.status == "contradiction":
        raise IntegrityError("hypothesis holds but the computed height is below the bound")
    if args.strict and rep.hypothesis != "satisfied":
        code = EXIT_HYPOTHESIS
    return results, {"complex": _digest(k.to_dict())}, {"total": rep.seconds}, code


def cmd_radon(args):
    k = resolve_complex(args.complex, args.skeleton)
    if args.map:
        f = read_map(k, args.map)
        if f.target_dim != args.target:
            raise UsageError(f"map has target dimension {f.target_dim}, --target is {args.target}")
        map_desc = {"file": _digest(f.to_dict())}
    else:
        f = random_rational_map(k, args.target, args.random, args.low, args.high)
        map_desc = {"random_seed": args.random, "range": [args.low, args.high]}
    t0 = time.perf_counter()
    hit = find_coincidence_pair(f, args.bound)
    results = {"target": args.target, "bound": args.bound, "map": map_desc, "coincidence": None}
    if hit is not None:
        results["coincidence"] = hit.to_dict(k)
        results["witness_verified"] = verify_witness(f, hit.sigma, hit.tau, hit.point)
    return results, {"complex": _digest(k.to_dict())}, {"scan": time.perf_counter() - t0}, EXIT_OK


def cmd_retract(args):
    k = resolve_complex(args.complex, args.skeleton)
    t0 = time.perf_counter()
    rep = check_retraction_properties(k, args.samples, args.seed)
    code = EXIT_OK if rep.passed else EXIT_INTEGRITY
    return rep.to_dict(), {"complex": _digest(k.to_dict())}, {"harness": time.perf_counter() - t0}, code


def cmd_corpus(args):
    entries = []
    for name in CORPUS:
        k = load_corpus(name)
        entries.append({
            "name": name, "f_vector": k.f_vector(), "euler_characteristic": euler_characteristic(k),
            "pseudomanifold": check_closed_pseudomanifold(k).passed, "model": model_for_complex(name),
        })
    return {"corpus": entries}, {}, {}, EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vkflores", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"vkflores {__version__}")
    p.add_argument("--memory-budget", type=float, default=None,
                   help=f"bytes allowed for packed matrices (env {gf2.MEMORY_BUDGET_ENV}; default 2 GiB)")
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    p.add_argument("--timings", action=argparse.BooleanOptionalAction, default=True,
                   help="include the timings section")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def complex_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("complex", help="corpus name, kind:param (simplex, boundary_simplex, cross) or JSON file")
        sp.add_argument("--skeleton", type=int, default=None, help="restrict to this skeleton first")
        sp.set_defaults(func=fn)
        return sp

    sp = complex_cmd("height", cmd_height, "Stiefel-Whitney height of the deleted product")
    sp.add_argument("--max-degree", type=int, default=None)

    sp = complex_cmd("delprod", cmd_delprod, "build and check the triangulated deleted product")
    sp.add_argument("--emit", default=None, metavar="FILE", help="write the quotient Delta-complex")
    sp.add_argument("--betti", action="store_true", help="also report mod-2 Betti numbers of the quotient")

    sp = sub.add_parser("wk", help="evaluate w^(k) in a cohomology model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_wk)

    sp = sub.add_parser("claims", help="list verdicts for a manifold model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--strict", action="store_true")
    sp.set_defaults(func=cmd_claims)

    sp = sub.add_parser("certify", help="certify h >= D + k on a triangulation")
    sp.add_argument("complex")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--model", default=None, help="cohomology model (defaults for corpus entries)")
    sp.add_argument("--max-degree", type=int, default=None)
    sp.add_argument("--strict", action="store_true")
    sp.set_defaults(func=cmd_certify)

    sp = complex_cmd("radon", cmd_radon, "search a PL map for a coincidence pair")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--map", default=None, help="PL map JSON file")
    src.add_argument("--random", type=int, default=None, metavar="SEED")
    sp.add_argument("--target", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--low", type=int, default=-100)
    sp.add_argument("--high", type=int, default=100)

    sp = complex_cmd("retract-check", cmd_retract, "sample the deformation retraction")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("corpus", help="built-in triangulations")
    sp.add_argument("action", choices=["list"])
    sp.set_defaults(func=cmd_corpus)
    return p


def _execute(argv: list[str]):
    report = {"schema": SCHEMA, "tool_version": __version__, "command": list(argv)}
    args = None
    try:
        args = build_parser().parse_args(argv)
        if args.memory_budget is not None:
            gf2.set_memory_budget(int(args.memory_budget))
        try:
            results, inputs, timings, code = args.func(args)
        finally:
            gf2.set_memory_budget(None)
        report.update(inputs=inputs, results=results, status="ok" if code == EXIT_OK else "hypothesis-not-satisfied")
        if args.timings:
            report["timings"] = timings
        return code, report, args
    except UsageError as exc:
        report.update(status="usage-error", error=str(exc))
        return EXIT_USAGE, report, args
    except (IntegrityError, ResourceError) as exc:
        report.update(status="integrity-error" if isinstance(exc, IntegrityError) else "resource-error",
                      error=str(exc))
        if isinstance(exc, ResourceError) and exc.degree is not None:
            report["failing_degree"] = exc.degree
        return EXIT_INTEGRITY, report, args


def run(argv: list[str]) -> tuple[int, dict]:
    """Execute a command; returns the exit code and the report."""
    code, report, _ = _execute(argv)
    return code, report


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if "-v" in argv or "--verbose" in argv:
        logging.basicConfig(level=logging.INFO)
    code, report, args = _execute(argv)
    text = render(report)
    if args is not None and args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
