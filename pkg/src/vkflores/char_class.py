"""Mod-2 characteristic-class calculus.

``a_polynomial(i, k, d)`` builds the weighted-homogeneous polynomials
``a_i^(k)`` in ``Z2[x_1..x_d]`` (``x_i`` has weight ``i``) from

    a_i^(0) = x_i,    a_i^(k) = x_i * a_1^(k-1) + a_{i+1}^(k-1),  a_{d+1} = 0.

They are the coefficients of ``s^(d+k)`` once ``s^d`` is rewritten as
``x_1 s^(d-1) + ... + x_d``; ``sphere_reduce_power`` computes the same
coefficients by polynomial long division, independently of the recursion.

Cohomology rings are modelled by :class:`GradedAlgebra`: a finite basis with
degrees, a unit, and a multiplication table.  Elements are bitmasks over the
basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iproduct
from pathlib import Path

from .errors import UsageError

Monomial = tuple[int, ...]


# ----------------------------------------------------------------------------
# polynomials over GF(2)


class PolyZ2:
    """Polynomial over GF(2) as a set of exponent vectors."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=()):
        self.nvars = nvars
        acc: set[Monomial] = set()
        for t in terms:
            t = tuple(t)
            if len(t) != nvars:
                raise UsageError("monomial length does not match variable count")
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def var(cls, i: int, nvars: int) -> PolyZ2:
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise UsageError(f"variable x_{i} outside x_1..x_{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(nvars, [tuple(e)])

    @classmethod
    def one(cls, nvars: int) -> PolyZ2:
        return cls(nvars, [(0,) * nvars])

    @classmethod
    def zero(cls, nvars: int) -> PolyZ2:
        return cls(nvars)

    def __add__(self, other: PolyZ2) -> PolyZ2:
        p = PolyZ2(self.nvars)
        p.terms = self.terms ^ other.terms
        return p

    def __mul__(self, other: PolyZ2) -> PolyZ2:
        acc: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        p = PolyZ2(self.nvars)
        p.terms = frozenset(acc)
        return p

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyZ2):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def weighted_degrees(self) -> set[int]:
        return {sum((i + 1) * e for i, e in enumerate(t)) for t in self.terms}

    def evaluate(self, values, one, zero):
        """Substitute ``values[i-1]`` for ``x_i`` in any commutative ring."""
        total = zero
        for t in sorted(self.terms):
            term = one
            for i, e in enumerate(t):
                for _ in range(e):
                    term = term * values[i]
            total = total + term
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda m: (-sum(m), [-e for e in m])):
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(t) if e]
            parts.append("*".join(factors) or "1")
        return " + ".join(parts)


def a_polynomial(i: int, k: int, d: int) -> PolyZ2:
    """``a_i^(k)`` in ``Z2[x_1..x_d]``."""
    if d < 1 or not 1 <= i <= d or not 0 <= k <= d - 1:
        raise UsageError(f"a_polynomial needs 1 <= i <= d and 0 <= k <= d-1 (got i={i}, k={k}, d={d})")
    return _a_level(k, d)[i - 1]


_A_CACHE: dict[tuple[int, int], list[PolyZ2]] = {}


def _a_level(k: int, d: int) -> list[PolyZ2]:
    key = (k, d)
    if key not in _A_CACHE:
        if k == 0:
            _A_CACHE[key] = [PolyZ2.var(i, d) for i in range(1, d + 1)]
        else:
            prev = _a_level(k - 1, d) + [PolyZ2.zero(d)]
            _A_CACHE[key] = [PolyZ2.var(i, d) * prev[0] + prev[i] for i in range(1, d + 1)]
    return _A_CACHE[key]


def sphere_reduce_power(d: int, k: int) -> list[PolyZ2]:
    """Coefficients of ``s^(d-1), ..., s^0`` in ``s^(d+k)`` reduced modulo
    ``s^d + x_1 s^(d-1) + ... + x_d``.

    Computed by long division of the monomial ``s^(d+k)`` by the monic relation.
    """
    if d < 1 or not 0 <= k <= d - 1:
        raise UsageError(f"sphere_reduce_power needs 0 <= k <= d-1 (got k={k}, d={d})")
    zero = PolyZ2.zero(d)
    # coeffs[j] is the coefficient of s^j
    coeffs = [zero] * (d + k) + [PolyZ2.one(d)]
    relation = [PolyZ2.var(d - j, d) for j in range(d)] + [PolyZ2.one(d)]
    for top in range(d + k, d - 1, -1):
        lead = coeffs[top]
        if lead.is_zero():
            continue
        shift = top - d
        for j, r in enumerate(relation):
            coeffs[shift + j] = coeffs[shift + j] + lead * r
    return [coeffs[j] for j in range(d - 1, -1, -1)]


# ----------------------------------------------------------------------------
# graded algebras


class GradedAlgebra:
    """Finite graded commutative algebra over GF(2).

    ``degrees[b]`` is the degree of basis element ``b``; basis element 0 is
    the unit.  ``table[(a, b)]`` is the product of basis elements as a
    bitmask; missing entries are zero.  ``names`` label basis elements.
    """

    def __init__(self, degrees, table, names=None, top=None):
        self.degrees = tuple(int(g) for g in degrees)
        if not self.degrees or self.degrees[0] != 0:
            raise UsageError("basis element 0 must be the unit in degree 0")
        self.top = max(self.degrees) if top is None else int(top)
        self.names = tuple(names) if names else tuple(f"b{j}" for j in range(len(self.degrees)))
        # (left, right) basis indices when built as a tensor product
        self.tensor_pairs = None
        n = len(self.degrees)
        self._table = {}
        for (a, b), mask in table.items():
            if not (0 <= a < n and 0 <= b < n):
                raise UsageError("multiplication table index out of range")
            mask = int(mask)
            for c in _bits(mask):
                if self.degrees[c] != self.degrees[a] + self.degrees[b]:
                    raise UsageError(f"product {self.names[a]}*{self.names[b]} breaks the grading")
            self._table[(a, b)] = mask
            self._table.setdefault((b, a), mask)
        for b in range(n):
            self._table[(0, b)] = self._table[(b, 0)] = 1 << b

    @property
    def size(self) -> int:
        return len(self.degrees)

    def basis_in_degree(self, g: int) -> list[int]:
        return [b for b, h in enumerate(self.degrees) if h == g]

    def mul_basis(self, a: int, b: int) -> int:
        return self._table.get((a, b), 0)

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, 1)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, 0)

    def basis(self, b: int) -> AlgebraElement:
        return AlgebraElement(self, 1 << b)

    def element(self, names) -> AlgebraElement:
        """Sum of the named basis elements."""
        mask = 0
        for nm in names:
            try:
                mask ^= 1 << self.names.index(nm)
            except ValueError:
                raise UsageError(f"no basis element named {nm!r}") from None
        return AlgebraElement(self, mask)

    def check_associative(self) -> bool:
        n = self.size
        for a, b, c in iproduct(range(n), repeat=3):
            if (self.basis(a) * self.basis(b)) * self.basis(c) != self.basis(a) * (self.basis(b) * self.basis(c)):
                return False
        return True


def _bits(mask: int):
    j = 0
    while mask:
        if mask & 1:
            yield j
        mask >>= 1
        j += 1


class AlgebraElement:
    __slots__ = ("algebra", "mask")

    def __init__(self, algebra: GradedAlgebra, mask: int):
        self.algebra = algebra
        self.mask = mask

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.mask ^ other.mask)

    def __mul__(self, other: AlgebraElement) -> AlgebraElement:
        alg = self.algebra
        acc = 0
        for a in _bits(self.mask):
            for b in _bits(other.mask):
                acc ^= alg.mul_basis(a, b)
        return AlgebraElement(alg, acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def is_zero(self) -> bool:
        return self.mask == 0

    def component(self, g: int) -> AlgebraElement:
        keep = sum(1 << b for b in self.algebra.basis_in_degree(g))
        return AlgebraElement(self.algebra, self.mask & keep)

    def degrees(self) -> set[int]:
        return {self.algebra.degrees[b] for b in _bits(self.mask)}

    def coordinates(self, g: int) -> list[int]:
        return [(self.mask >> b) & 1 for b in self.algebra.basis_in_degree(g)]

    def __repr__(self) -> str:
        if not self.mask:
            return "0"
        order = sorted(_bits(self.mask), key=lambda b: (self.algebra.degrees[b], b))
        return " + ".join(self.algebra.names[b] for b in order)


def total_class(model: GradedAlgebra, w: list[AlgebraElement]) -> AlgebraElement:
    total = model.one()
    for wi in w:
        total = total + wi
    return total


def _check_w(model: GradedAlgebra, w: list[AlgebraElement]) -> None:
    for i, wi in enumerate(w, start=1):
        if wi.algebra is not model:
            raise UsageError(f"w_{i} belongs to a different algebra")
        if wi.degrees() - {i}:
            raise UsageError(f"w_{i} has components outside degree {i}")


@dataclass
class WkResult:
    k: int
    classes: list[AlgebraElement]   # w_i^(k) = a_i^(k)(w), i = 1..d
    total: AlgebraElement
    nontrivial: bool

    def by_degree(self, j: int) -> AlgebraElement:
        """Degree-``j`` part of ``w^(k)``: ``a_{j-k}^(k)(w)`` for ``k < j <= d+k``."""
        return self.total.component(j)


def wk_classes(model: GradedAlgebra, w: list[AlgebraElement], k: int) -> WkResult:
    """Evaluate every ``a_i^(k)`` at ``(w_1, ..., w_d)`` inside ``model``."""
    d = len(w)
    _check_w(model, w)
    if d < 1 or not 0 <= k <= d - 1:
        raise UsageError(f"level k={k} outside 0..{d - 1}")
    classes = [a_polynomial(i, k, d).evaluate(w, model.one(), model.zero()) for i in range(1, d + 1)]
    total = model.one()
    for c in classes:
        total = total + c
    return WkResult(k, classes, total, any(not c.is_zero() for c in classes))


def symbolic_sphere_height(model: GradedAlgebra, w: list[AlgebraElement]) -> int:
    """Largest ``n`` with ``s^n != 0`` in ``H*(M){1, s, ..., s^(d-1)}`` where
    ``s^d = w_1 s^(d-1) + ... + w_d``.

    Iterates multiplication by ``s`` until the coefficient vector vanishes or
    the exponent reaches ``d + top``.
    """
    d = len(w)
    _check_w(model, w)
    if d < 1:
        raise UsageError("need at least one Stiefel-Whitney class")
    # vec[j] is the coefficient of s^(d-1-j); start at s^(d-1)
    vec = [model.one()] + [model.zero()] * (d - 1)
    n = d - 1
    cap = d + model.top
    while n < cap:
        lead = vec[0]
        nxt = [vec[j + 1] if j + 1 < d else model.zero() for j in range(d)]
        if not lead.is_zero():
            nxt = [nxt[j] + lead * w[j] for j in range(d)]
        if all(c.is_zero() for c in nxt):
            break
        vec = nxt
        n += 1
    return n


# ----------------------------------------------------------------------------
# built-in models


def _truncated(gen_degree: int, n: int, name: str) -> GradedAlgebra:
    """``Z2[g]/(g^(n+1))`` with ``deg g = gen_degree``."""
    degrees = [gen_degree * j for j in range(n + 1)]
    names = ["1"] + [name if j == 1 else f"{name}^{j}" for j in range(1, n + 1)]
    table = {(a, b): (1 << (a + b)) if a + b <= n else 0 for a in range(n + 1) for b in range(n + 1)}
    return GradedAlgebra(degrees, table, names)


def _binomial_total(alg: GradedAlgebra, gen: int, exponent: int) -> list[AlgebraElement]:
    """``(1 + g)^exponent`` split into degree components ``w_1..w_D``."""
    D = alg.top
    g = alg.basis(gen)
    total = alg.one()
    for _ in range(exponent):
        total = total * (alg.one() + g)
    return [total.component(i) for i in range(1, D + 1)]


def _tensor(m1: GradedAlgebra, m2: GradedAlgebra) -> tuple[GradedAlgebra, dict]:
    pairs = sorted(iproduct(range(m1.size), range(m2.size)),
                   key=lambda p: (m1.degrees[p[0]] + m2.degrees[p[1]], p))
    index = {p: j for j, p in enumerate(pairs)}
    degrees = [m1.degrees[a] + m2.degrees[b] for a, b in pairs]

    def nm(a, b):
        if a == 0 and b == 0:
            return "1"
        if b == 0:
            return m1.names[a]
        if a == 0:
            return m2.names[b]
        return f"{m1.names[a]}*{m2.names[b]}"

    names = [nm(a, b) for a, b in pairs]
    table = {}
    for (a, b), (c, e) in iproduct(pairs, repeat=2):
        left, right = m1.mul_basis(a, c), m2.mul_basis(b, e)
        mask = 0
        for x in _bits(left):
            for y in _bits(right):
                mask ^= 1 << index[(x, y)]
        table[(index[(a, b)], index[(c, e)])] = mask
    alg = GradedAlgebra(degrees, table, names)
    alg.tensor_pairs = pairs
    return alg, index


def _tensor_element(alg, index, e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
    mask = 0
    for x in _bits(e1.mask):
        for y in _bits(e2.mask):
            mask ^= 1 << index[(x, y)]
    return AlgebraElement(alg, mask)


def tensor_swap(model: GradedAlgebra, other: GradedAlgebra, element: AlgebraElement) -> AlgebraElement:
    """Carry an element of ``A (x) B`` to ``B (x) A`` along the factor swap."""
    if model.tensor_pairs is None or other.tensor_pairs is None:
        raise UsageError("tensor_swap needs two product models")
    target = {p: j for j, p in enumerate(other.tensor_pairs)}
    mask = 0
    for b in _bits(element.mask):
        x, y = model.tensor_pairs[b]
        mask ^= 1 << target[(y, x)]
    return AlgebraElement(other, mask)


def standard_model(kind: str, *params) -> tuple[GradedAlgebra, list[AlgebraElement]]:
    """Built-in cohomology rings with tangent Stiefel-Whitney classes.

    ``rp(n)``: ``w = (1+a)^(n+1)``; ``cp(n)``: ``w = (1+c)^(n+1)`` with ``deg c = 2``;
    ``sphere(n)``: ``w = 1``; ``product(m1, m2)`` with ``m1``, ``m2`` either
    ``(kind, params...)`` tuples or ``(algebra, w)`` pairs: tensor algebra and
    ``w = w(m1) * w(m2)``.
    """
    if kind == "rp":
        (n,) = _ints(params, 1, kind)
        alg = _truncated(1, n, "a")
        return alg, _binomial_total(alg, 1, n + 1)
    if kind == "cp":
        (n,) = _ints(params, 1, kind)
        alg = _truncated(2, n, "c")
        return alg, _binomial_total(alg, 1, n + 1)
    if kind == "sphere":
        (n,) = _ints(params, 1, kind)
        if n < 1:
            raise UsageError("sphere dimension must be >= 1")
        alg = GradedAlgebra([0, n], {(1, 1): 0}, ["1", "u"])
        return alg, [alg.zero() for _ in range(n)]
    if kind == "product":
        if len(params) != 2:
            raise UsageError("product takes two models")
        (a1, w1), (a2, w2) = (_as_model(p) for p in params)
        alg, index = _tensor(a1, a2)
        t1 = _tensor_element(alg, index, total_class(a1, w1), a2.one())
        t2 = _tensor_element(alg, index, a1.one(), total_class(a2, w2))
        total = t1 * t2
        return alg, [total.component(i) for i in range(1, alg.top + 1)]
    raise UsageError(f"unknown model kind {kind!r}")


def _ints(params, count, kind):
    if len(params) != count:
        raise UsageError(f"{kind} takes {count} integer parameter(s)")
    try:
        vals = tuple(int(p) for p in params)
    except (TypeError, ValueError):
        raise UsageError(f"{kind} parameters must be integers") from None
    if any(v < 0 for v in vals):
        raise UsageError(f"{kind} parameters must be non-negative")
    return vals


def _as_model(spec):
    if isinstance(spec, tuple) and len(spec) == 2 and isinstance(spec[0], GradedAlgebra):
        return spec
    if isinstance(spec, str):
        return parse_model_name(spec)
    return standard_model(spec[0], *spec[1:])


def parse_model_name(name: str) -> tuple[GradedAlgebra, list[AlgebraElement]]:
    """Parse names like ``rp5``, ``cp2``, ``s3``, ``sphere3`` or ``rp2xs1``."""
    name = name.strip().lower()
    if "x" in name:
        parts = name.split("x")
        model = parse_model_name(parts[0])
        for p in parts[1:]:
            model = standard_model("product", model, parse_model_name(p))
        return model
    for prefix, kind in (("rp", "rp"), ("cp", "cp"), ("sphere", "sphere"), ("s", "sphere")):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return standard_model(kind, int(name[len(prefix):]))
    raise UsageError(f"unknown model name {name!r}")


def generic_model(d: int) -> tuple[GradedAlgebra, list[AlgebraElement]]:
    """``Z2[x_1..x_d]`` truncated above weighted degree ``d``, with ``w_i = x_i``.

    Any identity among the ``w``'s that holds here holds in every model of a
    ``d``-manifold.
    """
    if d < 1:
        raise UsageError("d must be >= 1")
    monos: list[Monomial] = []

    def rec(i, remaining, cur):
        if i == d:
            monos.append(tuple(cur))
            return
        for e in range(remaining // (i + 1) + 1):
            rec(i + 1, remaining - e * (i + 1), cur + [e])

    rec(0, d, [])
    weight = lambda m: sum((i + 1) * e for i, e in enumerate(m))
    monos.sort(key=lambda m: (weight(m), [-e for e in m]))
    index = {m: j for j, m in enumerate(monos)}
    table = {}
    for a in monos:
        for b in monos:
            c = tuple(x + y for x, y in zip(a, b))
            table[(index[a], index[b])] = (1 << index[c]) if c in index else 0
    names = [repr(PolyZ2(d, [m])) for m in monos]
    alg = GradedAlgebra([weight(m) for m in monos], table, names, top=d)
    w = [alg.basis(index[tuple(1 if j == i else 0 for j in range(d))]) for i in range(d)]
    return alg, w


# ----------------------------------------------------------------------------
# model files


def read_model(path) -> tuple[GradedAlgebra, list[AlgebraElement]]:
    """Load a model document.

    Fields: ``basis`` (list of ``{"name", "degree"}``, unit first), ``products``
    (list of ``[left, right, [result names]]``), ``w`` (list of lists of names,
    one per ``w_i``, ``i = 1..D``), optional ``top``.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read model file {path}: {exc}") from exc
    return model_from_dict(doc)


def model_from_dict(doc: dict) -> tuple[GradedAlgebra, list[AlgebraElement]]:
    try:
        names = [b["name"] for b in doc["basis"]]
        degrees = [int(b["degree"]) for b in doc["basis"]]
        pos = {nm: j for j, nm in enumerate(names)}
        table = {}
        for left, right, result in doc.get("products", []):
            mask = 0
            for r in result:
                mask ^= 1 << pos[r]
            table[(pos[left], pos[right])] = mask
        alg = GradedAlgebra(degrees, table, names, top=doc.get("top"))
        w = [alg.element(ws) for ws in doc["w"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"malformed model document: {exc!r}") from exc
    if len(w) != alg.top:
        raise UsageError(f"model lists {len(w)} classes w_i but has top degree {alg.top}")
    _check_w(alg, w)
    return alg, w


def model_to_dict(model: GradedAlgebra, w: list[AlgebraElement]) -> dict:
    products = []
    for a in range(model.size):
        for b in range(a, model.size):
            mask = model.mul_basis(a, b)
            if a and mask:
                products.append([model.names[a], model.names[b], [model.names[c] for c in _bits(mask)]])
    return {
        "basis": [{"name": nm, "degree": g} for nm, g in zip(model.names, model.degrees)],
        "products": products,
        "top": model.top,
        "w": [[model.names[c] for c in _bits(wi.mask)] for wi in w],
    }
