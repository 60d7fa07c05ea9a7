"""Symmetric n-linear scalar-valued maps stored over sorted multi-indices.

A ``SymMultiMap`` of order n on K^d keeps one coefficient per sorted
multi-index ``m = (i1 <= ... <= in)``: the value ``u(e_i1, ..., e_in)``.
Every permutation of a basis tuple reads the same coefficient, so symmetry
holds by construction.
"""
from __future__ import annotations

from collections import Counter
from itertools import combinations_with_replacement
from math import factorial, prod
from typing import Callable, Mapping, Sequence

from .errors import (ArityMismatch, CharacteristicDividesFactorial, DimensionMismatch,
                     FieldMismatch, NotHomogeneous)
from .poly import Polynomial
from .rng import SplitMix64
from .scalar import GF, QQ, Field, scalar_from_json, scalar_to_json
from .vector import Vector

__all__ = [
    "multi_indices", "multiplicity", "distinct_permutations", "SymMultiMap",
    "DiagonalFn", "eval_direct", "diagonal", "to_polynomial", "from_polynomial",
    "random_symmetric", "tensor_to_json", "tensor_from_json", "field_to_json",
    "field_from_json",
]


def multi_indices(order: int, dim: int) -> list[tuple]:
    return list(combinations_with_replacement(range(dim), order))


def multiplicity(m: Sequence[int]) -> int:
    """Number of distinct permutations: n! / prod(m_j!)."""
    return factorial(len(m)) // prod(factorial(c) for c in Counter(m).values())


def distinct_permutations(m: Sequence[int]):
    """Yield each distinct permutation of a multiset once, in lexicographic order."""
    a = sorted(m)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def _exponents(m: Sequence[int], dim: int) -> tuple:
    e = [0] * dim
    for i in m:
        e[i] += 1
    return tuple(e)


def _check_index(m, order: int, dim: int) -> tuple:
    m = tuple(int(i) for i in m)
    if len(m) != order:
        raise ArityMismatch(f"multi-index {m} has length {len(m)}, expected {order}")
    if list(m) != sorted(m):
        raise ValueError(f"multi-index {m} is not sorted")
    if m and (m[0] < 0 or m[-1] >= dim):
        raise DimensionMismatch(f"multi-index {m} out of range for dim {dim}")
    return m


class SymMultiMap:
    """Symmetric n-linear map K^d x ... x K^d -> K."""

    __slots__ = ("order", "dim", "field", "coeffs")

    def __init__(self, order: int, dim: int, coeffs: Mapping[tuple, object] | None = None,
                 field: Field = QQ):
        if order < 1 or dim < 1:
            raise ValueError("order and dim must be >= 1")
        self.order = order
        self.dim = dim
        self.field = field
        dense = dict.fromkeys(multi_indices(order, dim), field.zero)
        for m, c in (coeffs or {}).items():
            dense[_check_index(m, order, dim)] = field(c)
        self.coeffs = dense

    def __getitem__(self, index) -> object:
        return self.coeffs[tuple(sorted(index))]

    def __call__(self, *args: Vector):
        return eval_direct(self, list(args))

    def __eq__(self, other):
        return (isinstance(other, SymMultiMap) and self.order == other.order
                and self.dim == other.dim and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.order, self.dim, tuple(self.coeffs.values())))

    def __repr__(self):
        nz = {m: str(c) for m, c in self.coeffs.items() if c != 0}
        return f"SymMultiMap(order={self.order}, dim={self.dim}, field={self.field!r}, {nz})"

    def nonzero(self):
        return [(m, c) for m, c in self.coeffs.items() if c != 0]


def _check_args(order: int, dim: int, field: Field, args: Sequence[Vector]):
    if len(args) != order:
        raise ArityMismatch(f"expected {order} arguments, got {len(args)}")
    for x in args:
        if x.dim != dim:
            raise DimensionMismatch(f"argument of dim {x.dim}, expected {dim}")
        if x.field != field:
            raise FieldMismatch(f"argument over {x.field!r}, map over {field!r}")


def eval_direct(u: SymMultiMap, args: Sequence[Vector]):
    """u(x1, ..., xn) = sum over all index tuples of u(e_i1..e_in) x1[i1] ... xn[in]."""
    _check_args(u.order, u.dim, u.field, args)
    coords = [x.coords for x in args]
    total = u.field.zero
    for m, c in u.coeffs.items():
        if c == 0:
            continue
        s = u.field.zero
        for perm in distinct_permutations(m):
            term = coords[0][perm[0]]
            for k in range(1, len(perm)):
                term = term * coords[k][perm[k]]
            s = s + term
        total = total + c * s
    return total


class DiagonalFn:
    """x -> u(x, ..., x), with declared order, dim and field.

    Any callable of one Vector can be wrapped, which lets the engines run on
    diagonals that do not come from a stored tensor.
    """

    __slots__ = ("fn", "order", "dim", "field")

    def __init__(self, fn: Callable[[Vector], object], order: int, dim: int, field: Field = QQ):
        self.fn = fn
        self.order = order
        self.dim = dim
        self.field = field

    def __call__(self, x: Vector):
        if x.dim != self.dim:
            raise DimensionMismatch(f"argument of dim {x.dim}, expected {self.dim}")
        if x.field != self.field:
            raise FieldMismatch(f"argument over {x.field!r}, diagonal over {self.field!r}")
        return self.fn(x)

    def __repr__(self):
        return f"DiagonalFn(order={self.order}, dim={self.dim}, field={self.field!r})"


def _homogeneous_evaluator(monomials: list, order: int, zero):
    """Evaluate sum c * prod x_j^e_j using a per-call power table."""

    def evaluate(x: Vector):
        pw = []
        for xj in x.coords:
            row = [None, xj]
            for _ in range(order - 1):
                row.append(row[-1] * xj)
            pw.append(row)
        total = zero
        for c, factors in monomials:
            term = c
            for j, k in factors:
                term = term * pw[j][k]
            total = total + term
        return total

    return evaluate


def diagonal(u: SymMultiMap) -> DiagonalFn:
    """The diagonal restriction x -> u(x, ..., x) as a homogeneous form."""
    monomials = []
    for m, c in u.nonzero():
        e = _exponents(m, u.dim)
        monomials.append((c * multiplicity(m), tuple((j, k) for j, k in enumerate(e) if k)))
    return DiagonalFn(_homogeneous_evaluator(monomials, u.order, u.field.zero),
                      u.order, u.dim, u.field)


def poly_gens(dim: int) -> tuple:
    return tuple(f"X{j}" for j in range(dim))


def to_polynomial(u: SymMultiMap) -> Polynomial:
    """Homogeneous degree-n form in X0..X{d-1} with p(x) = u(x, ..., x)."""
    terms = {_exponents(m, u.dim): c * multiplicity(m) for m, c in u.nonzero()}
    return Polynomial(terms, poly_gens(u.dim), u.field)


def from_polynomial(p: Polynomial, order: int | None = None, dim: int | None = None) -> SymMultiMap:
    """The unique symmetric map whose diagonal is the homogeneous form ``p``.

    ``p`` must be written in generators ``X0, X1, ...``; ``order`` and ``dim``
    are inferred when omitted (``order`` is required for the zero form).
    """
    index = {}
    for g in p.gens:
        if not (g.startswith("X") and g[1:].isdigit()):
            raise ValueError(f"generator {g!r} is not of the form X<j>")
        index[g] = int(g[1:])
    if dim is None:
        dim = max(index.values(), default=0) + 1
    if any(j >= dim for j in index.values()):
        raise DimensionMismatch(f"polynomial uses variables beyond dim {dim}")
    if order is None:
        order = p.degree()
        if order < 1:
            raise NotHomogeneous("cannot infer the order of a constant form")
    if not p.is_homogeneous(order):
        raise NotHomogeneous(f"polynomial is not homogeneous of degree {order}")
    field = p.field
    char = field.characteristic
    coeffs = {}
    for e, c in p.terms.items():
        m = []
        for g, k in zip(p.gens, e):
            m.extend([index[g]] * k)
        m = tuple(sorted(m))
        mult = multiplicity(m)
        if char and mult % char == 0:
            raise CharacteristicDividesFactorial(order, char)
        coeffs[m] = c * field(mult).inverse() if char else c / mult
    return SymMultiMap(order, dim, coeffs, field)


def random_symmetric(order: int, dim: int, field: Field = QQ, seed: int = 0, *,
                     bound: int = 9, density: float = 1.0) -> SymMultiMap:
    """Deterministic pseudo-random tensor from a splitmix64 stream.

    Multi-indices are visited in lexicographic order.  When ``density < 1``
    each index first draws a uniform float and is left zero unless it falls
    below ``density``; kept entries then draw a scalar (rationals p/q with
    |p| <= bound and 1 <= q <= bound, or a uniform residue in GF(p)).
    """
    rng = SplitMix64(seed)
    coeffs = {}
    for m in multi_indices(order, dim):
        if density < 1.0 and rng.unit() >= density:
            continue
        coeffs[m] = rng.scalar(field, bound)
    return SymMultiMap(order, dim, coeffs, field)


def field_to_json(field: Field):
    return "rational" if field.characteristic == 0 else {"gfp": field.characteristic}


def field_from_json(obj) -> Field:
    if obj == "rational":
        return QQ
    if isinstance(obj, dict) and "gfp" in obj:
        return GF(int(obj["gfp"]))
    raise ValueError(f"unknown field descriptor {obj!r}")


def tensor_to_json(u: SymMultiMap) -> dict:
    return {
        "order": u.order,
        "dim": u.dim,
        "field": field_to_json(u.field),
        "entries": [{"index": list(m), "value": scalar_to_json(c)} for m, c in u.nonzero()],
    }


def tensor_from_json(obj: dict) -> SymMultiMap:
    order, dim = int(obj["order"]), int(obj["dim"])
    field = field_from_json(obj.get("field", "rational"))
    coeffs = {}
    for entry in obj.get("entries", []):
        m = _check_index(entry["index"], order, dim)
        if m in coeffs:
            raise ValueError(f"duplicate multi-index {m}")
        coeffs[m] = scalar_from_json(entry["value"], field)
    return SymMultiMap(order, dim, coeffs, field)
