"""Polarization engines: recover n! u(x1, ..., xn) from the diagonal of u.

All engines return ``n! * u(x1, ..., xn)`` (the signed engine returns
``2**n * n! * u``) and are valid over any field; only :func:`recover`, which
divides by n!, needs the characteristic to be 0 or larger than n.

Subsets J of {1, ..., n} are int bitmasks with bit ``i - 1`` standing for x_i.
The empty subset contributes u~(0) = 0 when no offset is given, so the
subset engines skip it; with an offset x0 the term u~(x0) is kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import ArityMismatch, CharacteristicTwo, DimensionMismatch, FieldMismatch
from .poly import Polynomial
from .scalar import invert_factorial
from .symtensor import DiagonalFn, SymMultiMap, _check_args, to_polynomial
from .vector import Vector

__all__ = [
    "OpCounter", "subset_sum", "shift_expand", "gray_order", "polarize_operator",
    "polarize_subset_sum", "polarize_subset_sum_gray", "polarize_offset",
    "polarize_signed", "polarize_signed_via_offset", "recover", "expand_in_t",
    "coefficient_extraction", "difference_value", "constant_check", "METHODS",
]

METHODS = ("operator", "subset", "gray", "offset", "signed")


@dataclass
class OpCounter:
    """Work counters filled in by engines when passed as ``counter=``."""

    evaluations: int = 0
    vector_ops: int = 0


def _counted(diag, counter: OpCounter | None):
    if counter is None:
        return diag

    def call(x):
        counter.evaluations += 1
        return diag(x)

    return call


def _check(diag: DiagonalFn, xs: Sequence[Vector], *, arity: bool = True):
    if arity and len(xs) != diag.order:
        raise ArityMismatch(f"diagonal of order {diag.order} given {len(xs)} vectors")
    if not xs:
        raise ArityMismatch("at least one vector is required")
    for x in xs:
        if x.dim != diag.dim:
            raise DimensionMismatch(f"vector of dim {x.dim}, expected {diag.dim}")
        if x.field != diag.field:
            raise FieldMismatch(f"vector over {x.field!r}, diagonal over {diag.field!r}")


def subset_sum(xs: Sequence[Vector], mask: int) -> Vector:
    """S_J = sum of x_i over the bits of ``mask``; the zero vector for J empty."""
    if not xs:
        raise ArityMismatch("subset_sum needs at least one vector")
    dim, field = xs[0].dim, xs[0].field
    s = Vector.zero(dim, field)
    for i, x in enumerate(xs):
        if mask >> i & 1:
            s = s + x
    return s


def shift_expand(n: int) -> list[tuple[int, int]]:
    """Expansion of prod_i (sigma_{x_i} - I) as ``(mask, sign)`` pairs.

    Shifts compose additively, so each product of shifts over J collapses to
    the single shift by S_J with sign (-1)^(n - |J|).  Masks ascend.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return [(J, -1 if (n - J.bit_count()) % 2 else 1) for J in range(1 << n)]


def gray_order(n: int) -> list[int]:
    """All 2**n masks in binary-reflected Gray order, starting at 0."""
    return [i ^ (i >> 1) for i in range(1 << n)]


def polarize_operator(diag: DiagonalFn, xs: Sequence[Vector], *,
                      counter: OpCounter | None = None):
    """(Delta_{x_n} ... Delta_{x_1} u~)(0) by recursive differencing."""
    _check(diag, xs)
    f = _counted(diag, counter)
    return _difference(f, xs, len(xs), Vector.zero(diag.dim, diag.field), counter)


def _difference(f, xs, k, x, counter):
    # (Delta_{x_k} ... Delta_{x_1} f)(x)
    if k == 0:
        return f(x)
    if counter is not None:
        counter.vector_ops += 1
    return _difference(f, xs, k - 1, x + xs[k - 1], counter) - _difference(f, xs, k - 1, x, counter)


def difference_value(diag: DiagonalFn, xs: Sequence[Vector], at: Vector):
    """(Delta_{x_k} ... Delta_{x_1} u~)(at) for any number k of differences."""
    _check(diag, xs, arity=False)
    _check(diag, [at], arity=False)
    return _difference(diag, xs, len(xs), at, None)


def polarize_subset_sum(diag: DiagonalFn, xs: Sequence[Vector], x0: Vector | None = None, *,
                        counter: OpCounter | None = None):
    """sum_k (-1)^(n-k) sum_{|J|=k} u~(x0 + S_J), grouped by k.

    Each S_J is rebuilt from scratch (k additions), the naive enumeration.
    """
    _check(diag, xs)
    n = len(xs)
    f = _counted(diag, counter)
    field = diag.field
    total = field.zero
    if x0 is not None:
        _check(diag, [x0], arity=False)
        base = x0
        k_min = 0
    else:
        base = Vector.zero(diag.dim, field)
        k_min = 1
    for k in range(k_min, n + 1):
        part = field.zero
        for J in combinations(range(n), k):
            s = base
            for i in J:
                s = s + xs[i]
            if counter is not None:
                counter.vector_ops += k
            part = part + f(s)
        total = total - part if (n - k) % 2 else total + part
    return total


def polarize_subset_sum_gray(diag: DiagonalFn, xs: Sequence[Vector], x0: Vector | None = None, *,
                             counter: OpCounter | None = None):
    """Same sum as :func:`polarize_subset_sum`, visiting J in Gray-code order.

    Consecutive masks differ in one bit, so each S_J costs a single vector
    addition or subtraction: 2**n - 1 updates in total.
    """
    _check(diag, xs)
    n = len(xs)
    f = _counted(diag, counter)
    field = diag.field
    if x0 is not None:
        _check(diag, [x0], arity=False)
        s = x0
        total = f(x0)
        total = -total if n % 2 else total
    else:
        s = Vector.zero(diag.dim, field)
        total = field.zero
    gray = 0
    k = 0
    for i in range(1, 1 << n):
        bit = (i & -i).bit_length() - 1
        gray ^= 1 << bit
        if gray >> bit & 1:
            s = s + xs[bit]
            k += 1
        else:
            s = s - xs[bit]
            k -= 1
        v = f(s)
        total = total - v if (n - k) % 2 else total + v
    if counter is not None:
        counter.vector_ops += (1 << n) - 1
    return total


def polarize_offset(diag: DiagonalFn, xs: Sequence[Vector], x0: Vector, *,
                    counter: OpCounter | None = None):
    """sum_{k=0}^n (-1)^(n-k) sum_{|J|=k} u~(x0 + S_J); independent of x0."""
    return polarize_subset_sum(diag, xs, x0, counter=counter)


def _require_odd_characteristic(field):
    if field.characteristic == 2:
        raise CharacteristicTwo("the signed identity is undefined in characteristic 2")


def polarize_signed(diag: DiagonalFn, xs: Sequence[Vector], *,
                    counter: OpCounter | None = None):
    """sum over eps in {0,1}^n of (-1)^|eps| u~(sum_i (-1)^eps_i x_i) = 2^n n! u."""
    _check(diag, xs)
    _require_odd_characteristic(diag.field)
    n = len(xs)
    f = _counted(diag, counter)
    total = diag.field.zero
    for eps in range(1 << n):
        arg = -xs[0] if eps & 1 else xs[0]
        for i in range(1, n):
            arg = arg - xs[i] if eps >> i & 1 else arg + xs[i]
        if counter is not None:
            counter.vector_ops += n - 1
        v = f(arg)
        total = total - v if eps.bit_count() % 2 else total + v
    return total


def polarize_signed_via_offset(diag: DiagonalFn, xs: Sequence[Vector]):
    """2^n times the offset engine at x0 = -(x1 + ... + xn)/2.

    Homogeneity turns u~((eps - 1/2) . x) into 2^-n u~(+-x1 +- ... +- xn),
    so this must agree with :func:`polarize_signed`.
    """
    _check(diag, xs)
    _require_odd_characteristic(diag.field)
    field = diag.field
    half = field(2).inverse() if field.characteristic else field(1) / 2
    x0 = subset_sum(xs, (1 << len(xs)) - 1).scale(-half)
    return field(2 ** len(xs)) * polarize_offset(diag, xs, x0)


def recover(diag: DiagonalFn, xs: Sequence[Vector], method: str = "subset",
            x0: Vector | None = None):
    """u(x1, ..., xn) from its diagonal, dividing the chosen engine by n!.

    ``method`` is one of ``operator``, ``subset``, ``gray``, ``offset`` (needs
    ``x0``, defaulting to the origin) or ``signed`` (also divides by 2**n).
    """
    _check(diag, xs)
    n = len(xs)
    field = diag.field
    inv = invert_factorial(n, field)
    if method == "operator":
        value = polarize_operator(diag, xs)
    elif method == "subset":
        value = polarize_subset_sum(diag, xs)
    elif method == "gray":
        value = polarize_subset_sum_gray(diag, xs)
    elif method == "offset":
        value = polarize_offset(diag, xs, x0 if x0 is not None else Vector.zero(diag.dim, field))
    elif method == "signed":
        _require_odd_characteristic(field)
        value = polarize_signed(diag, xs) * field(2 ** n).inverse() if field.characteristic \
            else polarize_signed(diag, xs) / 2 ** n
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return value * inv


def t_gens(n: int) -> tuple:
    return tuple(f"t{i}" for i in range(1, n + 1))


def expand_in_t(u: SymMultiMap, xs: Sequence[Vector]) -> Polynomial:
    """u~(t1 x1 + ... + tn xn) as a polynomial in t1..tn."""
    _check_args(u.order, u.dim, u.field, xs)
    ts = [Polynomial.var(t, u.field) for t in t_gens(len(xs))]
    images = {}
    for j in range(u.dim):
        lin = Polynomial(gens=t_gens(len(xs)), field=u.field)
        for i, x in enumerate(xs):
            lin = lin + ts[i].scale(x.coords[j])
        images[f"X{j}"] = lin
    return to_polynomial(u).substitute(images)


def coefficient_extraction(u: SymMultiMap, xs: Sequence[Vector]):
    """Coefficient of t1 t2 ... tn in u~(t1 x1 + ... + tn xn), i.e. n! u(x1..xn)."""
    p = expand_in_t(u, xs)
    return p.coefficient({t: 1 for t in t_gens(len(xs))})


def constant_check(diag: DiagonalFn, xs: Sequence[Vector], probes: Sequence[Vector]) -> bool:
    """True iff Delta_{x_k}..Delta_{x_1} u~ takes one value at 0 and every probe."""
    _check(diag, xs, arity=False)
    origin = Vector.zero(diag.dim, diag.field)
    ref = difference_value(diag, xs, origin)
    return all(difference_value(diag, xs, p) == ref for p in probes)
