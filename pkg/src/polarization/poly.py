"""Sparse multivariate polynomials in named commuting indeterminates.

Terms are stored as ``{exponent tuple: coefficient}`` aligned with an ordered
tuple of generator names.  Generators are kept in natural order (``t2`` before
``t10``), and terms print in graded lexicographic order.
"""
from __future__ import annotations

import re
from itertools import combinations
from math import factorial
from operator import add as _add
from typing import Mapping, Sequence

from .errors import DimensionMismatch, FieldMismatch
from .scalar import QQ, Field, field_of, scalar_from_json, scalar_to_json

_NAME_RE = re.compile(r"^(.*?)(\d*)$")


def natural_key(name: str):
    prefix, digits = _NAME_RE.match(name).groups()
    return (prefix, int(digits) if digits else -1, name)


def _coerce_field(c, field: Field):
    return field(c)


class Polynomial:
    __slots__ = ("gens", "terms", "field")

    def __init__(self, terms: Mapping[tuple, object] | None = None,
                 gens: Sequence[str] = (), field: Field = QQ):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        if list(gens) != sorted(gens, key=natural_key):
            order = sorted(range(len(gens)), key=lambda i: natural_key(gens[i]))
            gens = tuple(gens[i] for i in order)
            terms = {tuple(e[i] for i in order): c for e, c in (terms or {}).items()}
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(gens):
                raise DimensionMismatch(f"exponent {exps} does not match gens {gens}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = field(c)
            if c != 0:
                clean[exps] = c
        self.gens = gens
        self.terms = clean
        self.field = field

    @classmethod
    def _raw(cls, terms: dict, gens: tuple, field: Field) -> "Polynomial":
        p = object.__new__(cls)
        p.gens, p.terms, p.field = gens, terms, field
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def var(cls, name: str, field: Field = QQ) -> "Polynomial":
        return cls._raw({(1,): field.one}, (name,), field)

    @classmethod
    def constant(cls, c, field: Field | None = None) -> "Polynomial":
        if field is None:
            field = QQ if isinstance(c, int) else field_of(c)
        c = field(c)
        return cls._raw({(): c} if c != 0 else {}, (), field)

    @classmethod
    def from_monomials(cls, items: Mapping[tuple, object] | Sequence, field: Field = QQ) -> "Polynomial":
        """Build from ``[(({"t1": 1, "t2": 2}), coeff), ...]`` style records."""
        pairs = items.items() if isinstance(items, Mapping) else items
        pairs = [(dict(m), c) for m, c in pairs]
        names = sorted({v for m, _ in pairs for v in m}, key=natural_key)
        index = {v: i for i, v in enumerate(names)}
        acc: dict = {}
        for m, c in pairs:
            e = [0] * len(names)
            for v, k in m.items():
                e[index[v]] += k
            e = tuple(e)
            acc[e] = acc.get(e, field.zero) + field(c)
        return cls(acc, names, field)

    # -- alignment ----------------------------------------------------------

    def with_gens(self, gens: Sequence[str]) -> "Polynomial":
        """Re-express over a superset of the current generators."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        pos = {g: i for i, g in enumerate(gens)}
        missing = [g for g in self.gens if g not in pos]
        if missing:
            raise ValueError(f"generators {missing} not in target {gens}")
        idx = [pos[g] for g in self.gens]
        terms = {}
        for exps, c in self.terms.items():
            e = [0] * len(gens)
            for i, k in zip(idx, exps):
                e[i] = k
            terms[tuple(e)] = c
        return Polynomial._raw(terms, gens, self.field)

    def _align(self, other: "Polynomial"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} and {other.field!r}")
        if self.gens == other.gens:
            return self, other
        gens = tuple(sorted(set(self.gens) | set(other.gens), key=natural_key))
        return self.with_gens(gens), other.with_gens(gens)

    def _promote(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.field(other), self.field)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        a, b = self._align(self._promote(other))
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial._raw(terms, a.gens, a.field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.gens, self.field)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if c == 0:
            return Polynomial._raw({}, self.gens, self.field)
        return Polynomial._raw({e: c * v for e, v in self.terms.items()}, self.gens, self.field)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        a, b = self._align(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(map(_add, e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        terms = {e: c for e, c in terms.items() if c != 0}
        return Polynomial._raw(terms, a.gens, a.field)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.field.one, self.field).with_gens(self.gens)
        # repeated multiplication beats squaring on the dense linear forms used here
        for _ in range(k):
            result = result * self
        return result

    # -- comparison ---------------------------------------------------------

    def named_terms(self) -> dict:
        """Terms keyed by sorted ``((name, exp), ...)`` with zero exponents dropped."""
        out = {}
        for e, c in self.terms.items():
            out[tuple((g, k) for g, k in zip(self.gens, e) if k)] = c
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self._promote(other)
            except (TypeError, FieldMismatch):
                return NotImplemented
        return self.field == other.field and self.named_terms() == other.named_terms()

    def __hash__(self):
        return hash(frozenset(self.named_terms().items()))

    def __bool__(self):
        return bool(self.terms)

    # -- queries ------------------------------------------------------------

    def coefficient(self, monomial: Mapping[str, int]):
        """Coefficient of the monomial ``{name: exponent}`` (zero when absent)."""
        if any(v not in self.gens for v, k in monomial.items() if k):
            return self.field.zero
        e = tuple(monomial.get(g, 0) for g in self.gens)
        return self.terms.get(e, self.field.zero)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, n: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if n is not None:
            return degs <= {n}
        return len(degs) <= 1

    def variables(self) -> tuple:
        used = [any(e[i] for e in self.terms) for i in range(len(self.gens))]
        return tuple(g for g, u in zip(self.gens, used) if u)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_term(self):
        return self.terms.get((0,) * len(self.gens), self.field.zero)

    def partial_derivative(self, var: str) -> "Polynomial":
        if var not in self.gens:
            return Polynomial._raw({}, self.gens, self.field)
        i = self.gens.index(var)
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            d = c * k
            if d != 0:
                terms[e[:i] + (k - 1,) + e[i + 1:]] = d
        return Polynomial._raw(terms, self.gens, self.field)

    def evaluate(self, values: Mapping[str, object] | Sequence):
        if not isinstance(values, Mapping):
            values = dict(zip(self.gens, values))
        vals = []
        for g in self.gens:
            if g in values:
                vals.append(self.field(values[g]))
            elif any(e[self.gens.index(g)] for e in self.terms):
                raise KeyError(f"no value for generator {g}")
            else:
                vals.append(self.field.zero)
        total = self.field.zero
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace generators by polynomials; unmapped generators stay."""
        powers: dict = {}

        def power(g, k):
            key = (g, k)
            if key not in powers:
                base = images[g] if g in images else Polynomial.var(g, self.field)
                powers[key] = base if k == 1 else power(g, k - 1) * base
            return powers[key]

        result = Polynomial._raw({}, (), self.field)
        for e, c in self.terms.items():
            term = Polynomial.constant(c, self.field)
            for g, k in zip(self.gens, e):
                if k:
                    term = term * power(g, k)
            result = result + term
        return result

    # -- formatting ---------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in graded lexicographic order (highest degree first)."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k)
            neg = self.field.characteristic == 0 and c < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"

    def to_json(self) -> list:
        return [
            {"exponents": {g: k for g, k in zip(self.gens, e) if k}, "coeff": scalar_to_json(c)}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, records: list, field: Field = QQ) -> "Polynomial":
        return cls.from_monomials(
            [(r["exponents"], scalar_from_json(r["coeff"], field)) for r in records], field
        )


def lemma_check(p: Polynomial) -> bool:
    """If P' is a constant c then c == P(1) - P(0); vacuously true otherwise."""
    used = p.variables()
    if len(used) > 1:
        raise ValueError(f"lemma_check needs a univariate polynomial, got {used}")
    if not used:
        return True  # P' = 0 = P(1) - P(0)
    t = used[0]
    dp = p.partial_derivative(t)
    if not dp.is_constant():
        return True
    c = dp.constant_term()
    return p.evaluate({t: 1}) - p.evaluate({t: 0}) == c


def nelson_identity_check(n: int, bound: int = 8) -> bool:
    """Expand sum_k (-1)^(n-k) sum_{|J|=k} (sum_{i in J} a_i)^n and compare with n! a1...an."""
    if not 1 <= n <= bound:
        raise ValueError(f"n must lie in [1, {bound}]")
    names = [f"a{i}" for i in range(1, n + 1)]
    a = [Polynomial.var(g) for g in names]
    total = Polynomial(gens=names)
    for k in range(1, n + 1):  # k = 0 contributes (empty sum)^n = 0
        sign = -1 if (n - k) % 2 else 1
        for J in combinations(range(n), k):
            s = sum((a[i] for i in J), Polynomial(gens=names))
            total = total + (s ** n).scale(sign)
    target = Polynomial.from_monomials([({g: 1 for g in names}, factorial(n))])
    return total == target
