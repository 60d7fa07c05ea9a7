"""Coordinate vectors over an exact field."""
from __future__ import annotations

from fractions import Fraction
from operator import add as _add, mul as _mul, sub as _sub

from .errors import DimensionMismatch, FieldMismatch
from .scalar import QQ, Field, field_of, scalar_from_json, scalar_to_json


class Vector:
    """Immutable vector of ``dim`` scalars from one field."""

    __slots__ = ("coords", "field")

    def __init__(self, coords, field: Field | None = None):
        coords = tuple(coords)
        if not coords:
            raise DimensionMismatch("vectors must have dim >= 1")
        if field is None:
            first = coords[0]
            field = QQ if isinstance(first, (int, str, Fraction)) else field_of(first)
        self.coords = tuple(field(c) for c in coords)
        self.field = field

    @classmethod
    def _raw(cls, coords: tuple, field: Field) -> "Vector":
        v = object.__new__(cls)
        v.coords = coords
        v.field = field
        return v

    @classmethod
    def zero(cls, dim: int, field: Field = QQ) -> "Vector":
        return cls._raw((field.zero,) * dim, field)

    @classmethod
    def basis(cls, i: int, dim: int, field: Field = QQ) -> "Vector":
        return cls._raw(tuple(field.one if j == i else field.zero for j in range(dim)), field)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other: "Vector"):
        if not isinstance(other, Vector):
            raise TypeError(f"expected Vector, got {type(other).__name__}")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} and {other.field!r}")
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector._raw(tuple(map(_add, self.coords, other.coords)), self.field)

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector._raw(tuple(map(_sub, self.coords, other.coords)), self.field)

    def __neg__(self) -> "Vector":
        return Vector._raw(tuple(-c for c in self.coords), self.field)

    def scale(self, c) -> "Vector":
        c = self.field(c)
        return Vector._raw(tuple(c * x for x in self.coords), self.field)

    def __rmul__(self, c) -> "Vector":
        return self.scale(c)

    def dot(self, other: "Vector"):
        self._check(other)
        return sum(map(_mul, self.coords, other.coords), self.field.zero)

    def __eq__(self, other):
        return isinstance(other, Vector) and self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return f"Vector([{', '.join(str(c) for c in self.coords)}], {self.field!r})"

    def to_json(self) -> list:
        return [scalar_to_json(c) for c in self.coords]

    @classmethod
    def from_json(cls, obj, field: Field = QQ) -> "Vector":
        return cls([scalar_from_json(c, field) for c in obj], field)


def random_vector(rng, dim: int, field: Field = QQ, bound: int = 9) -> Vector:
    return Vector._raw(tuple(rng.scalar(field, bound) for _ in range(dim)), field)
