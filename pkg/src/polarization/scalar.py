"""Exact scalar fields: the rationals (backed by ``gmpy2.mpq``) and GF(p).

Rational scalars are plain ``mpq`` values, which are always stored in lowest
terms with a positive denominator.  Prime-field scalars are :class:`Mod`
instances.  Floats are rejected everywhere in this module; the only float
code path in the package is the Monte Carlo estimator in :mod:`wick`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from gmpy2 import mpq

from .errors import CharacteristicDividesFactorial, FieldMismatch, InexactScalar

__all__ = [
    "QQ", "GF", "Field", "RationalField", "PrimeField", "Mod",
    "field_of", "characteristic", "add", "mul", "neg", "inverse",
    "invert_factorial", "is_prime", "scalar_to_json", "scalar_from_json",
]

MAX_MODULUS = 2**61 - 1
_MPQ = type(mpq(0))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """A field descriptor: knows its characteristic and how to build elements."""

    characteristic: int

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, value):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError


class RationalField(Field):
    characteristic = 0

    def __call__(self, value):
        if isinstance(value, _MPQ):
            return value
        if isinstance(value, bool):
            return mpq(int(value))
        if isinstance(value, (int, Fraction)):
            return mpq(value)
        if isinstance(value, str):
            return mpq(value.strip())
        if isinstance(value, float):
            raise InexactScalar(f"float {value!r} is not an exact rational")
        if isinstance(value, Mod):
            raise FieldMismatch(f"{value!r} is not a rational")
        # gmpy2.mpz and friends
        try:
            return mpq(value)
        except (TypeError, ValueError) as exc:
            raise TypeError(f"cannot convert {value!r} to a rational") from exc

    def contains(self, x) -> bool:
        return isinstance(x, _MPQ)

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_rational_field, ())


def _rational_field():
    return QQ


QQ = RationalField()


class PrimeField(Field):
    """GF(p) for a prime p <= 2**61 - 1."""

    def __init__(self, p: int):
        if not isinstance(p, int) or isinstance(p, bool):
            raise TypeError("modulus must be an int")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p > MAX_MODULUS:
            raise ValueError(f"modulus {p} exceeds 2**61 - 1")
        self.p = p
        self.characteristic = p

    def __call__(self, value):
        if isinstance(value, Mod):
            if value.p != self.p:
                raise FieldMismatch(f"GF({value.p}) element used as GF({self.p})")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return Mod(value, self.p)
        if isinstance(value, float):
            raise InexactScalar(f"float {value!r} is not an exact field element")
        if isinstance(value, (Fraction, _MPQ, str)):
            q = mpq(value) if not isinstance(value, str) else mpq(value.strip())
            num, den = int(q.numerator), int(q.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return Mod(num * pow(den, -1, self.p), self.p)
        raise TypeError(f"cannot convert {value!r} to GF({self.p})")

    def contains(self, x) -> bool:
        return isinstance(x, Mod) and x.p == self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


class Mod:
    """Residue class modulo a prime; immutable."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", value % p)

    def __setattr__(self, name, value):
        raise AttributeError("Mod is immutable")

    def __reduce__(self):
        return (Mod, (self.value, self.p))

    @property
    def field(self) -> PrimeField:
        return GF(self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldMismatch(f"GF({self.p}) and GF({other.p}) operands")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, float):
            raise InexactScalar("float operand in GF(p) arithmetic")
        raise FieldMismatch(f"cannot combine GF({self.p}) with {type(other).__name__}")

    def __add__(self, other):
        return Mod(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Mod(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Mod(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return Mod(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Mod":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return Mod(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * Mod(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return Mod(self._coerce(other), self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Mod({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def field_of(x) -> Field:
    """Return the field a scalar belongs to."""
    if isinstance(x, _MPQ):
        return QQ
    if isinstance(x, Mod):
        return GF(x.p)
    if isinstance(x, float):
        raise InexactScalar(f"float {x!r} has no exact field")
    raise TypeError(f"{x!r} is not a field element")


def characteristic(x) -> int:
    return field_of(x).characteristic


def _same_field(a, b) -> Field:
    fa, fb = field_of(a), field_of(b)
    if fa != fb:
        raise FieldMismatch(f"{fa!r} and {fb!r}")
    return fa


def add(a, b):
    _same_field(a, b)
    return a + b


def mul(a, b):
    _same_field(a, b)
    return a * b


def neg(a):
    field_of(a)
    return -a


def inverse(a):
    field_of(a)
    if isinstance(a, Mod):
        return a.inverse()
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return 1 / a


def invert_factorial(n: int, field: Field):
    """Return (n!)^-1 in ``field``.

    Raises CharacteristicDividesFactorial when 0 < char <= n, i.e. exactly
    when the characteristic divides n!.
    """
    if n < 1:
        raise ValueError("n must be positive")
    p = field.characteristic
    if 0 < p <= n:
        raise CharacteristicDividesFactorial(n, p)
    return inverse(field(factorial(n)))


def scalar_to_json(x):
    """``"p/q"`` (or ``"p"``) for rationals, ``{"mod": p, "val": v}`` for GF(p)."""
    if isinstance(x, Mod):
        return {"mod": x.p, "val": x.value}
    x = QQ(x)
    return str(x)


def scalar_from_json(obj, field: Field | None = None):
    if isinstance(obj, dict):
        value = GF(int(obj["mod"]))(int(obj["val"]))
        if field is not None and field != value.field:
            raise FieldMismatch(f"expected {field!r}, got GF({value.p})")
        return value
    if isinstance(obj, float):
        raise InexactScalar("floats are not accepted in JSON payloads; use \"p/q\"")
    if field is None:
        field = QQ
    return field(obj)
