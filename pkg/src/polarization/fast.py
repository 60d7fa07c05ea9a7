"""Array-backed Gray-code polarization for tensors over small prime fields."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ._kernels import MAX_KERNEL_MODULUS, gray_polarize
from .errors import FieldMismatch
from .scalar import Mod
from .symtensor import SymMultiMap, _check_args, _exponents, multiplicity
from .vector import Vector


def tensor_arrays(u: SymMultiMap):
    """(weighted coefficients, exponent rows) of the diagonal form as int64 arrays."""
    p = u.field.characteristic
    if not 0 < p < MAX_KERNEL_MODULUS:
        raise FieldMismatch(f"array kernels need GF(p) with p < 2**31, got {u.field!r}")
    nz = u.nonzero()
    coef = np.array([int(c * multiplicity(m)) for m, c in nz], dtype=np.int64)
    exps = np.array([_exponents(m, u.dim) for m, _ in nz], dtype=np.int64).reshape(len(nz), u.dim)
    return coef, exps


def polarize_mod(u: SymMultiMap, xs: Sequence[Vector], backend: str | None = None) -> Mod:
    """n! u(x1, ..., xn) in GF(p) via the int64 Gray-code kernel."""
    _check_args(u.order, u.dim, u.field, xs)
    coef, exps = tensor_arrays(u)
    p = u.field.characteristic
    arr = np.array([[c.value for c in x.coords] for x in xs], dtype=np.int64)
    return Mod(gray_polarize(coef, exps, arr, p, backend), p)
