"""int64 kernels for the Gray-code subset-sum engine over GF(p), p < 2**31.

Two interchangeable implementations: a numba ``@njit`` loop and a vectorised
numpy path.  Set ``POLARIZATION_DISABLE_NUMBA=1`` to force numpy; numpy is
also used when numba is not installed.
"""
from __future__ import annotations

import os

import numpy as np

MAX_KERNEL_MODULUS = 1 << 31

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False


def numba_enabled() -> bool:
    return HAS_NUMBA and os.environ.get("POLARIZATION_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def gray_polarize_numpy(coef, exps, xs, p):
    """sum_J (-1)^(n-|J|) u~(S_J) mod p with all 2**n subset sums at once."""
    n, d = xs.shape
    order = int(exps.sum(axis=1).max()) if len(coef) else 0
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n, dtype=np.int64)) & 1
    s = (bits @ xs) % p
    pw = np.empty((1 << n, d, order + 1), dtype=np.int64)
    pw[:, :, 0] = 1
    for e in range(1, order + 1):
        pw[:, :, e] = pw[:, :, e - 1] * s % p
    vals = np.zeros(1 << n, dtype=np.int64)
    for m in range(len(coef)):
        t = np.full(1 << n, coef[m], dtype=np.int64)
        for j in range(d):
            if exps[m, j]:
                t = t * pw[:, j, exps[m, j]] % p
        vals = (vals + t) % p
    odd = (n - bits.sum(axis=1)) & 1
    return int((vals[odd == 0].sum() - vals[odd == 1].sum()) % p)


def _gray_polarize_loop(coef, exps, xs, p):
    n, d = xs.shape
    order = 0
    for m in range(coef.shape[0]):
        e = 0
        for j in range(d):
            e += exps[m, j]
        if e > order:
            order = e
    s = np.zeros(d, dtype=np.int64)
    pw = np.empty((d, order + 1), dtype=np.int64)
    total = 0
    gray = 0
    k = 0
    for i in range(1, 1 << n):
        bit = 0
        while not (i >> bit) & 1:
            bit += 1
        gray ^= 1 << bit
        if (gray >> bit) & 1:
            for j in range(d):
                s[j] = (s[j] + xs[bit, j]) % p
            k += 1
        else:
            for j in range(d):
                s[j] = (s[j] - xs[bit, j]) % p
            k -= 1
        for j in range(d):
            pw[j, 0] = 1
            for e in range(1, order + 1):
                pw[j, e] = pw[j, e - 1] * s[j] % p
        v = 0
        for m in range(coef.shape[0]):
            t = coef[m]
            for j in range(d):
                t = t * pw[j, exps[m, j]] % p
            v = (v + t) % p
        if (n - k) & 1:
            total = (total - v) % p
        else:
            total = (total + v) % p
    return total


if HAS_NUMBA:
    gray_polarize_numba = njit(cache=True)(_gray_polarize_loop)
else:  # pragma: no cover
    gray_polarize_numba = None


def gray_polarize(coef, exps, xs, p, backend: str | None = None) -> int:
    """Dispatch to the requested backend; ``None`` picks numba when enabled."""
    if p >= MAX_KERNEL_MODULUS:
        raise ValueError("kernel moduli must be below 2**31")
    if backend is None:
        backend = "numba" if numba_enabled() else "numpy"
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba is not installed")
        return int(gray_polarize_numba(coef, exps, xs, np.int64(p)))
    if backend == "numpy":
        return gray_polarize_numpy(coef, exps, xs, p)
    if backend == "python":
        return int(_gray_polarize_loop(coef, exps, xs, p))
    raise ValueError(f"unknown backend {backend!r}")
