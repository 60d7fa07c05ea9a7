"""Gaussian product moments through pair partitions (Isserlis/Wick).

Everything here is exact over the rationals except
:func:`monte_carlo_estimate`, the one floating-point path in the package.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import prod, sqrt
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, NotPositiveSemidefinite, OddOrder
from .scalar import QQ, scalar_to_json
from .symtensor import multiplicity

__all__ = [
    "Covariance", "pair_partitions", "double_factorial", "isserlis",
    "gaussian_moment_single", "isserlis_diagonal_consistency", "determinant",
    "is_positive_semidefinite", "MonteCarloResult", "monte_carlo_estimate",
]

PairPartition = tuple  # tuple of sorted (a, b) pairs over positions 1..n


class Covariance:
    """Symmetric d x d matrix of exact rationals, entries[i][j] = E(x_i x_j)."""

    __slots__ = ("dim", "rows")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(QQ(c) for c in row) for row in rows)
        dim = len(rows)
        if dim == 0 or any(len(r) != dim for r in rows):
            raise ValueError("covariance must be a non-empty square matrix")
        for i in range(dim):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"covariance is not symmetric at ({i}, {j})")
        self.dim = dim
        self.rows = rows

    @classmethod
    def identity(cls, dim: int) -> "Covariance":
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def quadratic(self, w: Sequence) -> object:
        """w^T C w."""
        w = [QQ(c) for c in w]
        return sum((w[i] * self.rows[i][j] * w[j] for i in range(self.dim) for j in range(self.dim)),
                   QQ(0))

    def to_json(self) -> dict:
        return {"dim": self.dim, "rows": [[scalar_to_json(c) for c in row] for row in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "Covariance":
        cov = cls(obj["rows"])
        if "dim" in obj and int(obj["dim"]) != cov.dim:
            raise ValueError(f"declared dim {obj['dim']} but {cov.dim} rows")
        return cov

    @classmethod
    def load(cls, path) -> "Covariance":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __eq__(self, other):
        return isinstance(other, Covariance) and self.rows == other.rows

    def __repr__(self):
        return f"Covariance({[[str(c) for c in r] for r in self.rows]})"


def double_factorial(k: int) -> int:
    """k!! with (-1)!! = 0!! = 1."""
    return prod(range(k, 0, -2)) if k > 0 else 1


def _matchings(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for j, partner in enumerate(rest):
        remaining = rest[:j] + rest[j + 1:]
        for tail in _matchings(remaining):
            yield ((first, partner),) + tail


def pair_partitions(n: int, bound: int = 12) -> list[PairPartition]:
    """All perfect matchings of {1..n}; the smallest free element is paired first."""
    if n < 0 or n % 2:
        raise OddOrder(f"no pair partitions of a {n}-element set")
    if n > bound:
        raise ValueError(f"n = {n} exceeds the configured bound {bound}")
    return list(_matchings(tuple(range(1, n + 1))))


def isserlis(cov: Covariance, idx: Sequence[int], bound: int = 12):
    """E(x_idx[0] ... x_idx[n-1]) for a centered Gaussian vector with covariance ``cov``."""
    idx = tuple(idx)
    for i in idx:
        if not 0 <= i < cov.dim:
            raise IndexOutOfRange(f"variable index {i} outside [0, {cov.dim})")
    n = len(idx)
    if n % 2:
        return QQ(0)
    total = QQ(0)
    rows = cov.rows
    for pp in pair_partitions(n, bound):
        term = QQ(1)
        for a, b in pp:
            term *= rows[idx[a - 1]][idx[b - 1]]
            if term == 0:
                break
        total += term
    return total


def gaussian_moment_single(n: int):
    """E(x^n) for a standard normal x: (n-1)(n-3)...1 for even n, 0 for odd n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 2:
        return QQ(0)
    value = double_factorial(n - 1)
    if n <= 12:
        assert value == len(pair_partitions(n))
    return QQ(value)


def isserlis_diagonal_consistency(cov: Covariance, weights: Sequence, n: int) -> bool:
    """Compare E(y^n), y = sum w_i x_i, computed two ways.

    (a) y is Gaussian with variance w^T C w, so E(y^n) = (n-1)!! Var(y)^(n/2);
    (b) expand y^n multilinearly and apply :func:`isserlis` to each index
        multiset, weighted by its number of orderings.
    """
    if n % 2:
        raise OddOrder("consistency check needs even n")
    w = [QQ(c) for c in weights]
    if len(w) != cov.dim:
        raise IndexOutOfRange(f"{len(w)} weights for dim {cov.dim}")
    var = cov.quadratic(w)
    direct = double_factorial(n - 1) * var ** (n // 2)
    expanded = QQ(0)
    for m in combinations_with_replacement(range(cov.dim), n):
        coeff = prod((w[i] for i in m), start=QQ(1))
        if coeff == 0:
            continue
        expanded += multiplicity(m) * coeff * isserlis(cov, m)
    return direct == expanded


def determinant(rows: Sequence[Sequence]):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[QQ(c) for c in r] for r in rows]
    n = len(a)
    if n == 0:
        return QQ(1)
    sign, prev = 1, QQ(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return QQ(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_positive_semidefinite(cov: Covariance) -> bool:
    """Exact test: every principal minor is >= 0.

    Leading minors alone do not decide semidefiniteness (diag(0, -1) has
    leading minors 0 and 0), so all 2^d - 1 principal minors are checked.
    """
    d = cov.dim
    for k in range(1, d + 1):
        for S in combinations(range(d), k):
            if determinant([[cov.rows[i][j] for j in S] for i in S]) < 0:
                return False
    return True


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    stderr: float
    samples: int
    seed: int

    def zscore(self, exact) -> float:
        diff = abs(float(exact) - self.mean)
        if self.stderr == 0:
            return 0.0 if diff == 0 else float("inf")
        return diff / self.stderr


def _float_sqrt_factor(cov: Covariance) -> np.ndarray:
    c = np.array([[float(v) for v in row] for row in cov.rows])
    vals, vecs = np.linalg.eigh(c)
    return vecs * np.sqrt(np.clip(vals, 0.0, None))


def monte_carlo_estimate(cov: Covariance, idx: Sequence[int], samples: int = 10**6,
                         seed: int = 0, *, chunk: int = 1 << 17) -> MonteCarloResult:
    """Sample mean and standard error of prod_k x_idx[k] under N(0, cov).

    Samples are drawn as L z with L L^T = cov (symmetric square root in
    floating point) in fixed-size chunks from one seeded generator, so the
    result is reproducible for a given seed.
    """
    if samples < 1000:
        raise ValueError("at least 1000 samples are required")
    idx = list(idx)
    for i in idx:
        if not 0 <= i < cov.dim:
            raise IndexOutOfRange(f"variable index {i} outside [0, {cov.dim})")
    if not is_positive_semidefinite(cov):
        raise NotPositiveSemidefinite("covariance has a negative principal minor")
    factor = _float_sqrt_factor(cov)
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    left = samples
    while left:
        m = min(chunk, left)
        z = rng.standard_normal((m, cov.dim))
        x = z @ factor.T
        prods = np.prod(x[:, idx], axis=1) if idx else np.ones(m)
        total += float(prods.sum())
        total_sq += float(np.dot(prods, prods))
        left -= m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return MonteCarloResult(mean, sqrt(var / samples), samples, seed)
