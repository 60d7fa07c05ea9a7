"""Inclusion-exclusion on finite set systems and its match with the shift expansion."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Sequence

from .polarize import shift_expand

__all__ = [
    "SetSystem", "complement_intersection_count", "inclusion_exclusion",
    "indicator_sides", "verify_indicator_identity", "indicator_terms",
    "shift_terms_as_indicator_terms", "expansions_correspond",
]


@dataclass(frozen=True)
class SetSystem:
    """A universe of labels with subsets stored as membership bitsets.

    Bit ``e`` of ``subsets[i]`` is set when universe element ``e`` (by
    position in ``universe``) belongs to A_{i+1}.
    """

    universe: tuple
    subsets: tuple

    def __post_init__(self):
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("universe labels must be distinct")
        if not self.subsets:
            raise ValueError("a set system needs at least one subset")
        full = (1 << len(self.universe)) - 1
        for s in self.subsets:
            if s & ~full:
                raise ValueError("subset has members outside the universe")

    @classmethod
    def from_labels(cls, universe: Sequence[Hashable], subsets: Sequence[Sequence[Hashable]]) -> "SetSystem":
        ids = {x: i for i, x in enumerate(universe)}
        masks = []
        for s in subsets:
            m = 0
            for x in s:
                if x not in ids:
                    raise ValueError(f"{x!r} is not in the universe")
                m |= 1 << ids[x]
            masks.append(m)
        return cls(tuple(universe), tuple(masks))

    @property
    def n(self) -> int:
        return len(self.subsets)

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    def members(self, i: int) -> list:
        return [x for e, x in enumerate(self.universe) if self.subsets[i] >> e & 1]

    def to_json(self) -> dict:
        return {"universe": list(self.universe),
                "subsets": [self.members(i) for i in range(self.n)]}

    @classmethod
    def from_json(cls, obj: dict) -> "SetSystem":
        return cls.from_labels(obj["universe"], obj["subsets"])

    @classmethod
    def load(cls, path) -> "SetSystem":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def complement_intersection_count(s: SetSystem) -> int:
    """|A_1' n ... n A_n'| by scanning the universe."""
    count = 0
    for e in range(len(s.universe)):
        if not any(m >> e & 1 for m in s.subsets):
            count += 1
    return count


def inclusion_exclusion(s: SetSystem) -> int:
    """sum_{k=0}^n (-1)^k sum_{i1<...<ik} |A_i1 n ... n A_ik|, k = 0 giving |A|."""
    total = 0
    for k in range(s.n + 1):
        part = 0
        for I in combinations(range(s.n), k):
            inter = s.full
            for i in I:
                inter &= s.subsets[i]
            part += inter.bit_count()
        total += -part if k % 2 else part
    return total


def indicator_sides(s: SetSystem, e: int) -> tuple[int, int]:
    """Both sides of the indicator identity at universe element number ``e``.

    Left: prod_i (1 - chi_i(e)).  Right: signed sum of chi products over all
    index subsets.
    """
    chi = [m >> e & 1 for m in s.subsets]
    lhs = 1
    for c in chi:
        lhs *= 1 - c
    rhs = 0
    for k in range(s.n + 1):
        for I in combinations(range(s.n), k):
            p = 1
            for i in I:
                p *= chi[i]
            rhs += -p if k % 2 else p
    return lhs, rhs


def verify_indicator_identity(s: SetSystem) -> bool:
    return all(l == r for l, r in (indicator_sides(s, e) for e in range(len(s.universe))))


def indicator_terms(n: int) -> Counter:
    """Terms of prod_i (1 - chi_i) as a multiset of (index mask, sign (-1)^k)."""
    return Counter((I, -1 if I.bit_count() % 2 else 1) for I in range(1 << n))


def shift_terms_as_indicator_terms(n: int) -> Counter:
    """Map the shift expansion onto indicator terms.

    sigma -> chi, and each mask J goes to its complement: the sign
    (-1)^(n - |J|) of J is exactly (-1)^k for the complement of size k.
    """
    full = (1 << n) - 1
    return Counter((full ^ J, sign) for J, sign in shift_expand(n))


def expansions_correspond(n: int) -> bool:
    return shift_terms_as_indicator_terms(n) == indicator_terms(n)
