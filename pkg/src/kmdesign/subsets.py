"""Bitmask mirror for point subsets.

Point p of {1,...,v} maps to bit (v - p), so point 1 owns the highest bit.
For equal-size subsets this makes integer comparison the reverse of
lexicographic order on the sorted point sequence: the lex-least member of an
orbit carries the largest mask, so "max over group images" finds the
canonical representative without sorting.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

import numpy as np

from .groups import PermutationGroup


def point_bits(v: int) -> list[int]:
    """bit value per point; index 0 unused."""
    return [0] + [1 << (v - p) for p in range(1, v + 1)]


def mask_of(points: Iterable[int], v: int) -> int:
    m = 0
    for p in points:
        if not 1 <= p <= v:
            raise ValueError(f"point {p} out of range 1..{v}")
        b = 1 << (v - p)
        if m & b:
            raise ValueError(f"point {p} repeated")
        m |= b
    return m


def points_of(mask: int, v: int) -> tuple[int, ...]:
    return tuple(p for p in range(1, v + 1) if mask & (1 << (v - p)))


@lru_cache(maxsize=16)
def element_bit_table(group: PermutationGroup) -> np.ndarray:
    """(|G|, v+1) uint64 array; entry [e, p] is the mask bit of e(p)."""
    v = group.degree
    imgs = np.array([e.images for e in group.elements], dtype=np.int64)
    bits = np.left_shift(np.uint64(1), (v - imgs).astype(np.uint64))
    table = np.zeros((len(group.elements), v + 1), dtype=np.uint64)
    table[:, 1:] = bits
    return table


def bit_rows(perms, v: int) -> np.ndarray:
    """Like element_bit_table but for an explicit list of permutations."""
    imgs = np.array([p.images for p in perms], dtype=np.int64)
    bits = np.left_shift(np.uint64(1), (v - imgs).astype(np.uint64))
    table = np.zeros((len(perms), v + 1), dtype=np.uint64)
    table[:, 1:] = bits
    return table
