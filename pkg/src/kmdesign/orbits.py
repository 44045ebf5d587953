"""G-orbits of k-element subsets.

Two enumerators: `enumerate_orbits` walks every k-subset in lexicographic
order and keeps the ones that are lex-minimal in their orbit (memory stays
proportional to the number of orbits), and `enumerate_short_orbits` finds
exactly the orbits of size <= bound without touching the full subset space,
by harvesting subsets invariant under prime-order group elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from .errors import GuardExceeded
from .groups import Permutation, PermutationGroup, compose
from .subsets import bit_rows, element_bit_table, mask_of, point_bits, points_of

DEFAULT_ENUMERATION_GUARD = 10**8


@dataclass(frozen=True)
class SubsetOrbit:
    """An orbit of k-subsets, identified by its lex-minimal member."""

    representative: tuple[int, ...]
    size: int
    stabilizer_order: int


@dataclass(frozen=True)
class OrbitSet:
    v: int
    subset_size: int
    group_order: int
    orbits: tuple[SubsetOrbit, ...]
    complete: bool
    size_bound: int | None = None
    group: PermutationGroup | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.orbits)

    def representatives(self) -> list[tuple[int, ...]]:
        return [o.representative for o in self.orbits]


def _validated(s, v: int) -> tuple[int, ...]:
    pts = tuple(sorted(s))
    for p in pts:
        if not 1 <= p <= v:
            raise ValueError(f"point {p} out of range 1..{v}")
    if len(set(pts)) != len(pts):
        raise ValueError(f"subset {s} has repeated points")
    return pts


def orbit_of(s, group: PermutationGroup) -> SubsetOrbit:
    """Orbit metadata of subset s: lex-min representative, size, stabilizer."""
    v = group.degree
    pts = _validated(s, v)
    images = set()
    for e in group.elements:
        imgs = e.images
        m = 0
        for p in pts:
            m |= 1 << (v - imgs[p - 1])
        images.add(m)
    size = len(images)
    return SubsetOrbit(points_of(max(images), v), size, group.order // size)


def orbit_blocks(s, group: PermutationGroup) -> list[tuple[int, ...]]:
    """The full orbit of s as a lex-sorted list of point tuples."""
    v = group.degree
    pts = _validated(s, v)
    images = set()
    for e in group.elements:
        imgs = e.images
        m = 0
        for p in pts:
            m |= 1 << (v - imgs[p - 1])
        images.add(m)
    return [points_of(m, v) for m in sorted(images, reverse=True)]


def enumerate_orbits(
    group: PermutationGroup, k: int, guard: int = DEFAULT_ENUMERATION_GUARD
) -> OrbitSet:
    """Classify every k-subset of {1..v} into G-orbits (complete census)."""
    v = group.degree
    if not 0 <= k <= v:
        raise ValueError(f"k={k} out of range 0..{v}")
    total = comb(v, k)
    if total > guard:
        raise GuardExceeded(
            f"C({v},{k}) = {total} exceeds guard {guard}; "
            f"use short-orbit enumeration"
        )

    pbits = point_bits(v)
    tables = []
    for e in group.elements:
        if e.is_identity():
            continue
        imgs = e.images
        tables.append([0] + [1 << (v - imgs[p - 1]) for p in range(1, v + 1)])

    orbits = []
    covered = 0
    for s in combinations(range(1, v + 1), k):
        mask = 0
        for p in s:
            mask |= pbits[p]
        lex_min = True
        for tbl in tables:
            m = 0
            for p in s:
                m |= tbl[p]
            if m > mask:
                lex_min = False
                break
        if not lex_min:
            continue
        images = {mask}
        for tbl in tables:
            m = 0
            for p in s:
                m |= tbl[p]
            images.add(m)
        size = len(images)
        orbits.append(SubsetOrbit(s, size, group.order // size))
        covered += size

    assert covered == total, f"orbit sizes sum to {covered}, expected {total}"
    return OrbitSet(
        v=v,
        subset_size=k,
        group_order=group.order,
        orbits=tuple(orbits),
        complete=True,
        group=group,
    )


def _prime_order_class_reps(group: PermutationGroup) -> list[Permutation]:
    """One representative per conjugacy class of prime-order cyclic subgroups."""
    pool = {e.images: e for e in group.elements if _is_prime(e.order())}
    reps = []
    while pool:
        g = pool.pop(min(pool))
        reps.append(g)
        p = g.order()
        for h in group.elements:
            hinv = h.inverse()
            conj = compose(compose(h, g), hinv)
            pool.pop(conj.images, None)
            power = conj
            for _ in range(p - 2):
                power = compose(power, conj)
                pool.pop(power.images, None)
    return reps


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _invariant_subsets(g: Permutation, k: int) -> list[tuple[int, ...]]:
    """All k-subsets fixed setwise by g: unions of g-cycles with lengths summing to k."""
    v = g.degree
    seen = [False] * (v + 1)
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for start in range(1, v + 1):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        p = g.images[start - 1]
        while p != start:
            cyc.append(p)
            seen[p] = True
            p = g.images[p - 1]
        by_len.setdefault(len(cyc), []).append(tuple(cyc))

    lengths = sorted(by_len)
    # suffix capacity for pruning
    capacity = [0] * (len(lengths) + 1)
    for i in range(len(lengths) - 1, -1, -1):
        capacity[i] = capacity[i + 1] + lengths[i] * len(by_len[lengths[i]])

    out: list[tuple[int, ...]] = []

    def rec(idx: int, remaining: int, chosen: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(sorted(chosen)))
            return
        if idx == len(lengths) or remaining > capacity[idx]:
            return
        length = lengths[idx]
        cycles = by_len[length]
        for take in range(min(len(cycles), remaining // length), -1, -1):
            rest = remaining - take * length
            if rest > capacity[idx + 1]:
                continue
            if take == 0:
                rec(idx + 1, remaining, chosen)
                continue
            for combo in combinations(cycles, take):
                picked = chosen + [p for cyc in combo for p in cyc]
                rec(idx + 1, rest, picked)

    rec(0, k, [])
    return out


def _normalizer_rows(group: PermutationGroup, g: Permutation) -> np.ndarray:
    """Bit rows of the normalizer of <g> in the group."""
    p = g.order()
    powers = set()
    cur = g
    for _ in range(p - 1):
        powers.add(cur.images)
        cur = compose(cur, g)
    members = []
    for h in group.elements:
        conj = compose(compose(h, g), h.inverse())
        if conj.images in powers:
            members.append(h)
    return bit_rows(members, group.degree)


def _masks_from_points(pts: np.ndarray, v: int) -> np.ndarray:
    bit_lookup = np.zeros(v + 1, dtype=np.uint64)
    bit_lookup[1:] = np.left_shift(np.uint64(1), (v - np.arange(1, v + 1)).astype(np.uint64))
    return bit_lookup[pts].sum(axis=1, dtype=np.uint64)


def _canonical_masks(rows: np.ndarray, pts: np.ndarray, chunk: int = 8192) -> np.ndarray:
    """Per candidate, max mask over the permutations in `rows` (a lex-min canon)."""
    n = rows.shape[0]
    out = np.empty(len(pts), dtype=np.uint64)
    for lo in range(0, len(pts), chunk):
        part = pts[lo : lo + chunk]
        acc = np.zeros((n, len(part)), dtype=np.uint64)
        for col in range(part.shape[1]):
            acc += rows[:, part[:, col]]
        out[lo : lo + chunk] = acc.max(axis=0)
    return out


def enumerate_short_orbits(group: PermutationGroup, k: int, bound: int) -> OrbitSet:
    """Exactly the orbits of k-subsets of size <= bound, without a full census.

    Any orbit of size <= bound < |G| has a nontrivial stabilizer, hence a
    member fixed by some prime-order element (Cauchy); the candidates are the
    unions of that element's cycles with lengths summing to k. Candidates are
    first deduplicated under the normalizer of the generated subgroup (which
    permutes them within their G-orbits), then their exact orbit sizes and
    lex-min representatives come from a full-group scan.
    """
    v = group.degree
    order = group.order
    if not 1 <= k <= v:
        raise ValueError(f"k={k} out of range 1..{v}")
    if bound >= order:
        raise ValueError(f"bound {bound} >= |G| = {order}; use enumerate_orbits")

    found: dict[int, int] = {}
    if bound >= 1:
        all_rows = element_bit_table(group)
        for g in _prime_order_class_reps(group):
            cands = _invariant_subsets(g, k)
            if not cands:
                continue
            pts = np.array(cands, dtype=np.intp)
            norm_rows = _normalizer_rows(group, g)
            canon = np.unique(_canonical_masks(norm_rows, pts))
            if len(canon) == 0:
                continue
            uniq_pts = np.array(
                [points_of(int(m), v) for m in canon], dtype=np.intp
            )

            chunk = max(1, 2_000_000 // order)
            for lo in range(0, len(uniq_pts), chunk):
                part = uniq_pts[lo : lo + chunk]
                masks = canon[lo : lo + chunk]
                acc = np.zeros((order, len(part)), dtype=np.uint64)
                for col in range(part.shape[1]):
                    acc += all_rows[:, part[:, col]]
                stab = (acc == masks[np.newaxis, :]).sum(axis=0)
                reps = acc.max(axis=0)
                for j in range(len(part)):
                    st = int(stab[j])
                    assert order % st == 0, "stabilizer must divide group order"
                    size = order // st
                    if size <= bound:
                        prev = found.setdefault(int(reps[j]), size)
                        assert prev == size
    orbits = tuple(
        SubsetOrbit(points_of(m, v), size, order // size)
        for m, size in sorted(found.items(), reverse=True)
    )
    return OrbitSet(
        v=v,
        subset_size=k,
        group_order=order,
        orbits=orbits,
        complete=False,
        size_bound=bound,
        group=group,
    )


def write_orbits(path: str | Path, orbit_set: OrbitSet, group_label: str = "-") -> None:
    bound = orbit_set.size_bound if orbit_set.size_bound is not None else "none"
    lines = [
        f"orbits v={orbit_set.v} k={orbit_set.subset_size} group={group_label} "
        f"complete={str(orbit_set.complete).lower()} bound={bound}"
    ]
    for o in orbit_set.orbits:
        rep = " ".join(str(p) for p in o.representative)
        lines.append(f"{o.size} {o.stabilizer_order} {rep}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_orbits(path: str | Path) -> OrbitSet:
    lines = [
        ln.strip()
        for ln in Path(path).read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    header = lines[0].split()
    if not header or header[0] != "orbits":
        raise ValueError(f"{path}: not an orbit file")
    fields = dict(tok.split("=", 1) for tok in header[1:])
    v = int(fields["v"])
    k = int(fields["k"])
    complete = fields["complete"] == "true"
    bound = None if fields["bound"] == "none" else int(fields["bound"])
    orbits = []
    for ln in lines[1:]:
        parts = [int(tok) for tok in ln.split()]
        size, stab, rep = parts[0], parts[1], tuple(parts[2:])
        if len(rep) != k:
            raise ValueError(f"{path}: representative {rep} is not a {k}-subset")
        orbits.append(SubsetOrbit(rep, size, stab))
    # orbit-stabilizer gives the group order back from any line
    order = orbits[0].size * orbits[0].stabilizer_order if orbits else 0
    return OrbitSet(
        v=v,
        subset_size=k,
        group_order=order,
        orbits=tuple(orbits),
        complete=complete,
        size_bound=bound,
    )
