"""Assembly of the Kramer-Mesner matrix from t-orbits and k-orbits.

Entry (i, j) counts the k-subsets in column orbit j containing a fixed
t-subset from row orbit i. It is computed by double counting from the column
representative: classify its C(k,t) t-subsets into row orbits, then scale by
|K_j| / |T_i|, which must divide exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from .groups import PermutationGroup
from .orbits import OrbitSet
from .subsets import element_bit_table, mask_of, points_of


@dataclass(frozen=True)
class OrbitInfo:
    """Row/column metadata: orbit representative and orbit size."""

    representative: tuple[int, ...]
    size: int


@dataclass(frozen=True)
class KmMatrix:
    t: int
    v: int
    k: int
    rows: tuple[OrbitInfo, ...]
    cols: tuple[OrbitInfo, ...]
    entries: tuple[tuple[int, ...], ...]
    complete_columns: bool

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.cols)

    def row_sums(self) -> list[int]:
        return [sum(row) for row in self.entries]

    def lambda_max(self) -> int:
        return comb(self.v - self.t, self.k - self.t)


def build_matrix(
    group: PermutationGroup, t_orbits: OrbitSet, k_orbits: OrbitSet
) -> KmMatrix:
    """Kramer-Mesner matrix for the given row (t) and column (k) orbit sets."""
    v = group.degree
    t = t_orbits.subset_size
    k = k_orbits.subset_size
    if not 0 < t < k <= v:
        raise ValueError(f"need 0 < t < k <= v, got t={t} k={k} v={v}")
    if not t_orbits.complete:
        raise ValueError("row orbit set must be a complete census")
    if t_orbits.group_order != group.order or k_orbits.group_order != group.order:
        raise ValueError("orbit sets were computed for a different group")

    row_index = {
        mask_of(o.representative, v): i for i, o in enumerate(t_orbits.orbits)
    }
    table = element_bit_table(group)

    m = len(t_orbits.orbits)
    cols_by_row: list[list[int]] = [[] for _ in range(m)]
    for j, col in enumerate(k_orbits.orbits):
        tsubs = np.array(list(combinations(col.representative, t)), dtype=np.intp)
        acc = np.zeros((group.order, len(tsubs)), dtype=np.uint64)
        for c in range(t):
            acc += table[:, tsubs[:, c]]
        lexmin = acc.max(axis=0)
        b = [0] * m
        for mask in lexmin:
            try:
                b[row_index[int(mask)]] += 1
            except KeyError:
                rep = points_of(int(mask), v)
                raise ValueError(
                    f"t-subset orbit with representative {rep} missing from rows"
                ) from None
        for i in range(m):
            num = b[i] * col.size
            t_size = t_orbits.orbits[i].size
            assert num % t_size == 0, (
                f"double counting failed at row {i}, column {j}: "
                f"{b[i]} * {col.size} not divisible by {t_size}"
            )
            cols_by_row[i].append(num // t_size)

    entries = tuple(tuple(row) for row in cols_by_row)
    matrix = KmMatrix(
        t=t,
        v=v,
        k=k,
        rows=tuple(OrbitInfo(o.representative, o.size) for o in t_orbits.orbits),
        cols=tuple(OrbitInfo(o.representative, o.size) for o in k_orbits.orbits),
        entries=entries,
        complete_columns=k_orbits.complete,
    )
    if matrix.complete_columns:
        expected = matrix.lambda_max()
        for i, total in enumerate(matrix.row_sums()):
            assert total == expected, (
                f"row {i} sums to {total}, expected C({v - t},{k - t}) = {expected}"
            )
    return matrix


def row_residual_bound(matrix: KmMatrix, j_remaining) -> list[int]:
    """Per-row sum of entries over the given remaining column indices."""
    remaining = list(j_remaining)
    for j in remaining:
        if not 0 <= j < matrix.n:
            raise ValueError(f"column index {j} out of range")
    return [sum(row[j] for j in remaining) for row in matrix.entries]


def write_matrix(path: str | Path, matrix: KmMatrix) -> None:
    lines = [
        f"km t={matrix.t} v={matrix.v} k={matrix.k} rows={matrix.m} "
        f"cols={matrix.n} complete={str(matrix.complete_columns).lower()}"
    ]
    for info in matrix.rows:
        lines.append(f"{info.size} " + " ".join(str(p) for p in info.representative))
    for info in matrix.cols:
        lines.append(f"{info.size} " + " ".join(str(p) for p in info.representative))
    for row in matrix.entries:
        lines.append(" ".join(str(a) for a in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path: str | Path) -> KmMatrix:
    lines = [
        ln.strip()
        for ln in Path(path).read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    header = lines[0].split()
    if not header or header[0] != "km":
        raise ValueError(f"{path}: not a matrix file")
    fields = dict(tok.split("=", 1) for tok in header[1:])
    t, v, k = int(fields["t"]), int(fields["v"]), int(fields["k"])
    m, n = int(fields["rows"]), int(fields["cols"])
    complete = fields["complete"] == "true"
    if len(lines) != 1 + m + n + m:
        raise ValueError(f"{path}: expected {1 + m + n + m} lines, got {len(lines)}")

    def parse_info(ln: str, size_expected: int) -> OrbitInfo:
        parts = [int(tok) for tok in ln.split()]
        if len(parts) != size_expected + 1:
            raise ValueError(f"{path}: bad orbit metadata line {ln!r}")
        return OrbitInfo(tuple(parts[1:]), parts[0])

    rows = tuple(parse_info(ln, t) for ln in lines[1 : 1 + m])
    cols = tuple(parse_info(ln, k) for ln in lines[1 + m : 1 + m + n])
    entries = []
    for ln in lines[1 + m + n :]:
        row = tuple(int(tok) for tok in ln.split())
        if len(row) != n:
            raise ValueError(f"{path}: entry row has {len(row)} values, expected {n}")
        entries.append(row)
    return KmMatrix(
        t=t, v=v, k=k, rows=rows, cols=cols,
        entries=tuple(entries), complete_columns=complete,
    )
