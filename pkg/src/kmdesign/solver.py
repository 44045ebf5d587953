"""Exact enumeration of 0-1 solutions of A x = lambda j.

Depth-first backtracking over columns: at each node pick the unsatisfied row
with the fewest free columns, branch on that row's lowest-index free column
(include first by default). Residuals prune branches where a row overshoots
or can no longer be covered by the remaining free columns. One solver covers
all t; the systems here are small enough that exhaustive counting is
practical.

A result is "incomplete" only when the tree was not exhausted: the time
budget ran out, or a solution_limit stopped enumeration early. mode="first"
is fulfilled by the first solution, so it completes either way.
"""

from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .kramer_mesner import KmMatrix

MODES = ("first", "enumerate", "count")


@dataclass(frozen=True)
class SolveRequest:
    matrix: KmMatrix
    lam: int
    mode: str = "enumerate"
    solution_limit: int | None = None
    time_budget: float | None = None
    workers: int = 1
    include_first: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SolveResult:
    lam: int
    mode: str
    count: int
    solutions: tuple[tuple[int, ...], ...]
    status: str  # "complete" | "incomplete"

    @property
    def complete(self) -> bool:
        return self.status == "complete"


class _Stop(Exception):
    pass


class _Search:
    """Mutable search state over a fixed (entries, lambda) system."""

    def __init__(self, entries, lam, include_first=True, collect=True,
                 limit=None, deadline=None):
        self.entries = entries
        self.m = len(entries)
        self.n = len(entries[0]) if self.m else 0
        self.lam = lam
        self.include_first = include_first
        self.collect = collect
        self.limit = limit
        self.deadline = deadline

        self.cols_rows = [[] for _ in range(self.n)]
        self.rows_cols = [[] for _ in range(self.m)]
        for i, row in enumerate(entries):
            for j, a in enumerate(row):
                if a > 0:
                    self.cols_rows[j].append((i, a))
                    self.rows_cols[i].append((j, a))
        self.zero_cols = tuple(j for j in range(self.n) if not self.cols_rows[j])

        self.r = [lam] * self.m
        self.rem = [sum(a for _, a in cols) for cols in self.rows_cols]
        self.avail = [len(cols) for cols in self.rows_cols]
        self.status = [0] * self.n  # 0 free, 1 included, 2 excluded
        self.chosen: list[int] = []

        self.count = 0
        self.solutions: list[tuple[int, ...]] = []
        self.timed_out = False
        self.hit_limit = False
        self._nodes = 0

    def root_feasible(self) -> bool:
        return all(self.r[i] <= self.rem[i] for i in range(self.m))

    def run(self):
        if not self.root_feasible():
            return
        try:
            self._dfs()
        except _Stop:
            pass

    def apply_decisions(self, decisions) -> bool:
        """Apply (column, include?) decisions; False if a prune fires."""
        for j, inc in decisions:
            if inc:
                if not all(self.r[i] >= a for i, a in self.cols_rows[j]):
                    return False
                self._apply_include(j)
            else:
                self._apply_exclude(j)
                if any(self.r[i] > self.rem[i] for i, _ in self.cols_rows[j]):
                    return False
        return True

    def next_branch_column(self):
        """(row, column) to branch on, or None when every row is satisfied."""
        i_star = self._pick_row()
        if i_star is None:
            return None
        for j, _ in self.rows_cols[i_star]:
            if self.status[j] == 0:
                return i_star, j
        return i_star, -1  # unreachable when rem prune holds; guarded by caller

    def _emit(self):
        base = tuple(sorted(self.chosen))
        z = self.zero_cols
        self.count += 1 << len(z)
        if self.collect:
            for extra in range(len(z) + 1):
                for combo in combinations(z, extra):
                    self.solutions.append(tuple(sorted(base + combo)))
        if self.limit is not None and self.count >= self.limit:
            self.hit_limit = True
            raise _Stop

    def _pick_row(self):
        best = None
        best_avail = None
        r = self.r
        avail = self.avail
        for i in range(self.m):
            if r[i] > 0:
                a = avail[i]
                if best is None or a < best_avail:
                    best, best_avail = i, a
        return best

    def _apply_include(self, j):
        for i, a in self.cols_rows[j]:
            self.r[i] -= a
            self.rem[i] -= a
            self.avail[i] -= 1
        self.status[j] = 1
        self.chosen.append(j)

    def _undo_include(self, j):
        for i, a in self.cols_rows[j]:
            self.r[i] += a
            self.rem[i] += a
            self.avail[i] += 1
        self.status[j] = 0
        self.chosen.pop()

    def _apply_exclude(self, j):
        for i, a in self.cols_rows[j]:
            self.rem[i] -= a
            self.avail[i] -= 1
        self.status[j] = 2

    def _undo_exclude(self, j):
        for i, a in self.cols_rows[j]:
            self.rem[i] += a
            self.avail[i] += 1
        self.status[j] = 0

    def _dfs(self):
        self._nodes += 1
        if self.deadline is not None and self._nodes % 2048 == 0:
            if time.monotonic() > self.deadline:
                self.timed_out = True
                raise _Stop

        i_star = self._pick_row()
        if i_star is None:
            self._emit()
            return

        j_star = None
        status = self.status
        for j, _ in self.rows_cols[i_star]:
            if status[j] == 0:
                j_star = j
                break
        if j_star is None:
            return  # r > 0 with no free column left in the row

        branches = (True, False) if self.include_first else (False, True)
        for inc in branches:
            if inc:
                if all(self.r[i] >= a for i, a in self.cols_rows[j_star]):
                    self._apply_include(j_star)
                    self._dfs()
                    self._undo_include(j_star)
            else:
                self._apply_exclude(j_star)
                if all(self.r[i] <= self.rem[i] for i, _ in self.cols_rows[j_star]):
                    self._dfs()
                self._undo_exclude(j_star)


def _verify_solution(entries, lam, columns):
    cols = set(columns)
    for i, row in enumerate(entries):
        total = sum(row[j] for j in cols)
        assert total == lam, f"row {i} sums to {total}, expected {lam}"


def _frontier(entries, lam, include_first, target):
    """Split the decision tree breadth-first into independent subtree tasks.

    Returns (decision lists, solutions emitted at split nodes).
    """
    probe = _Search(entries, lam, include_first=include_first)
    if not probe.root_feasible():
        return [], []

    done: list[tuple[int, ...]] = []
    frontier: list[tuple] = [()]
    while frontier and len(frontier) < target:
        decisions = frontier.pop(0)
        state = _Search(entries, lam, include_first=include_first)
        if not state.apply_decisions(decisions):
            continue
        branch = state.next_branch_column()
        if branch is None:
            try:
                state._emit()
            except _Stop:
                pass
            done.extend(state.solutions)
            continue
        _, j_star = branch
        if j_star < 0:
            continue
        order = (True, False) if include_first else (False, True)
        for inc in order:
            frontier.append(decisions + ((j_star, inc),))
    return frontier, done


def _solve_subtree(args):
    entries, lam, include_first, decisions, budget = args
    deadline = time.monotonic() + budget if budget is not None else None
    search = _Search(entries, lam, include_first=include_first, deadline=deadline)
    if search.apply_decisions(decisions):
        try:
            search._dfs()
        except _Stop:
            pass
    return search.solutions, search.count, search.timed_out


def _solve_parallel(request: SolveRequest) -> SolveResult:
    entries = request.matrix.entries
    tasks, found = _frontier(
        entries, request.lam, request.include_first, 4 * request.workers
    )
    solutions = list(found)
    count = len(found)
    timed_out = False
    if tasks:
        payloads = [
            (entries, request.lam, request.include_first, d, request.time_budget)
            for d in tasks
        ]
        with ProcessPoolExecutor(max_workers=request.workers) as pool:
            for sols, cnt, t_out in pool.map(_solve_subtree, payloads):
                solutions.extend(sols)
                count += cnt
                timed_out = timed_out or t_out

    solutions.sort()
    for s in solutions:
        _verify_solution(entries, request.lam, s)

    status = "incomplete" if timed_out else "complete"
    limit = request.solution_limit
    if limit is not None and count > limit:
        solutions = solutions[:limit]
        count = limit
        status = "incomplete"
    return SolveResult(
        lam=request.lam,
        mode=request.mode,
        count=count,
        solutions=() if request.mode == "count" else tuple(solutions),
        status=status,
    )


def solve(request: SolveRequest) -> SolveResult:
    """Solve A x = lambda j over x in {0,1}^n per the request mode."""
    n = request.matrix.n
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 3 * n + 200))

    if request.workers > 1 and request.mode != "first":
        return _solve_parallel(request)

    entries = request.matrix.entries
    limit = 1 if request.mode == "first" else request.solution_limit
    deadline = (
        time.monotonic() + request.time_budget
        if request.time_budget is not None
        else None
    )
    search = _Search(
        entries,
        request.lam,
        include_first=request.include_first,
        collect=request.mode != "count",
        limit=limit,
        deadline=deadline,
    )
    search.run()

    solutions = sorted(search.solutions)
    for s in solutions:
        _verify_solution(entries, request.lam, s)

    if search.timed_out:
        status = "incomplete"
    elif search.hit_limit and request.mode != "first":
        status = "incomplete"
    else:
        status = "complete"
    return SolveResult(
        lam=request.lam,
        mode=request.mode,
        count=search.count,
        solutions=tuple(solutions),
        status=status,
    )


def count_brute_force(matrix: KmMatrix, lam: int) -> int:
    """2^n scan; the independent oracle for small systems."""
    entries = matrix.entries
    n = matrix.n
    if n > 25:
        raise ValueError(f"brute force over 2^{n} vectors is not sensible")
    total = 0
    for bits in range(1 << n):
        ok = True
        for row in entries:
            s = 0
            for j in range(n):
                if bits >> j & 1:
                    s += row[j]
            if s != lam:
                ok = False
                break
        if ok:
            total += 1
    return total


def write_solutions(
    path: str | Path, result: SolveResult, matrix_label: str = "-"
) -> None:
    lines = [
        f"solutions matrix={matrix_label} lambda={result.lam} "
        f"count={result.count} status={result.status}"
    ]
    for sol in result.solutions:
        lines.append(" ".join(str(j) for j in sol))
    Path(path).write_text("\n".join(lines) + "\n")


def read_solutions(path: str | Path) -> SolveResult:
    lines = [
        ln.strip()
        for ln in Path(path).read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    header = lines[0].split()
    if not header or header[0] != "solutions":
        raise ValueError(f"{path}: not a solutions file")
    fields = dict(tok.split("=", 1) for tok in header[1:])
    solutions = tuple(tuple(int(tok) for tok in ln.split()) for ln in lines[1:])
    return SolveResult(
        lam=int(fields["lambda"]),
        mode="enumerate",
        count=int(fields["count"]),
        solutions=solutions,
        status=fields["status"],
    )
