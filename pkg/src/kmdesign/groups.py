"""Permutations of {1,...,v} and the finite groups they generate.

Points are 1-based at every interface. Composition is fixed project-wide as
"right factor acts first": compose(p, q) maps i to p(q(i)).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ClosureCapExceeded

DEFAULT_CLOSURE_CAP = 20000


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1,...,v}; images[i-1] is the image of point i."""

    images: tuple[int, ...]

    def __post_init__(self):
        v = len(self.images)
        if v < 1:
            raise ValueError("permutation degree must be >= 1")
        if sorted(self.images) != list(range(1, v + 1)):
            raise ValueError(f"images {self.images} are not a bijection on 1..{v}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        if not 1 <= point <= len(self.images):
            raise ValueError(f"point {point} out of range 1..{len(self.images)}")
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img - 1] = i + 1
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(img == i + 1 for i, img in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * (len(self.images) + 1)
        out = []
        for start in range(1, len(self.images) + 1):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            p = self.images[start - 1]
            while p != start:
                cyc.append(p)
                seen[p] = True
                p = self.images[p - 1]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        lengths = [len(c) for c in self.cycles()]
        return lcm(*lengths) if lengths else 1

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(p) for p in c) + ")" for c in cycs)

    def __str__(self) -> str:
        return self.cycle_string()


def identity(degree: int) -> Permutation:
    return Permutation(tuple(range(1, degree + 1)))


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse whitespace-tolerant cycle notation like "(1,2)(3,4)".

    Unlisted points are fixed; the empty string is the identity.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    images = list(range(1, degree + 1))
    used: set[int] = set()
    stripped = "".join(text.split())
    pos = 0
    while pos < len(stripped):
        if stripped[pos] != "(":
            raise ValueError(f"expected '(' at position {pos} in {text!r}")
        end = stripped.find(")", pos)
        if end == -1:
            raise ValueError(f"unclosed cycle in {text!r}")
        body = stripped[pos + 1 : end]
        if not body:
            raise ValueError(f"empty cycle in {text!r}")
        try:
            points = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise ValueError(f"non-integer entry in cycle {body!r}") from None
        for p in points:
            if not 1 <= p <= degree:
                raise ValueError(f"point {p} out of range 1..{degree}")
            if p in used:
                raise ValueError(f"point {p} appears twice")
            used.add(p)
        for i, p in enumerate(points):
            images[p - 1] = points[(i + 1) % len(points)]
        pos = end + 1
    return Permutation(tuple(images))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The permutation mapping i to p(q(i)): q acts first."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    qi = q.images
    pi = p.images
    return Permutation(tuple(pi[qi[i] - 1] for i in range(len(pi))))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def apply_to_subset(p: Permutation, s: Iterable[int]) -> tuple[int, ...]:
    """Image {p(x) : x in s}, returned sorted ascending."""
    imgs = p.images
    v = len(imgs)
    out = []
    for x in s:
        if not 1 <= x <= v:
            raise ValueError(f"point {x} out of range 1..{v}")
        out.append(imgs[x - 1])
    return tuple(sorted(out))


@dataclass(frozen=True)
class PermutationGroup:
    """A finite permutation group with its full element list.

    Elements are sorted by image tuple, so equal groups compare equal and
    iteration order is reproducible.
    """

    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> Permutation:
        return identity(self.degree)

    def __contains__(self, p: Permutation) -> bool:
        return p in set(self.elements)

    def __iter__(self):
        return iter(self.elements)


def generate_group(
    generators: Sequence[Permutation], cap: int = DEFAULT_CLOSURE_CAP
) -> PermutationGroup:
    """Breadth-first product closure of the generators.

    Raises ClosureCapExceeded once more than `cap` distinct elements appear.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError("generators must share a degree")

    ident = identity(degree)
    seen: dict[tuple[int, ...], Permutation] = {ident.images: ident}
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt_images = tuple(g.images[cur.images[i] - 1] for i in range(degree))
            if nxt_images not in seen:
                if len(seen) >= cap:
                    raise ClosureCapExceeded(
                        f"group closure exceeded cap={cap}; raise the cap if the "
                        f"group is genuinely this large"
                    )
                nxt = Permutation(nxt_images)
                seen[nxt_images] = nxt
                queue.append(nxt)

    elements = tuple(seen[key] for key in sorted(seen))
    return PermutationGroup(degree=degree, generators=tuple(gens), elements=elements)


def trivial_group(degree: int) -> PermutationGroup:
    e = identity(degree)
    return PermutationGroup(degree=degree, generators=(e,), elements=(e,))


def read_generators(path: str | Path) -> tuple[int, list[Permutation]]:
    """Read a group file: `degree <v>` then one generator per line."""
    lines = Path(path).read_text().splitlines()
    degree = None
    gens: list[Permutation] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree":
                raise ValueError(f"{path}: first line must be 'degree <v>', got {line!r}")
            degree = int(parts[1])
            continue
        gens.append(parse_cycles(line, degree))
    if degree is None:
        raise ValueError(f"{path}: missing 'degree' header")
    return degree, gens


def load_group(path: str | Path, cap: int = DEFAULT_CLOSURE_CAP) -> PermutationGroup:
    degree, gens = read_generators(path)
    if not gens:
        return trivial_group(degree)
    return generate_group(gens, cap=cap)


def write_group(path: str | Path, degree: int, generators: Sequence[Permutation]) -> None:
    lines = [f"degree {degree}"]
    lines.extend(g.cycle_string() for g in generators)
    Path(path).write_text("\n".join(lines) + "\n")
