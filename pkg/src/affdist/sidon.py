"""Sidon sets in F_2^d: tests, greedy completion, gerbera configurations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from .gf2 import FieldSpec, span_rank

# Largest complete Sidon set in F_2^d for d = 2..9.
MAX_SIDON_SIZE = {2: 3, 3: 4, 4: 6, 5: 7, 6: 9, 7: 12, 8: 18, 9: 24}

# Complete Sidon set sizes occurring in each dimension.
COMPLETE_SIDON_SIZES = {
    2: {3},
    3: {4},
    4: {6},
    5: {7},
    6: {8, 9},
    7: {12},
    8: {15, 16, 18},
    9: {21, 22, 23, 24},
}


@dataclass(frozen=True)
class SidonSet:
    """An ordered list of distinct points of F_2^dim (not necessarily Sidon)."""

    dim: int
    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(int(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        for p in pts:
            if p < 0 or p >> self.dim:
                raise ValueError(f"point {p:#x} is outside F_2^{self.dim}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return p in self.points

    def translate(self, c: int) -> "SidonSet":
        return SidonSet(self.dim, tuple(p ^ c for p in self.points))

    def drop_top_coordinate(self) -> "SidonSet":
        """Inverse of the embedding x -> (x, 1); every point must have the top bit set."""
        top = 1 << (self.dim - 1)
        if not all(p & top for p in self.points):
            raise ValueError("points are not in the affine hyperplane x_top = 1")
        return SidonSet(self.dim - 1, tuple(p ^ top for p in self.points))


def _pair_sums(points: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(points), k=1)
    return points[i] ^ points[j]


def is_sidon(points: Sequence[int], dim: int | None = None) -> bool:
    """All sums x + y over unordered pairs of distinct points are distinct."""
    pts = np.asarray(list(points), dtype=np.int64)
    if len(np.unique(pts)) != len(pts):
        raise ValueError("duplicate points")
    if dim is not None and len(pts) and pts.max() >> dim:
        raise ValueError(f"point outside F_2^{dim}")
    sums = _pair_sums(pts)
    return len(np.unique(sums)) == len(sums)


def blocked_points(s: SidonSet) -> np.ndarray:
    """Boolean mask of points p for which s + {p} is not Sidon (p in s or p = x+y+z)."""
    blocked = np.zeros(1 << s.dim, dtype=bool)
    pts = np.asarray(s.points, dtype=np.int64)
    blocked[pts] = True
    if len(pts) >= 3:
        sums = _pair_sums(pts)
        blocked[np.bitwise_xor.outer(sums, pts).ravel()] = True
    return blocked


def is_complete_sidon(s: SidonSet) -> bool:
    if not is_sidon(s.points, s.dim):
        raise ValueError("input is not a Sidon set")
    return bool(blocked_points(s).all())


def greedy_complete(s: SidonSet, seed: int = 0) -> SidonSet:
    """Extend s to a complete Sidon set, trying points in a seeded random order."""
    if not is_sidon(s.points, s.dim):
        raise ValueError("input is not a Sidon set")
    rng = np.random.default_rng(seed)
    blocked = blocked_points(s)
    pts = list(s.points)
    sums = [a ^ b for a, b in combinations(pts, 2)]
    for p in rng.permutation(1 << s.dim):
        p = int(p)
        if blocked[p]:
            continue
        # new triples through p: p + x + y for existing pairs, and the point itself
        blocked[p] = True
        if sums:
            blocked[np.asarray(sums, dtype=np.int64) ^ p] = True
        sums.extend(p ^ q for q in pts)
        pts.append(p)
    return SidonSet(s.dim, tuple(pts))


@dataclass(frozen=True)
class GerberaConfig:
    center: int
    leaves: tuple[tuple[int, int, int], ...]

    @property
    def size(self) -> int:
        return len(self.leaves)

    def points(self) -> list[int]:
        return [p for leaf in self.leaves for p in leaf]


def gerbera_leaves(s: SidonSet, w: int) -> list[tuple[int, int, int]]:
    """3-subsets {x, y, z} of s with x + y + z = w, each sorted, in lexicographic order."""
    members = set(s.points)
    pts = sorted(s.points)
    leaves = []
    for i, x in enumerate(pts):
        for y in pts[i + 1 :]:
            z = x ^ y ^ w
            if z > y and z in members:
                leaves.append((x, y, z))
    return leaves


def enumerate_gerbera(
    s: SidonSet,
    w: int,
    t: int,
    visitor: Callable[[GerberaConfig], bool | None] | None = None,
) -> Iterator[GerberaConfig]:
    """Yield every w-centred gerbera configuration of size t whose leaves lie in s.

    Leaves are pairwise disjoint; configurations come in lexicographic order of their
    leaf keys. If ``visitor`` returns a truthy value the enumeration stops.
    """
    leaves = gerbera_leaves(s, w)

    def rec(start: int, chosen: list[tuple[int, int, int]], used: set[int]):
        if len(chosen) == t:
            yield GerberaConfig(w, tuple(chosen))
            return
        for i in range(start, len(leaves) - (t - len(chosen)) + 1):
            leaf = leaves[i]
            if used.intersection(leaf):
                continue
            chosen.append(leaf)
            yield from rec(i + 1, chosen, used | set(leaf))
            chosen.pop()

    for cfg in rec(0, [], set()):
        yield cfg
        if visitor is not None and visitor(cfg):
            return


def leaf_counts(s: SidonSet) -> np.ndarray:
    """Number of 3-subsets of s summing to each point of F_2^dim.

    In a Sidon set these subsets are pairwise disjoint, so ``leaf_counts(s)[w] >= t``
    means s contains a w-centred gerbera configuration of size t.
    """
    pts = np.asarray(s.points, dtype=np.int64)
    if len(pts) < 3:
        return np.zeros(1 << s.dim, dtype=np.int64)
    idx = np.array(list(combinations(range(len(pts)), 3)), dtype=np.int64)
    sums = pts[idx[:, 0]] ^ pts[idx[:, 1]] ^ pts[idx[:, 2]]
    return np.bincount(sums, minlength=1 << s.dim)


def max_gerbera_size(s: SidonSet) -> int:
    """Largest t such that s contains a gerbera configuration of size t (s Sidon)."""
    return int(leaf_counts(s).max()) if len(s) >= 3 else 0


def affine_span_dim(points: Sequence[int]) -> int:
    points = list(points)
    if not points:
        raise ValueError("empty point set")
    p0 = points[0]
    return span_rank(p ^ p0 for p in points[1:])


def max_complete_sidon_size(dim: int) -> int:
    """Table value for dim 2..9; above that the bound floor(sqrt(2)*2^(dim/2) + 1/2)."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    if dim in MAX_SIDON_SIZE:
        return MAX_SIDON_SIZE[dim]
    return sidon_size_bound(dim)


def floor_sqrt_plus_half(N: int) -> int:
    """floor(sqrt(N) + 1/2) computed exactly."""
    # largest k with k - 1/2 <= sqrt(N), i.e. 2k - 1 <= isqrt(4N)
    return (math.isqrt(4 * N) + 1) // 2


def sidon_size_bound(dim: int) -> int:
    """floor(sqrt(2) * 2^(dim/2) + 1/2) = floor(sqrt(2^(dim+1)) + 1/2)."""
    return floor_sqrt_plus_half(1 << (dim + 1))


# --------------------------------------------------------------------------
# Named sets


def affine_basis(dim: int) -> SidonSet:
    return SidonSet(dim, (0,) + tuple(1 << i for i in range(dim)))


def extended_affine_basis(dim: int) -> SidonSet:
    """Affine basis {0, e_1, .., e_dim} plus the sum of its elements."""
    full = (1 << dim) - 1
    return SidonSet(dim, (0,) + tuple(1 << i for i in range(dim)) + (full,))


def hyperbola(spec: FieldSpec) -> SidonSet:
    """{(x, 1/x) : x != 0} in GF(2^n)^2, packed as x | y << n."""
    n = spec.n
    return SidonSet(2 * n, tuple(x | (spec.inv(x) << n) for x in range(1, 1 << n)))


def power_graph(spec: FieldSpec, d: int) -> SidonSet:
    """{(x, x^d)} in F_2^(2n) without the constant coordinate."""
    tab = spec.power_table(d)
    n = spec.n
    return SidonSet(2 * n, tuple(int(x | (tab[x] << n)) for x in range(1 << n)))


def ellipse(spec: FieldSpec, with_origin: bool = False) -> SidonSet:
    """Points of x^2 + xy + e y^2 = 1 (e the first element of trace 1), optionally with (0, 0).

    Over GF(8) this is a complete 9-point set; over GF(16) the 17 points plus the
    origin form a complete 18-point set.
    """
    n, N = spec.n, 1 << spec.n
    eps = next(e for e in range(1, N) if spec.trace(e) == 1)
    mt = spec.mul_table()
    x = np.arange(N)
    pts = []
    for y in range(N):
        vals = mt[x, x] ^ mt[x, y] ^ mt[eps, mt[y, y]]
        pts.extend(int(v) | (y << n) for v in np.flatnonzero(vals == 1))
    if with_origin:
        pts.insert(0, 0)
    return SidonSet(2 * n, tuple(sorted(pts)))


def greedy_census(dim: int, seeds: int, start: int = 0) -> dict[int, list[int]]:
    """Complete sizes reached by greedy completion from the empty set: size -> seeds."""
    out: dict[int, list[int]] = {}
    empty = SidonSet(dim, ())
    for seed in range(start, start + seeds):
        out.setdefault(len(greedy_complete(empty, seed)), []).append(seed)
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# File format: "dim size" then one hex vector per line.


def format_sidon(s: SidonSet) -> str:
    return "\n".join([f"{s.dim} {len(s)}"] + [format(p, "x") for p in s.points]) + "\n"


def parse_sidon(text: str) -> SidonSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty Sidon-set file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'dim size'")
    dim, size = int(head[0]), int(head[1])
    if len(lines) - 1 != size:
        raise ValueError(f"declared {size} points, found {len(lines) - 1}")
    return SidonSet(dim, tuple(int(v, 16) for v in lines[1:]))


def load_sidon(path: str | Path) -> SidonSet:
    return parse_sidon(Path(path).read_text())


def save_sidon(s: SidonSet, path: str | Path) -> None:
    Path(path).write_text(format_sidon(s))
