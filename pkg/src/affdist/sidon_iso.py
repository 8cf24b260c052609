"""Affine automorphisms and isomorphisms of Sidon sets.

A Sidon set S (points p_1..p_k of F_2^d spanning it affinely) is represented by
H_S, the k x (d+1) matrix with rows (p_i, 1), and by its column space U_S inside
F_2^k. Affine maps between Sidon sets induce permutations of the points that
preserve the zero-sum 6-subsets (the incidence graph Gamma_S) and carry U_S to
U_S'; conversely such a permutation determines the map. Automorphisms are found
by computing Aut(Gamma_S) with a partition-refinement engine and stabilising U_S.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .gf2 import AffineMap, BitMatrix, rank_and_span, rref_key
from .sidon import SidonSet, affine_span_dim

Perm = tuple[int, ...]


def perm_compose(a: Perm, b: Perm) -> Perm:
    """a o b: i -> a[b[i]]."""
    return tuple(a[i] for i in b)


def perm_inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


def perm_identity(k: int) -> Perm:
    return tuple(range(k))


# --------------------------------------------------------------------------
# Code space


@dataclass(frozen=True)
class SidonCode:
    """H_S rows (points with the constant bit ``1 << dim``) and the canonical basis of U_S."""

    dim: int
    rows: tuple[int, ...]
    basis: tuple[int, ...]  # rref basis of the column space, vectors over |S| coordinates

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> BitMatrix:
        return BitMatrix(self.size, self.dim + 1, self.rows)

    def key(self) -> tuple[int, ...]:
        return self.basis


class RankDeficient(ValueError):
    pass


def _columns(rows: Sequence[int], ncols: int) -> list[int]:
    return [sum(((r >> j) & 1) << i for i, r in enumerate(rows)) for j in range(ncols)]


def sidon_code(s: SidonSet) -> SidonCode:
    rows = tuple(p | (1 << s.dim) for p in s.points)
    cols = _columns(rows, s.dim + 1)
    rank, span = rank_and_span(BitMatrix.from_rows(cols, len(rows)))
    if rank != s.dim + 1:
        raise RankDeficient(
            f"H_S has rank {rank} < {s.dim + 1}: the points span an affine subspace of "
            f"dimension {rank - 1}; restrict to that span first"
        )
    return SidonCode(s.dim, rows, span.rows)


def transport(sigma: Perm, vectors: Sequence[int]) -> list[int]:
    """Move coordinate i of each vector to coordinate sigma[i]."""
    out = []
    for u in vectors:
        v = 0
        i = 0
        while u:
            if u & 1:
                v |= 1 << sigma[i]
            u >>= 1
            i += 1
        out.append(v)
    return out


def transport_key(sigma: Perm, key: Sequence[int]) -> tuple[int, ...]:
    return rref_key(transport(sigma, key), len(sigma))


def permutation_respects_code(sigma: Perm, code1: SidonCode, code2: SidonCode) -> bool:
    if len(sigma) != code1.size or code1.size != code2.size:
        raise ValueError("permutation degree does not match the codes")
    return transport_key(sigma, code1.basis) == code2.basis


# --------------------------------------------------------------------------
# Incidence graph and the refinement engine


@dataclass(frozen=True)
class IncidenceGraph:
    """Left vertices 0..k-1 (points); right vertices the zero-sum 6-subsets as bitmasks."""

    k: int
    blocks: tuple[int, ...]
    incidence: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_blocks(cls, k: int, blocks: Sequence[int]) -> "IncidenceGraph":
        blocks = tuple(sorted(set(int(b) for b in blocks)))
        inc = [[] for _ in range(k)]
        for bi, b in enumerate(blocks):
            for v in range(k):
                if (b >> v) & 1:
                    inc[v].append(bi)
        return cls(k, blocks, tuple(tuple(x) for x in inc))

    def members(self, bi: int) -> list[int]:
        b = self.blocks[bi]
        return [v for v in range(self.k) if (b >> v) & 1]

    def is_automorphism(self, perm: Perm) -> bool:
        return is_isomorphism(self, self, perm)


def is_isomorphism(g1: IncidenceGraph, g2: IncidenceGraph, perm: Perm) -> bool:
    if g1.k != g2.k or len(g1.blocks) != len(g2.blocks):
        return False
    target = set(g2.blocks)
    for b in g1.blocks:
        img = 0
        v = 0
        while b:
            if b & 1:
                img |= 1 << perm[v]
            b >>= 1
            v += 1
        if img not in target:
            return False
    return True


def zero_sum_six_subsets(points: Sequence[int]) -> list[int]:
    """Bitmasks of the 6-subsets of ``points`` whose XOR vanishes."""
    pts = np.asarray(points, dtype=np.int64)
    k = len(pts)
    if k < 6:
        return []
    # split each 6-subset as {a<b<c} + {d<e<f} with a the smallest element
    triples = np.array(list(combinations(range(k), 3)), dtype=np.int64)
    sums = pts[triples[:, 0]] ^ pts[triples[:, 1]] ^ pts[triples[:, 2]]
    masks = (1 << triples[:, 0]) | (1 << triples[:, 1]) | (1 << triples[:, 2])
    order = np.argsort(sums, kind="stable")
    sums, masks, firsts = sums[order], masks[order], triples[order, 0]
    out = set()
    start = 0
    for end in range(1, len(sums) + 1):
        if end == len(sums) or sums[end] != sums[start]:
            grp = range(start, end)
            for i in grp:
                for j in grp:
                    if firsts[i] < firsts[j] and not (masks[i] & masks[j]):
                        out.add(int(masks[i] | masks[j]))
            start = end
    return sorted(out)


def build_gamma(s: SidonSet) -> IncidenceGraph:
    return IncidenceGraph.from_blocks(len(s), zero_sum_six_subsets(s.points))


def _refine(g: IncidenceGraph, cells: list[list[int]]):
    """Split cells by block-neighbourhood signatures until stable.

    Returns the refined ordered partition and a trace; two partitions related by an
    isomorphism refine to partitions with equal traces whose cells correspond.
    """
    cells = [list(c) for c in cells]
    trace = []
    while True:
        where = {}
        for ci, c in enumerate(cells):
            for v in c:
                where[v] = ci
        changed = False
        new_cells = []
        for ci, c in enumerate(cells):
            if len(c) == 1:
                new_cells.append(c)
                continue
            sigs = {}
            for v in c:
                sig = []
                for bi in g.incidence[v]:
                    b = g.blocks[bi] & ~(1 << v)
                    row = []
                    u = 0
                    while b:
                        if b & 1:
                            row.append(where[u])
                        b >>= 1
                        u += 1
                    row.sort()
                    sig.append(tuple(row))
                sig.sort()
                sigs.setdefault(tuple(sig), []).append(v)
            if len(sigs) == 1:
                new_cells.append(c)
                continue
            changed = True
            keys = sorted(sigs)
            trace.append((ci, tuple((kk, len(sigs[kk])) for kk in keys)))
            new_cells.extend(sorted(sigs[kk]) for kk in keys)
        cells = new_cells
        if not changed:
            return cells, tuple(trace)


def _individualize(cells: list[list[int]], ci: int, v: int) -> list[list[int]]:
    rest = [u for u in cells[ci] if u != v]
    return cells[:ci] + [[v], rest] + cells[ci + 1 :]


def _target_cell(cells: list[list[int]]) -> int:
    """First non-singleton cell of minimal size."""
    best = -1
    for i, c in enumerate(cells):
        if len(c) > 1 and (best < 0 or len(c) < len(cells[best])):
            best = i
    return best


def _search_iso(
    g1: IncidenceGraph,
    g2: IncidenceGraph,
    cells1: list[list[int]],
    cells2: list[list[int]],
    accept: Callable[[Perm], bool] | None,
    stats: dict,
) -> Perm | None:
    stats["nodes"] = stats.get("nodes", 0) + 1
    cells1, tr1 = _refine(g1, cells1)
    cells2, tr2 = _refine(g2, cells2)
    if tr1 != tr2 or [len(c) for c in cells1] != [len(c) for c in cells2]:
        return None
    ci = _target_cell(cells1)
    if ci < 0:
        perm = [0] * g1.k
        for a, b in zip(cells1, cells2):
            perm[a[0]] = b[0]
        perm = tuple(perm)
        if is_isomorphism(g1, g2, perm) and (accept is None or accept(perm)):
            return perm
        return None
    v = cells1[ci][0]
    left = _individualize(cells1, ci, v)
    for u in cells2[ci]:
        r = _search_iso(g1, g2, left, _individualize(cells2, ci, u), accept, stats)
        if r is not None:
            return r
    return None


def find_isomorphism(
    g1: IncidenceGraph, g2: IncidenceGraph, accept: Callable[[Perm], bool] | None = None
) -> Perm | None:
    """Some vertex bijection mapping blocks of g1 onto blocks of g2 (and accepted), or None."""
    if g1.k != g2.k or len(g1.blocks) != len(g2.blocks):
        return None
    return _search_iso(g1, g2, [list(range(g1.k))], [list(range(g2.k))], accept, {})


# --------------------------------------------------------------------------
# Permutation groups


@dataclass
class PermGroup:
    degree: int
    generators: list[Perm]
    order: int | None = None
    base: list[int] = field(default_factory=list)

    def orbit(self, point: int) -> list[int]:
        return _orbit(point, self.generators)

    def elements(self, limit: int = 10**6) -> list[Perm]:
        """All elements by closure (for small groups)."""
        ident = perm_identity(self.degree)
        seen = {ident}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = perm_compose(s, g)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > limit:
                        raise MemoryError("group too large to enumerate")
                    queue.append(h)
        return sorted(seen)


def _orbit(point: int, gens: Sequence[Perm]) -> list[int]:
    seen = {point}
    queue = [point]
    while queue:
        p = queue.pop()
        for g in gens:
            q = g[p]
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return sorted(seen)


def graph_aut(
    g: IncidenceGraph, accept: Callable[[Perm], bool] | None = None, stats: dict | None = None
) -> PermGroup:
    """Automorphism group of the incidence graph acting on the left vertices.

    Stabiliser chain along the first path of the refinement tree: at each level,
    every vertex in the target cell outside the current orbit is tested for an
    automorphism fixing the earlier base points. With ``accept`` only accepted
    automorphisms count, which computes the subgroup they form (``accept`` must
    define a subgroup).
    """
    stats = {} if stats is None else stats
    cells, _ = _refine(g, [list(range(g.k))])
    path = [cells]
    base = []
    while True:
        ci = _target_cell(cells)
        if ci < 0:
            break
        v = cells[ci][0]
        base.append((ci, v))
        cells, _ = _refine(g, _individualize(cells, ci, v))
        path.append(cells)
    gens: list[Perm] = []
    order = 1
    for level in range(len(base) - 1, -1, -1):
        ci, v = base[level]
        parent = path[level]
        left = _individualize(parent, ci, v)
        level_gens = list(gens)
        orbit = set(_orbit(v, level_gens))
        for u in parent[ci]:
            if u in orbit:
                continue
            perm = _search_iso(g, g, left, _individualize(parent, ci, u), accept, stats)
            if perm is not None:
                gens.append(perm)
                level_gens.append(perm)
                orbit = set(_orbit(v, level_gens))
        order *= len(orbit)
    return PermGroup(g.k, gens, order, [v for _, v in base])


# --------------------------------------------------------------------------
# Subspace orbits


def subspace_orbit_stabilizer(group: PermGroup, code: SidonCode, max_orbit: int = 10**6):
    """Orbit of U_S under ``group`` and generators of its stabiliser.

    Returns (stabiliser generators, orbit as dict key -> transversal element).
    The stabiliser order is ``group.order // len(orbit)``.
    """
    if group.degree != code.size:
        raise ValueError("group degree differs from the number of points")
    ident = perm_identity(group.degree)
    start = code.basis
    trans = {start: ident}
    queue = deque([start])
    while queue:
        key = queue.popleft()
        t = trans[key]
        for g in group.generators:
            img = transport_key(g, key)
            if img not in trans:
                trans[img] = perm_compose(g, t)
                if len(trans) > max_orbit:
                    raise MemoryError("subspace orbit exceeds the limit")
                queue.append(img)
    schreier = set()
    for key, t in trans.items():
        for g in group.generators:
            img = transport_key(g, key)
            s = perm_compose(perm_inverse(trans[img]), perm_compose(g, t))
            if s != ident:
                schreier.add(s)
    stab_order = group.order // len(trans) if group.order else None
    return _prune_generators(sorted(schreier), group.degree, stab_order), trans


def _prune_generators(cands: list[Perm], degree: int, order: int | None) -> list[Perm]:
    """Greedy subset of ``cands`` generating the same group (closure-based)."""
    ident = perm_identity(degree)
    elems = {ident}
    gens: list[Perm] = []
    for c in cands:
        if c in elems:
            continue
        gens.append(c)
        queue = deque(elems)
        while queue:
            g = queue.popleft()
            for s in gens:
                h = perm_compose(s, g)
                if h not in elems:
                    elems.add(h)
                    queue.append(h)
        if order is not None and len(elems) >= order:
            break
    return gens


# --------------------------------------------------------------------------
# From permutations to affine maps


def _affine_from_perm(code1: SidonCode, code2: SidonCode, sigma: Perm) -> BitMatrix | None:
    """(d+1)x(d+1) matrix M with H1 M = P_sigma H2 (row i of H1 goes to row sigma(i) of H2)."""
    d1 = code1.dim + 1
    sel, pivots_basis = [], []
    for i, r in enumerate(code1.rows):
        v = r
        for b, p in pivots_basis:
            if (v >> p) & 1:
                v ^= b
        if v:
            pivots_basis.append((v, (v & -v).bit_length() - 1))
            sel.append(i)
            if len(sel) == d1:
                break
    if len(sel) < d1:
        return None
    H1 = BitMatrix(d1, d1, tuple(code1.rows[i] for i in sel))
    H2 = BitMatrix(d1, d1, tuple(code2.rows[sigma[i]] for i in sel))
    M = H1.inverse() @ H2
    for i, r in enumerate(code1.rows):
        if M.vecmul(r) != code2.rows[sigma[i]]:
            return None
    return M


def homogeneous_to_affine(M: BitMatrix, dim: int) -> AffineMap:
    mask = (1 << dim) - 1
    rows = tuple(r & mask for r in M.rows[:dim])
    return AffineMap(BitMatrix(dim, dim, rows), M.rows[dim] & mask)


def affine_to_homogeneous(A: AffineMap) -> BitMatrix:
    d = A.n
    return BitMatrix(d + 1, d + 1, tuple(A.matrix.rows) + (A.offset | (1 << d),))


@dataclass
class AutResult:
    order: int
    generators: list[AffineMap]
    permutations: list[Perm]
    gamma_order: int
    orbit_size: int
    blocks: int
    method: str

    def matrices(self) -> list[BitMatrix]:
        return [affine_to_homogeneous(A) for A in self.generators]


def aut_sidon(s: SidonSet, method: str = "code", max_orbit: int = 10**6) -> AutResult:
    """Group of invertible affine maps of F_2^dim fixing s setwise.

    ``method="code"``: Aut(Gamma_S), then the stabiliser of U_S. ``method="direct"``:
    search Aut(Gamma_S) restricted to permutations respecting U_S.
    """
    code = sidon_code(s)
    gamma = build_gamma(s)
    if method == "code":
        G = graph_aut(gamma)
        stab, orbit = subspace_orbit_stabilizer(G, code, max_orbit)
        order = G.order // len(orbit)
        gamma_order, orbit_size = G.order, len(orbit)
    elif method == "direct":
        H = graph_aut(gamma, accept=lambda p: permutation_respects_code(p, code, code))
        stab, order, gamma_order, orbit_size = H.generators, H.order, -1, -1
    else:
        raise ValueError(f"unknown method {method!r}")
    maps = []
    for p in stab:
        M = _affine_from_perm(code, code, p)
        assert M is not None, "stabiliser element without affine realisation"
        maps.append(homogeneous_to_affine(M, s.dim))
    return AutResult(order, maps, list(stab), gamma_order, orbit_size, len(gamma.blocks), method)


def maps_fix_set(s: SidonSet, maps: Sequence[AffineMap]) -> bool:
    pts = set(s.points)
    return all({A(p) for p in s.points} == pts for A in maps)


# --------------------------------------------------------------------------
# Isomorphisms


@dataclass
class SidonIsomorphism:
    source: SidonSet
    target: SidonSet
    matrix: BitMatrix  # homogeneous (d+1)x(d+1), row-vector convention
    sigma: Perm

    @property
    def affine(self) -> AffineMap:
        return homogeneous_to_affine(self.matrix, self.source.dim)

    def verify(self) -> bool:
        return verify_isomorphism(self.source, self.target, self.matrix, self.sigma)

    def to_dict(self) -> dict:
        return {
            "dim": self.source.dim,
            "matrix": [format(r, "x") for r in self.matrix.rows],
            "permutation": list(self.sigma),
            "source": [format(p, "x") for p in self.source.points],
            "target": [format(p, "x") for p in self.target.points],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SidonIsomorphism":
        dim = d["dim"]
        return cls(
            SidonSet(dim, tuple(int(p, 16) for p in d["source"])),
            SidonSet(dim, tuple(int(p, 16) for p in d["target"])),
            BitMatrix(dim + 1, dim + 1, tuple(int(r, 16) for r in d["matrix"])),
            tuple(d["permutation"]),
        )


def verify_isomorphism(s1: SidonSet, s2: SidonSet, M: BitMatrix, sigma: Perm) -> bool:
    """H1 M = P_sigma H2, M has the affine block shape, and sigma respects the codes."""
    if s1.dim != s2.dim or len(s1) != len(s2) or sorted(sigma) != list(range(len(s1))):
        return False
    d = s1.dim
    if (M.nrows, M.ncols) != (d + 1, d + 1):
        return False
    top = 1 << d
    if any(r & top for r in M.rows[:d]) or not M.rows[d] & top:
        return False
    for i, p in enumerate(s1.points):
        if M.vecmul(p | top) != s2.points[sigma[i]] | top:
            return False
    c1, c2 = sidon_code(s1), sidon_code(s2)
    return permutation_respects_code(sigma, c1, c2)


def isom_sidon(s1: SidonSet, s2: SidonSet, max_orbit: int = 10**6) -> SidonIsomorphism | None:
    """An affine bijection carrying s1 onto s2, or None when none exists."""
    if s1.dim != s2.dim or len(s1) != len(s2):
        return None
    try:
        c1, c2 = sidon_code(s1), sidon_code(s2)
    except RankDeficient:
        if affine_span_dim(s1.points) != affine_span_dim(s2.points):
            return None
        raise
    g1, g2 = build_gamma(s1), build_gamma(s2)
    phi = find_isomorphism(g1, g2)
    if phi is None:
        return None
    G2 = graph_aut(g2)
    _, orbit = subspace_orbit_stabilizer(G2, c2, max_orbit)
    moved = transport_key(phi, c1.basis)
    if moved not in orbit:
        return None
    sigma = perm_compose(perm_inverse(orbit[moved]), phi)
    M = _affine_from_perm(c1, c2, sigma)
    if M is None:
        return None
    iso = SidonIsomorphism(s1, s2, M, sigma)
    assert iso.verify()
    return iso
