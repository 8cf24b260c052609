"""Arithmetic in GF(2^n) and linear algebra over GF(2) on machine words.

Bit conventions used across the package:

* A field element is an int whose bit ``i`` is the coefficient of ``alpha**i``,
  ``alpha`` a root of the modulus. Truth-table indices use the same encoding.
* A bit-vector of length ``k`` is an int below ``2**k``; bit ``i`` is coordinate ``i``.
* A :class:`BitMatrix` stores one int per row; bit ``j`` of row ``i`` is entry ``(i, j)``.
  Vectors act from the left: ``x @ M`` is the XOR of the rows selected by ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

# Lexicographically smallest irreducible polynomial of each degree 1..16.
DEFAULT_MODULI = {
    1: 0b10,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
    9: 0b1000000011,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000000001001,
    13: 0b10000000011011,
    14: 0b100000000100001,
    15: 0b1000000000000011,
    16: 0b10000000000101011,
}

MAX_DEGREE = 16


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials over GF(2)."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree at most deg(p)/2."""
    d = p.bit_length() - 1
    if d < 1:
        return False
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(2^n) with a fixed modulus (default: ``DEFAULT_MODULI[n]``)."""

    n: int
    modulus: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in 1..{MAX_DEGREE}, got {self.n}")
        if self.modulus == 0:
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.n])
        if self.modulus.bit_length() - 1 != self.n:
            raise ValueError(f"modulus {self.modulus:#x} does not have degree {self.n}")
        if self.modulus != DEFAULT_MODULI[self.n] and not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.n

    def elements(self) -> range:
        return range(1 << self.n)

    def mul(self, a: int, b: int) -> int:
        return field_mul(self, a, b)

    def pow(self, a: int, e: int) -> int:
        return field_pow(self, a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return field_pow(self, a, (1 << self.n) - 2)

    def trace(self, a: int) -> int:
        return trace(self, a)

    @property
    def generator(self) -> int:
        """First primitive element in encoding order."""
        return _tables(self.n, self.modulus)[2]

    @property
    def trace_mask(self) -> int:
        """Tr(x) = parity(x & trace_mask); bit i of the mask is Tr(alpha^i)."""
        return _trace_mask(self.n, self.modulus)

    def log_exp(self) -> tuple[np.ndarray, np.ndarray]:
        exp, log, _ = _tables(self.n, self.modulus)
        return exp, log

    def power_table(self, d: int) -> np.ndarray:
        """Vector of ``x**d`` for every element x (0**0 = 1)."""
        return power_table(self, d)

    def mul_table(self) -> np.ndarray:
        exp, log = self.log_exp()
        q1 = (1 << self.n) - 1
        x = np.arange(1 << self.n)
        la = log[x][:, None]
        lb = log[x][None, :]
        out = exp[(la + lb) % q1]
        out = np.where((x[:, None] == 0) | (x[None, :] == 0), 0, out)
        return out.astype(np.int64)


def field_mul(spec: FieldSpec, a: int, b: int) -> int:
    return poly_mod(clmul(a, b), spec.modulus)


def field_pow(spec: FieldSpec, a: int, e: int) -> int:
    """Square-and-multiply. 0**0 is defined as 1; nonzero bases reduce e mod 2^n - 1."""
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0:
        return 1
    if a == 0:
        return 0
    e %= (1 << spec.n) - 1
    if e == 0:
        e = (1 << spec.n) - 1
    r = 1
    while e:
        if e & 1:
            r = field_mul(spec, r, a)
        a = field_mul(spec, a, a)
        e >>= 1
    return r


def trace(spec: FieldSpec, a: int) -> int:
    t, x = 0, a
    for _ in range(spec.n):
        t ^= x
        x = field_mul(spec, x, x)
    return t


@lru_cache(maxsize=None)
def _trace_mask(n: int, modulus: int) -> int:
    spec = FieldSpec(n, modulus)
    return sum(trace(spec, 1 << i) << i for i in range(n))


@lru_cache(maxsize=None)
def _tables(n: int, modulus: int) -> tuple[np.ndarray, np.ndarray, int]:
    spec = FieldSpec(n, modulus)
    q1 = (1 << n) - 1
    for g in range(1, 1 << n):
        exp = np.zeros(q1, dtype=np.int64)
        x = 1
        ok = True
        for i in range(q1):
            exp[i] = x
            x = field_mul(spec, x, g)
            if x == 1 and i < q1 - 1:
                ok = False
                break
        if ok:
            log = np.zeros(1 << n, dtype=np.int64)
            log[exp] = np.arange(q1)
            exp.setflags(write=False)
            log.setflags(write=False)
            return exp, log, g
    raise AssertionError("no primitive element")  # unreachable for irreducible moduli


def power_table(spec: FieldSpec, d: int) -> np.ndarray:
    if d < 0:
        raise ValueError("negative exponent")
    q1 = (1 << spec.n) - 1
    if d == 0:
        return np.ones(1 << spec.n, dtype=np.int64)
    exp, log = spec.log_exp()
    out = np.empty(1 << spec.n, dtype=np.int64)
    out[0] = 0
    out[1:] = exp[(log[1:] * (d % q1)) % q1]
    return out


def inner_product(u, v, length: int | None = None) -> int:
    """Dot product over GF(2).

    Accepts two ints (optionally with a declared ``length`` both must fit in) or two
    equal-length bit sequences.
    """
    if isinstance(u, int) and isinstance(v, int):
        if length is not None and (u >> length or v >> length):
            raise ValueError(f"vectors do not fit in {length} bits")
        return parity(u & v)
    u, v = list(u), list(v)
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} != {len(v)}")
    return sum(a & b for a, b in zip(u, v)) & 1


def bits_to_int(bits: Sequence[int]) -> int:
    return sum((b & 1) << i for i, b in enumerate(bits))


def int_to_bits(x: int, length: int) -> list[int]:
    return [(x >> i) & 1 for i in range(length)]


# --------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class BitMatrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        if len(self.rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.rows)}")
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise ValueError(f"row {r:#x} does not fit in {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[int], ncols: int) -> "BitMatrix":
        rows = tuple(rows)
        return cls(len(rows), ncols, rows)

    @classmethod
    def identity(cls, k: int) -> "BitMatrix":
        return cls(k, k, tuple(1 << i for i in range(k)))

    @classmethod
    def zero(cls, r: int, c: int) -> "BitMatrix":
        return cls(r, c, (0,) * r)

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr, dtype=np.int64) & 1
        r, c = arr.shape
        return cls(r, c, tuple(bits_to_int(row) for row in arr))

    def to_array(self) -> np.ndarray:
        return np.array([int_to_bits(r, self.ncols) for r in self.rows], dtype=np.uint8).reshape(
            self.nrows, self.ncols
        )

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def vecmul(self, x: int) -> int:
        """Row vector times matrix: XOR of the rows picked by the bits of x."""
        r, i = 0, 0
        while x:
            if x & 1:
                r ^= self.rows[i]
            x >>= 1
            i += 1
        return r

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.nrows, other.ncols, tuple(other.vecmul(r) for r in self.rows))

    def transpose(self) -> "BitMatrix":
        cols = []
        for j in range(self.ncols):
            cols.append(sum(((r >> j) & 1) << i for i, r in enumerate(self.rows)))
        return BitMatrix(self.ncols, self.nrows, tuple(cols))

    def rank(self) -> int:
        return rank_and_span(self)[0]

    def inverse(self) -> "BitMatrix":
        if self.nrows != self.ncols:
            raise ValueError("not square")
        k = self.nrows
        aug = [r | (1 << (k + i)) for i, r in enumerate(self.rows)]
        for col in range(k):
            piv = next((i for i in range(col, k) if (aug[i] >> col) & 1), None)
            if piv is None:
                raise ValueError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            for i in range(k):
                if i != col and (aug[i] >> col) & 1:
                    aug[i] ^= aug[col]
        return BitMatrix(k, k, tuple(r >> k for r in aug))


def _reduce(rows: list[int], pivots: list[int], x: int) -> int:
    for r, p in zip(rows, pivots):
        if (x >> p) & 1:
            x ^= r
    return x


def rank_and_span(M: BitMatrix) -> tuple[int, BitMatrix]:
    """Rank and reduced row-echelon form (nonzero rows only, pivots ascending).

    The pivot of a row is its lowest set bit, and every pivot column has a single 1,
    so the result is a canonical basis of the row space.
    """
    basis: list[int] = []
    for r in M.rows:
        for b in basis:
            low = b & -b
            if r & low:
                r ^= b
        if r:
            low = r & -r
            basis = [b ^ r if b & low else b for b in basis]
            basis.append(r)
    basis.sort(key=lambda b: b & -b)
    return len(basis), BitMatrix(len(basis), M.ncols, tuple(basis))


def rref_key(vectors: Iterable[int], ncols: int) -> tuple[int, ...]:
    """Hashable canonical key of the span of ``vectors``."""
    return rank_and_span(BitMatrix.from_rows(vectors, ncols))[1].rows


def span_rank(vectors: Iterable[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


# --------------------------------------------------------------------------
# Affine maps and subspaces


@dataclass(frozen=True)
class AffineMap:
    """``x -> x @ matrix + offset`` from GF(2)^n to GF(2)^m."""

    matrix: BitMatrix
    offset: int = 0

    def __post_init__(self):
        if self.offset < 0 or self.offset >> self.matrix.ncols:
            raise ValueError("offset does not fit the output dimension")

    @property
    def n(self) -> int:
        return self.matrix.nrows

    @property
    def m(self) -> int:
        return self.matrix.ncols

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(BitMatrix.identity(n), 0)

    @classmethod
    def constant(cls, n: int, m: int, b: int) -> "AffineMap":
        return cls(BitMatrix.zero(n, m), b)

    @classmethod
    def from_table(cls, table, n: int, m: int) -> "AffineMap":
        """Recover the affine map with this truth table; raises if it is not affine."""
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (1 << n,):
            raise ValueError("table length must be 2^n")
        b = int(table[0])
        rows = tuple(int(table[1 << i]) ^ b for i in range(n))
        A = cls(BitMatrix(n, m, rows), b)
        if not np.array_equal(A.table(), table):
            raise ValueError("table is not affine")
        return A

    def apply(self, x: int) -> int:
        if x < 0 or x >> self.n:
            raise ValueError(f"input {x:#x} does not fit in {self.n} bits")
        return self.matrix.vecmul(x) ^ self.offset

    __call__ = apply

    def table(self) -> np.ndarray:
        tab = np.array([self.offset], dtype=np.int64)
        for r in self.matrix.rows:
            tab = np.concatenate([tab, tab ^ r])
        return tab

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self o inner``: x -> self(inner(x))."""
        if inner.m != self.n:
            raise ValueError("dimension mismatch")
        return AffineMap(inner.matrix @ self.matrix, self.matrix.vecmul(inner.offset) ^ self.offset)

    def is_invertible(self) -> bool:
        return self.n == self.m and self.matrix.rank() == self.n

    def inverse(self) -> "AffineMap":
        inv = self.matrix.inverse()
        return AffineMap(inv, inv.vecmul(self.offset))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "rows": [format(r, "x") for r in self.matrix.rows],
            "offset": format(self.offset, "x"),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AffineMap":
        rows = tuple(int(r, 16) for r in d["rows"])
        return cls(BitMatrix(d["n"], d["m"], rows), int(d["offset"], 16))


def affine_apply(A: AffineMap, x: int) -> int:
    return A.apply(x)


def random_invertible_matrix(k: int, rng: np.random.Generator) -> BitMatrix:
    while True:
        rows = tuple(int(r) for r in rng.integers(0, 1 << k, size=k))
        M = BitMatrix(k, k, rows)
        if M.rank() == k:
            return M


def random_affine_permutation(k: int, rng: np.random.Generator) -> AffineMap:
    return AffineMap(random_invertible_matrix(k, rng), int(rng.integers(0, 1 << k)))


@dataclass(frozen=True)
class AffineSubspace:
    """``offset + span(basis)`` in GF(2)^D, stored in canonical (rref, reduced offset) form."""

    ambient: int
    basis: tuple[int, ...] = field(default=())
    offset: int = 0

    def __post_init__(self):
        vecs = tuple(self.basis)
        rank, rref = rank_and_span(BitMatrix.from_rows(vecs, self.ambient))
        if rank != len(vecs):
            raise ValueError("basis vectors are linearly dependent")
        pivots = [r & -r for r in rref.rows]
        off = self.offset
        for r, p in zip(rref.rows, pivots):
            if off & p:
                off ^= r
        object.__setattr__(self, "basis", rref.rows)
        object.__setattr__(self, "offset", off)

    @classmethod
    def span_of(cls, points: Sequence[int], ambient: int) -> "AffineSubspace":
        """Smallest affine subspace containing ``points``."""
        if not points:
            raise ValueError("empty point set")
        p0 = points[0]
        _, rref = rank_and_span(BitMatrix.from_rows((p ^ p0 for p in points[1:]), ambient))
        return cls(ambient, rref.rows, p0)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, x: int) -> bool:
        x ^= self.offset
        for r in self.basis:
            if x & (r & -r):
                x ^= r
        return x == 0

    def points(self) -> Iterator[int]:
        p = self.offset
        yield p
        for i in range(1, 1 << self.dim):
            # Gray code: flip the basis vector at the lowest set bit of i
            p ^= self.basis[(i & -i).bit_length() - 1]
            yield p
