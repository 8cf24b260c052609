"""Vectorial Boolean functions: truth tables, Walsh spectra, differential uniformity."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .gf2 import FieldSpec, power_table

# Above this many Walsh coefficients the table is computed row by row on demand.
DENSE_WALSH_LIMIT = 1 << 24


def _parity_lut(bits: int) -> np.ndarray:
    lut = np.zeros(1 << bits, dtype=np.int8)
    for i in range(bits):
        lut[1 << i : 2 << i] = lut[: 1 << i] ^ 1
    return lut


@dataclass(frozen=True, eq=False)
class VBF:
    """An (n,m)-function given by its truth table, ``table[x] = f(x)``."""

    n: int
    m: int
    table: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        tab = np.array(self.table, dtype=np.int64).reshape(-1)
        if tab.shape[0] != 1 << self.n:
            raise ValueError(f"truth table must have 2^{self.n} entries, got {tab.shape[0]}")
        if tab.size and (tab.min() < 0 or tab.max() >= 1 << self.m):
            raise ValueError(f"entries must be {self.m}-bit values")
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other):
        if not isinstance(other, VBF):
            return NotImplemented
        return self.n == other.n and self.m == other.m and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.m, self.table.tobytes()))

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"VBF(n={self.n}, m={self.m}{tag})"

    def is_affine(self) -> bool:
        b = self.table[0]
        tab = np.array([b], dtype=np.int64)
        for i in range(self.n):
            tab = np.concatenate([tab, tab ^ (self.table[1 << i] ^ b)])
        return bool(np.array_equal(tab, self.table))


def vbf_from_power(spec: FieldSpec, d: int, label: str | None = None) -> VBF:
    if not 1 <= d < 1 << spec.n:
        raise ValueError(f"exponent must be in 1..2^{spec.n}-1")
    return VBF(spec.n, spec.n, power_table(spec, d), label or f"x^{d} over GF(2^{spec.n})")


def vbf_from_polynomial(spec: FieldSpec, terms: list[tuple[int, int]], label: str = "") -> VBF:
    """Sum of monomials ``coef * x^exp``."""
    tab = np.zeros(1 << spec.n, dtype=np.int64)
    mt = spec.mul_table()
    for coef, e in terms:
        tab ^= mt[coef][power_table(spec, e)]
    return VBF(spec.n, spec.n, tab, label)


class WalshTable:
    """All coefficients W_f(a, b) = sum_x (-1)^(b.f(x) + a.x), indexed ``[b, a]``.

    Materialised densely when 2^(n+m) <= DENSE_WALSH_LIMIT, otherwise rows are
    produced on demand by :meth:`row`.
    """

    def __init__(self, f: VBF):
        self.f = f
        self.n, self.m = f.n, f.m
        self._dense = None
        if (1 << (self.n + self.m)) <= DENSE_WALSH_LIMIT:
            self._dense = self._rows(np.arange(1 << self.m))
            self._dense.setflags(write=False)

    def _rows(self, bs: np.ndarray) -> np.ndarray:
        lut = _parity_lut(self.m)
        signs = 1 - 2 * lut[np.bitwise_and.outer(bs, self.f.table)].astype(np.int64)
        _kernels.fwht_rows(signs)
        return signs

    def row(self, b: int) -> np.ndarray:
        if self._dense is not None:
            return self._dense[b]
        return self._rows(np.array([b]))[0]

    @property
    def values(self) -> np.ndarray:
        if self._dense is None:
            raise MemoryError("Walsh table too large to materialise; use row(b)")
        return self._dense

    def __getitem__(self, ab: tuple[int, int]) -> int:
        a, b = ab
        return int(self.row(b)[a])

    def max_abs_nontrivial(self) -> int:
        """max |W_f(a,b)| over b != 0."""
        if self._dense is not None:
            return int(np.abs(self._dense[1:]).max()) if self.m else 0
        return max(int(np.abs(self.row(b)).max()) for b in range(1, 1 << self.m))


def walsh_table(f: VBF) -> WalshTable:
    return WalshTable(f)


def nonlinearity(f: VBF, walsh: WalshTable | None = None) -> int:
    walsh = walsh or walsh_table(f)
    return (1 << (f.n - 1)) - walsh.max_abs_nontrivial() // 2


@dataclass(frozen=True, eq=False)
class DifferentialSpectrum:
    n: int
    m: int
    delta_max: int
    table: np.ndarray  # table[a, b] = #{x : f(x+a) + f(x) = b}

    def count(self, a: int, b: int) -> int:
        return int(self.table[a, b])


def differential_spectrum(f: VBF) -> DifferentialSpectrum:
    N, M = 1 << f.n, 1 << f.m
    x = np.arange(N)
    ddt = np.zeros((N, M), dtype=np.int64)
    for a in range(N):
        ddt[a] = np.bincount(f.table[x ^ a] ^ f.table, minlength=M)
    ddt.setflags(write=False)
    delta = int(ddt[1:].max()) if N > 1 else 0
    return DifferentialSpectrum(f.n, f.m, delta, ddt)


def is_apn(f: VBF) -> bool:
    if f.n != f.m:
        raise ValueError("APN test requires n == m")
    x = np.arange(1 << f.n)
    for a in range(1, 1 << f.n):
        if np.bincount(f.table[x ^ a] ^ f.table).max() > 2:
            return False
    return True


def graph_of(f: VBF, homogenize: bool = True):
    """Graph {(x, f(x))} as a SidonSet candidate.

    With ``homogenize`` the points live in F_2^(n+m) + 1 (dimension n+m+1, top bit set);
    otherwise in F_2^(n+m).
    """
    from .sidon import SidonSet

    x = np.arange(1 << f.n, dtype=np.int64)
    pts = x | (f.table << f.n)
    dim = f.n + f.m
    if homogenize:
        pts = pts | (1 << dim)
        dim += 1
    return SidonSet(dim, tuple(int(p) for p in pts))


def component(f: VBF, v: int) -> VBF:
    lut = _parity_lut(f.m)
    return VBF(f.n, 1, lut[f.table & v].astype(np.int64), f"{v:#x}.f" if not f.label else f"{v:#x}.({f.label})")


# --------------------------------------------------------------------------
# Truth-table text format: "n m" then 2^n hex lines.


def format_truth_table(f: VBF) -> str:
    lines = [f"{f.n} {f.m}"]
    lines += [format(int(v), "x") for v in f.table]
    return "\n".join(lines) + "\n"


def parse_truth_table(text: str, label: str = "") -> VBF:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty truth-table file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n m'")
    n, m = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != 1 << n:
        raise ValueError(f"expected {1 << n} table lines, found {len(body)}")
    try:
        tab = [int(v, 16) for v in body]
    except ValueError as exc:
        raise ValueError(f"bad hex entry: {exc}") from None
    return VBF(n, m, tab, label)


def load_truth_table(path: str | Path) -> VBF:
    path = Path(path)
    return parse_truth_table(path.read_text(), label=path.name)


def save_truth_table(f: VBF, path: str | Path) -> None:
    Path(path).write_text(format_truth_table(f))
