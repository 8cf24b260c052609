"""Pre-quasifields and three families of (2m, t)-bent functions.

Truth tables of the constructed functions are indexed by ``x + 2^m * y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, FieldSpec, power_table
from .vbf import VBF, walsh_table


@dataclass(frozen=True, eq=False)
class PreQuasifield:
    """(F_2^m, +, star) with ``star[a, b] = a star b``."""

    m: int
    star: np.ndarray
    name: str = ""

    def __post_init__(self):
        tab = np.array(self.star, dtype=np.int64)
        q = 1 << self.m
        if tab.shape != (q, q):
            raise ValueError(f"star table must be {q}x{q}, got {tab.shape}")
        if tab.min() < 0 or tab.max() >= q:
            raise ValueError(f"star entries must be {self.m}-bit values")
        tab.setflags(write=False)
        object.__setattr__(self, "star", tab)

    def __call__(self, a: int, b: int) -> int:
        return int(self.star[a, b])

    def division_table(self) -> np.ndarray:
        """``div[x, y]`` = the a with a star y = x for y != 0, and 0 for y = 0."""
        q = 1 << self.m
        div = np.zeros((q, q), dtype=np.int64)
        a = np.arange(q)
        for y in range(1, q):
            div[self.star[:, y], y] = a
        return div


def field_quasifield(spec: FieldSpec) -> PreQuasifield:
    return PreQuasifield(spec.n, spec.mul_table(), f"GF(2^{spec.n})")


def twisted_quasifield(spec: FieldSpec, k: int = 1) -> PreQuasifield:
    """a star b = a * b^(2^k); left-distributive because Frobenius is additive."""
    if math.gcd(k, spec.n) != 1:
        raise ValueError(f"twist exponent k={k} must be coprime to m={spec.n}")
    mt = spec.mul_table()
    frob = power_table(spec, 1 << k)
    return PreQuasifield(spec.n, mt[:, frob], f"GF(2^{spec.n}) twisted by 2^{k}")


QUASIFIELDS = {"field": field_quasifield, "twisted": twisted_quasifield}


@dataclass(frozen=True)
class Violation:
    axiom: int
    witness: tuple[int, ...]
    message: str

    def __str__(self):
        return f"axiom ({self.axiom}) fails at {self.witness}: {self.message}"


def validate_prequasifield(q: PreQuasifield) -> Violation | None:
    """Check the three axioms exhaustively; returns the first violation or None."""
    star = q.star
    size = 1 << q.m
    bad = np.flatnonzero(star[:, 0])
    if bad.size:
        return Violation(1, (int(bad[0]), 0), "x star 0 != 0")
    bad = np.flatnonzero(star[0, :])
    if bad.size:
        return Violation(1, (0, int(bad[0])), "0 star x != 0")
    y = np.arange(size)
    for x in range(size):
        row = star[x]
        # row[y ^ z] == row[y] ^ row[z] for all y, z
        lhs = row[np.bitwise_xor.outer(y, y)]
        rhs = np.bitwise_xor.outer(row, row)
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            yy, zz = diff[0]
            return Violation(2, (x, int(yy), int(zz)), "x star (y+z) != x star y + x star z")
    for a in range(1, size):
        if len(np.unique(star[:, a])) != size:
            return Violation(3, (a,), "x -> x star a is not a bijection")
        if len(np.unique(star[a, :])) != size:
            return Violation(3, (a,), "x -> a star x is not a bijection")
    return None


def star_divide(q: PreQuasifield, x: int, y: int) -> int:
    if y == 0:
        return 0
    hits = np.flatnonzero(q.star[:, y] == x)
    if hits.size != 1:
        raise ValueError("star table is not a pre-quasifield")
    return int(hits[0])


# --------------------------------------------------------------------------
# Ingredients


def _is_permutation(tab: np.ndarray, m: int) -> bool:
    return tab.shape == (1 << m,) and len(np.unique(tab)) == 1 << m


def _is_balanced(tab: np.ndarray, m: int, t: int) -> bool:
    counts = np.bincount(tab, minlength=1 << t)
    return counts.shape[0] == 1 << t and bool((counts == 1 << (m - t)).all())


def coordinate_projection(m: int, t: int) -> BitMatrix:
    """x -> lowest t bits of x (surjective linear)."""
    return BitMatrix(m, t, tuple((1 << i) if i < t else 0 for i in range(m)))


def trace_projection(spec: FieldSpec, t: int) -> BitMatrix:
    """x -> (Tr(x), Tr(g x), .., Tr(g^(t-1) x)) for the field generator g."""
    rows = []
    gs = [spec.pow(spec.generator, j) for j in range(t)]
    for i in range(spec.n):
        rows.append(sum(spec.trace(spec.mul(gs[j], 1 << i)) << j for j in range(t)))
    return BitMatrix(spec.n, t, tuple(rows))


@dataclass(frozen=True, eq=False)
class BentSpec:
    """Ingredients for the constructions.

    ``tau`` is an m x t BitMatrix acting on row vectors (x -> x tau); gamma, h are
    (m, t) truth tables, sigma and pi are permutations of F_2^m.
    """

    m: int
    t: int
    tau: BitMatrix | None = None
    gamma: np.ndarray | None = None
    sigma: np.ndarray | None = None
    h: np.ndarray | None = None
    pi: np.ndarray | None = None
    checks: tuple[str, ...] = field(default=("gamma", "tau", "sigma", "pi"))

    def __post_init__(self):
        m, t = self.m, self.t
        if not 1 <= t <= m:
            raise ValueError(f"need 1 <= t <= m, got m={m}, t={t}")
        q = 1 << m
        ident = np.arange(q, dtype=np.int64)
        conv = {}
        for name, default in (("gamma", None), ("sigma", ident), ("h", np.zeros(q, np.int64)), ("pi", ident)):
            val = getattr(self, name)
            if val is None:
                val = default
            if val is not None:
                val = np.array(val, dtype=np.int64).reshape(-1)
                if val.shape != (q,):
                    raise ValueError(f"{name} must have 2^{m} entries")
                val.setflags(write=False)
            conv[name] = val
        for name, val in conv.items():
            object.__setattr__(self, name, val)
        tau = self.tau if self.tau is not None else coordinate_projection(m, t)
        object.__setattr__(self, "tau", tau)
        if (tau.nrows, tau.ncols) != (m, t):
            raise ValueError(f"tau must be an {m}x{t} matrix")
        if tau.rank() != t:
            raise ValueError("tau is not surjective (rank < t)")
        if self.gamma is not None and not _is_balanced(self.gamma, m, t):
            raise ValueError("gamma is not balanced")
        if self.h.max() >= 1 << t or self.h.min() < 0:
            raise ValueError(f"h must take {t}-bit values")
        if not _is_permutation(self.sigma, m):
            raise ValueError("sigma is not invertible")
        if not _is_permutation(self.pi, m):
            raise ValueError("pi is not invertible")

    def tau_table(self) -> np.ndarray:
        return _linear_table(self.tau)

    @classmethod
    def random(cls, m: int, t: int, rng: np.random.Generator) -> "BentSpec":
        from .gf2 import random_invertible_matrix

        q = 1 << m
        basis = random_invertible_matrix(m, rng)
        tau = BitMatrix(m, t, tuple(r & ((1 << t) - 1) for r in basis.rows))
        gamma = rng.permutation(np.repeat(np.arange(1 << t), q >> t))
        return cls(
            m,
            t,
            tau=tau,
            gamma=gamma,
            sigma=rng.permutation(q),
            h=rng.integers(0, 1 << t, size=q),
            pi=rng.permutation(q),
        )


def _linear_table(M: BitMatrix) -> np.ndarray:
    tab = np.zeros(1, dtype=np.int64)
    for r in M.rows:
        tab = np.concatenate([tab, tab ^ r])
    return tab


def _pairs(m: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << (2 * m))
    return idx & ((1 << m) - 1), idx >> m


def construct_mm(spec: BentSpec, field: FieldSpec | None = None) -> VBF:
    """f(x, y) = tau(x * pi(y)) + h(y) with field multiplication."""
    field = field or FieldSpec(spec.m)
    x, y = _pairs(spec.m)
    prod = field.mul_table()[x, spec.pi[y]]
    tab = spec.tau_table()[prod] ^ spec.h[y]
    return VBF(2 * spec.m, spec.t, tab, f"MM(m={spec.m}, t={spec.t})")


def construct_ps(q: PreQuasifield, spec: BentSpec) -> VBF:
    """f(x, y) = gamma(x star-divided by y)."""
    if spec.gamma is None:
        raise ValueError("construct_ps needs a balanced gamma")
    if q.m != spec.m:
        raise ValueError("quasifield and spec dimensions differ")
    x, y = _pairs(spec.m)
    tab = spec.gamma[q.division_table()[x, y]]
    return VBF(2 * spec.m, spec.t, tab, f"PS[{q.name}](m={spec.m}, t={spec.t})")


def construct_qf(q: PreQuasifield, spec: BentSpec) -> VBF:
    """f(x, y) = tau(sigma(y) star x) + h(y)."""
    if q.m != spec.m:
        raise ValueError("quasifield and spec dimensions differ")
    x, y = _pairs(spec.m)
    tab = spec.tau_table()[q.star[spec.sigma[y], x]] ^ spec.h[y]
    return VBF(2 * spec.m, spec.t, tab, f"QF[{q.name}](m={spec.m}, t={spec.t})")


def is_vectorial_bent(f: VBF) -> bool:
    if f.n % 2:
        raise ValueError("bent functions need an even number of inputs")
    if f.m > f.n // 2:
        return False
    W = walsh_table(f)
    target = 1 << (f.n // 2)
    for b in range(1, 1 << f.m):
        if not (np.abs(W.row(b)) == target).all():
            return False
    return True


def expected_bent_distance(m: int, t: int) -> int:
    """(1 - 2^-t)(2^(2m) - 2^m), always an integer."""
    return ((1 << t) - 1) * ((1 << (2 * m)) - (1 << m)) >> t


# --------------------------------------------------------------------------
# Quasifield file: "m" then 2^m rows of 2^m hex entries.


def format_quasifield(q: PreQuasifield) -> str:
    lines = [str(q.m)]
    lines += [" ".join(format(int(v), "x") for v in row) for row in q.star]
    return "\n".join(lines) + "\n"


def parse_quasifield(text: str, name: str = "") -> PreQuasifield:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must be 'm'")
    m = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != 1 << m or any(len(r) != 1 << m for r in rows):
        raise ValueError(f"expected {1 << m} rows of {1 << m} entries")
    return PreQuasifield(m, [[int(v, 16) for v in r] for r in rows], name)


def load_quasifield(path: str | Path) -> PreQuasifield:
    path = Path(path)
    return parse_quasifield(path.read_text(), path.name)


def save_quasifield(q: PreQuasifield, path: str | Path) -> None:
    Path(path).write_text(format_quasifield(q))
