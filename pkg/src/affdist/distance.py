"""Distance of an (n,m)-function to the affine maps.

Exact values come from Carlet's Walsh-sum formula when 2^(nm) linear maps are
affordable; for APN functions of dimension 6..9 they come from a witness search
combined with exhaustive gerbera scans over the graph (absence certificates).
"""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .gf2 import AffineMap, BitMatrix, FieldSpec
from .sidon import floor_sqrt_plus_half, max_complete_sidon_size
from .vbf import VBF, differential_spectrum, is_apn, walsh_table

log = logging.getLogger(__name__)

# distance_exact runs when 2^(nm) * m * 2^m stays below this many butterfly steps
EXACT_BUDGET_LOG2 = 38

# (n, minimum target s, gerbera size t) for which every Sidon set of size >= s in
# F_2^n contains a gerbera configuration of size t.
SCAN_LICENSES = {6: (9, 3), 7: (12, 3), 8: (17, 4), 9: (22, 4)}

# seconds between checkpoint writes during a scan
CHECKPOINT_INTERVAL = 5.0


class BudgetExceeded(RuntimeError):
    pass


class ScanPreconditionError(ValueError):
    pass


def intersection_count(f: VBF, A: AffineMap) -> int:
    """|{x : f(x) = A(x)}| = 2^n - d_H(f, A)."""
    if (A.n, A.m) != (f.n, f.m):
        raise ValueError(f"shape mismatch: f is ({f.n},{f.m}), A is ({A.n},{A.m})")
    return int(np.count_nonzero(f.table == A.table()))


# --------------------------------------------------------------------------
# Exact distance


def exact_cost_log2(n: int, m: int) -> float:
    return n * m + math.log2(max(m, 1)) + m


def exact_feasible(f: VBF, budget_log2: float = EXACT_BUDGET_LOG2) -> bool:
    return exact_cost_log2(f.n, f.m) <= budget_log2


def best_affine_approximation(
    f: VBF, budget_log2: float = EXACT_BUDGET_LOG2, threads: int = 1
) -> tuple[int, AffineMap]:
    """Exact d_H(f, A) and the first affine map (in enumeration order) attaining it.

    For every linear Lstar: F_2^m -> F_2^n the inner maximum over the offset b is a
    single Walsh-Hadamard transform of v -> W_f(Lstar(v), v).
    """
    n, m = f.n, f.m
    if exact_cost_log2(n, m) > budget_log2:
        raise BudgetExceeded(
            f"exact distance for ({n},{m}) needs ~2^{exact_cost_log2(n, m):.1f} steps "
            f"(budget 2^{budget_log2}); use the gerbera scan (distance_report) instead"
        )
    W = np.ascontiguousarray(walsh_table(f).values, dtype=np.int64)
    total = 1 << (n * m)
    chunks = max(1, min(threads * 8, total))
    edges = [total * i // chunks for i in range(chunks + 1)]

    def run(i):
        return _kernels.carlet_max(W, n, m, edges[i], edges[i + 1])

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(run, range(chunks)))
    else:
        results = [run(i) for i in range(chunks)]
    best, code, b = results[0]
    for r in results[1:]:
        if r[0] > best:
            best, code, b = r
    best, code, b = int(best), int(code), int(b)
    # Lstar(e_j) is the j-th n-bit digit of code; L(x)_j = Lstar(e_j) . x
    mask = (1 << n) - 1
    lstar = [(code >> (n * j)) & mask for j in range(m)]
    rows = tuple(sum(((lstar[j] >> i) & 1) << j for j in range(m)) for i in range(n))
    A = AffineMap(BitMatrix(n, m, rows), b)
    d = (1 << n) - (best >> m)
    assert best % (1 << m) == 0
    return d, A


def distance_exact(f: VBF, budget_log2: float = EXACT_BUDGET_LOG2, threads: int = 1) -> int:
    return best_affine_approximation(f, budget_log2, threads)[0]


# --------------------------------------------------------------------------
# Bounds


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def lmc_value(n: int, m: int) -> float:
    return (1 - 2.0**-m) * (2.0**n - 2.0 ** (n / 2))


def satisfies_lmc(d: int, n: int, m: int) -> bool:
    """Exact test of d <= (1 - 2^-m)(2^n - 2^(n/2))."""
    q = (1 << m) - 1
    rhs = q * (1 << n) - d * (1 << m)  # must be >= q * 2^(n/2)
    if rhs < 0:
        return False
    return rhs * rhs >= q * q * (1 << n)


@dataclass
class Bounds:
    n: int
    m: int
    delta: int
    ngp_lower: int  # ceil(2^n - sqrt(delta) 2^(n/2) - 1/2)
    ngp_lower_real: float
    trivial_upper: int  # 2^n - n - 1
    lmc_value: float
    cdy: tuple[str, str] | None = None  # exact rationals, bent functions only
    cdy_int: tuple[int, int] | None = None
    sidon_lower: int | None = None  # 2^n - max Sidon size, APN with n = m
    apn_lower: int | None = None  # from |G_f cap G_A| <= sqrt(2) 2^(n/2) + 1/2
    inverse_bounds: tuple[int, int] | None = None  # field inverse, n even
    gold_h2_bounds: tuple[int, int] | None = None  # x^(2^(n/2-1)+1), 4 | n

    @property
    def lower(self) -> int:
        cands = [0, self.ngp_lower]
        for v in (self.sidon_lower, self.apn_lower):
            if v is not None:
                cands.append(v)
        for pair in (self.cdy_int, self.inverse_bounds, self.gold_h2_bounds):
            if pair is not None:
                cands.append(pair[0])
        return max(cands)

    @property
    def upper(self) -> int:
        cands = [self.trivial_upper]
        for pair in (self.cdy_int, self.inverse_bounds, self.gold_h2_bounds):
            if pair is not None:
                cands.append(pair[1])
        return min(cands)


def monomial_exponent(f: VBF, spec: FieldSpec | None = None) -> int | None:
    """The exponent d (1 <= d < 2^n - 1, smallest) with f(x) = x^d, if f is a power map."""
    if f.n != f.m or f.n < 1:
        return None
    spec = spec or FieldSpec(f.n)
    if f.table[0] != 0:
        return None
    exp, logt = spec.log_exp()
    g = spec.generator
    v = int(f.table[g])
    if v == 0:
        return None
    q1 = (1 << f.n) - 1
    # log_g(g) may be nonzero-indexed if g != exp[1]; exp[1] is g by construction
    d = int(logt[v]) % q1 or q1
    if np.array_equal(spec.power_table(d), f.table):
        return d
    return None


def bounds_report(f: VBF, spec: FieldSpec | None = None) -> Bounds:
    from .bent import is_vectorial_bent

    n, m = f.n, f.m
    delta = differential_spectrum(f).delta_max
    N = 1 << n
    # ceil(2^n - 1/2 - sqrt(delta 2^n)) = 2^n - floor(sqrt(delta 2^n) + 1/2)
    ngp = N - floor_sqrt_plus_half(delta * N)
    b = Bounds(
        n=n,
        m=m,
        delta=delta,
        ngp_lower=ngp,
        ngp_lower_real=N - math.sqrt(delta) * 2 ** (n / 2) - 0.5,
        trivial_upper=N - n - 1,
        lmc_value=lmc_value(n, m),
    )
    if n % 2 == 0 and n >= 2 and is_vectorial_bent(f):
        k = Fraction((1 << m) - 1, 1 << m)
        lo = k * (N - (1 << (n // 2)))
        hi = k * (N + (1 << (n // 2)))
        b.cdy = (str(lo), str(hi))
        b.cdy_int = (_ceil_frac(lo), math.floor(hi))
    if n == m and delta == 2:
        b.apn_lower = N - floor_sqrt_plus_half(2 * N)
        if n >= 2:
            b.sidon_lower = N - max_complete_sidon_size(n)
    if n == m and n % 2 == 0 and n >= 2:
        d = monomial_exponent(f, spec)
        q1 = N - 1
        if d is not None:
            cyclo = {(d << i) % q1 for i in range(n)}
            upper = N - (1 << (n // 2)) - 2
            if (N - 2) % q1 in cyclo or (N - 2) in cyclo:
                # ceil(2^n - sqrt(2) 2^(n/2) - 3/2) = 2^n - 1 - floor(sqrt(2^(n+1)) + 1/2)
                b.inverse_bounds = (N - 1 - floor_sqrt_plus_half(2 * N), upper)
            if n % 4 == 0 and ((1 << (n // 2 - 1)) + 1) % q1 in cyclo:
                b.gold_h2_bounds = (N - floor_sqrt_plus_half(2 * N), upper)
    return b


# --------------------------------------------------------------------------
# Centres and their orbits


@dataclass
class CenterOrbits:
    representatives: list[int]
    sizes: list[int]
    generators: list[str]

    def __len__(self):
        return len(self.representatives)


def _graph_mask(f: VBF) -> np.ndarray:
    n = f.n
    mask = np.zeros(1 << (2 * n), dtype=bool)
    mask[np.arange(1 << n) | (f.table << n)] = True
    return mask


def all_centers(f: VBF) -> list[int]:
    return np.flatnonzero(~_graph_mask(f)).tolist()


def graph_automorphisms(f: VBF, spec: FieldSpec | None = None) -> tuple[list[np.ndarray], list[str]]:
    """Affine automorphisms of G_f for a power map, as index permutations of F_2^(2n).

    (x, y) -> (a x, a^d y) for a primitive a, the Frobenius (x, y) -> (x^2, y^2), and
    for quadratic exponents the translations (x, y) -> (x + c, y + f(x + c) + f(x)).
    """
    d = monomial_exponent(f, spec)
    if d is None:
        raise ValueError("graph_automorphisms needs a power function")
    spec = spec or FieldSpec(f.n)
    n, N = f.n, 1 << f.n
    mt = spec.mul_table()
    idx = np.arange(N * N)
    x, y = idx & (N - 1), idx >> n
    a = spec.generator
    ad = spec.pow(a, d)
    gens = [mt[a][x] | (mt[ad][y] << n), mt[x, x] | (mt[y, y] << n)]
    names = [f"mul(a={a:#x}, a^d={ad:#x})", "frobenius"]
    if bin(d).count("1") == 2:
        tab = f.table
        for i in range(n):
            c = 1 << i
            gens.append((x ^ c) | ((y ^ tab[x ^ c] ^ tab[x]) << n))
            names.append(f"translate(c={c:#x})")
    return gens, names


def center_orbit_representatives(f: VBF, spec: FieldSpec | None = None) -> CenterOrbits:
    """Orbit representatives (smallest element of each orbit) of W minus G_f."""
    gens, names = graph_automorphisms(f, spec)
    size = 1 << (2 * f.n)
    idx = np.arange(size)
    rows = np.concatenate([idx] * len(gens))
    cols = np.concatenate(gens)
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(adj, directed=True, connection="weak")
    off_graph = ~_graph_mask(f)
    reps, sizes = [], []
    seen = {}
    counts = np.bincount(labels[off_graph])
    for p in np.flatnonzero(off_graph):
        lab = labels[p]
        if lab not in seen:
            seen[lab] = int(p)
            reps.append(int(p))
            sizes.append(int(counts[lab]))
    return CenterOrbits(reps, sizes, names)


# --------------------------------------------------------------------------
# Gerbera scan


def check_scan_license(n: int, s: int, t: int) -> None:
    if n not in SCAN_LICENSES:
        raise ScanPreconditionError(f"no gerbera license for n={n}; licensed n are {sorted(SCAN_LICENSES)}")
    s_min, t_req = SCAN_LICENSES[n]
    if t != t_req or s < s_min:
        raise ScanPreconditionError(
            f"(n={n}, s={s}, t={t}) is not licensed: need t={t_req} and s>={s_min}"
        )


@dataclass
class ScanCertificate:
    function: str
    n: int
    modulus: int
    target: int
    gerbera_size: int
    centers: list[int]
    group: list[str]
    exhaustive: bool
    found: bool  # a graph of an affine map meeting G_f in >= target points was seen
    max_found: int
    witness: AffineMap | None
    configurations: int
    table: list[int] = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def conclusion(self) -> str:
        if self.found:
            return f"some affine A has |G_f cap G_A| >= {self.target}"
        if self.exhaustive:
            return f"no affine A with |G_f cap G_A| >= {self.target}"
        return f"no affine A with |G_f cap G_A| >= {self.target} through the scanned centres"

    @property
    def lower_bound(self) -> int | None:
        """d_H(f, A) >= 2^n - target + 1 when absence is certified."""
        if self.exhaustive and not self.found:
            return (1 << self.n) - self.target + 1
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witness"] = self.witness.to_dict() if self.witness else None
        d["table"] = "".join(format(v, "x").rjust((self.n + 3) // 4, "0") for v in self.table)
        d["conclusion"] = self.conclusion
        d["modulus"] = format(self.modulus, "#x")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScanCertificate":
        d = dict(d)
        d.pop("conclusion", None)
        n = d["n"]
        w = (n + 3) // 4
        tab = d.get("table", "")
        d["table"] = [int(tab[i : i + w], 16) for i in range(0, len(tab), w)]
        d["modulus"] = int(d["modulus"], 16)
        d["witness"] = AffineMap.from_dict(d["witness"]) if d.get("witness") else None
        return cls(**d)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ScanCertificate":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _scan_one(table, n, w, t, s, stop_at_hit):
    buf = np.zeros(1 << n, dtype=np.int64)
    best, visited, hit = _kernels.scan_center(table, n, int(w), t, s, stop_at_hit, -1, buf)
    return int(best), int(visited), bool(hit), buf


def gerbera_scan(
    f: VBF,
    s: int,
    t: int | None = None,
    centers: list[int] | None = None,
    *,
    spec: FieldSpec | None = None,
    stop_at_hit: bool = True,
    threads: int = 1,
    checkpoint: str | Path | None = None,
    enforce_license: bool = True,
) -> ScanCertificate:
    """Scan w-centred size-t gerbera configurations of G_f for graphs of affine maps
    meeting G_f in at least s points.

    With ``centers=None`` the full set W minus G_f is covered: by orbit
    representatives for power maps, otherwise point by point. The certificate is
    marked exhaustive only when the (n, s, t) combination is licensed and the
    centres cover W minus G_f up to the recorded automorphisms.
    """
    n = f.n
    if f.n != f.m:
        raise ScanPreconditionError("gerbera scans need an (n,n)-function")
    if t is None:
        t = SCAN_LICENSES[n][1] if n in SCAN_LICENSES else n // 2
    licensed = True
    try:
        check_scan_license(n, s, t)
    except ScanPreconditionError:
        if enforce_license:
            raise
        licensed = False
    if 2 * t not in (n, n - 1):
        raise ScanPreconditionError(f"gerbera span dimension 2t={2 * t} must be n or n-1")
    if not is_apn(f):
        raise ScanPreconditionError("gerbera scans apply to APN functions only")
    spec = spec or FieldSpec(n)
    group: list[str] = []
    covered = False
    if centers is None:
        if monomial_exponent(f, spec) is not None:
            orb = center_orbit_representatives(f, spec)
            centers, group = orb.representatives, orb.generators
        else:
            centers = all_centers(f)
        covered = True
    else:
        centers = [int(w) for w in centers]
        graph = _graph_mask(f)
        if any(graph[w] for w in centers):
            raise ScanPreconditionError("centres must lie outside the graph of f")
        covered = len(set(centers)) == (1 << (2 * n)) - (1 << n)

    table = np.ascontiguousarray(f.table, dtype=np.int64)
    state = {"done": {}, "best": -1, "witness": None, "configs": 0}
    ckpt = Path(checkpoint) if checkpoint else None
    if ckpt and ckpt.exists():
        saved = json.loads(ckpt.read_text())
        if saved.get("key") == [f.label, n, s, t, centers[:8], len(centers)]:
            state["done"] = {int(k): v for k, v in saved["done"].items()}
            log.info("resuming scan: %d of %d centres done", len(state["done"]), len(centers))

    t0 = time.perf_counter()
    todo = [w for w in centers if w not in state["done"]]
    results: dict[int, tuple] = {}

    last_flush = [time.perf_counter()]

    def flush(force=False):
        if ckpt and (force or time.perf_counter() - last_flush[0] >= CHECKPOINT_INTERVAL):
            ckpt.write_text(
                json.dumps({"key": [f.label, n, s, t, centers[:8], len(centers)], "done": state["done"]})
            )
            last_flush[0] = time.perf_counter()

    def record(w, res):
        best, visited, hit, buf = res
        results[w] = res
        state["done"][w] = [best, visited, hit, buf.tolist() if best >= 0 else None]
        flush()

    hit_any = any(v[2] for v in state["done"].values())
    if not (hit_any and stop_at_hit):
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                futs = {w: ex.submit(_scan_one, table, n, w, t, s, stop_at_hit) for w in todo}
                for w in todo:
                    res = futs[w].result()
                    record(w, res)
                    if res[2] and stop_at_hit:
                        for fut in futs.values():
                            fut.cancel()
                        break
        else:
            for w in todo:
                res = _scan_one(table, n, w, t, s, stop_at_hit)
                record(w, res)
                if res[2] and stop_at_hit:
                    break

    flush(force=True)
    best, witness_tab, configs, found = -1, None, 0, False
    for w in centers:
        if w not in state["done"]:
            continue
        b, visited, hit, tab = state["done"][w]
        configs += visited
        found = found or hit
        if b > best:
            best, witness_tab = b, tab
    witness = None
    if witness_tab is not None:
        witness = AffineMap.from_table(np.asarray(witness_tab, dtype=np.int64), n, n)
        assert intersection_count(f, witness) == best
    complete = all(w in state["done"] for w in centers)
    return ScanCertificate(
        function=f.label,
        n=n,
        modulus=spec.modulus,
        target=s,
        gerbera_size=t,
        centers=list(centers),
        group=group,
        exhaustive=bool(licensed and covered and complete and not found),
        found=found,
        max_found=max(best, 0),
        witness=witness,
        configurations=configs,
        table=[int(v) for v in f.table],
        wall_clock=round(time.perf_counter() - t0, 3),
    )


def verify_certificate(cert: ScanCertificate, rescan: bool = False) -> list[str]:
    """Re-check a stored certificate; returns a list of problems (empty when valid)."""
    problems = []
    n = cert.n
    if len(cert.table) != 1 << n:
        return ["certificate does not embed a truth table of the right length"]
    f = VBF(n, n, cert.table, cert.function)
    spec = FieldSpec(n, cert.modulus)
    if not is_apn(f):
        problems.append("function is not APN")
    try:
        check_scan_license(n, cert.target, cert.gerbera_size)
    except ScanPreconditionError as exc:
        if cert.exhaustive:
            problems.append(str(exc))
    if cert.witness is not None:
        got = intersection_count(f, cert.witness)
        if got != cert.max_found:
            problems.append(f"witness meets G_f in {got} points, certificate says {cert.max_found}")
    if cert.exhaustive:
        graph = _graph_mask(f)
        if any(graph[w] for w in cert.centers):
            problems.append("a centre lies on the graph")
        if cert.group:
            try:
                orb = center_orbit_representatives(f, spec)
            except ValueError:
                problems.append("group recorded but function is not a power map")
            else:
                if sorted(orb.representatives) != sorted(cert.centers):
                    problems.append("centres are not the orbit representatives of W minus G_f")
        elif len(set(cert.centers)) != (1 << (2 * n)) - (1 << n):
            problems.append("centres do not cover W minus G_f")
    if rescan and not problems:
        again = gerbera_scan(
            f, cert.target, cert.gerbera_size, cert.centers, spec=spec, enforce_license=False
        )
        if again.found != cert.found:
            problems.append("rescan disagrees with the recorded conclusion")
    return problems


# --------------------------------------------------------------------------
# Witness search


def _span_t(n: int) -> int:
    return n // 2 if n % 2 == 0 else (n - 1) // 2


def hill_climb(f: VBF, start: AffineMap, rng: np.random.Generator, steps: int) -> tuple[AffineMap, int]:
    """First-improvement local search over single-bit flips of (matrix, offset)."""
    n, m = f.n, f.m
    cur = start
    cur_val = intersection_count(f, cur)
    nbits = n * m + m
    for _ in range(steps):
        improved = False
        for k in rng.permutation(nbits):
            k = int(k)
            if k < n * m:
                i, j = divmod(k, m)
                rows = list(cur.matrix.rows)
                rows[i] ^= 1 << j
                cand = AffineMap(BitMatrix(n, m, tuple(rows)), cur.offset)
            else:
                cand = AffineMap(cur.matrix, cur.offset ^ (1 << (k - n * m)))
            val = intersection_count(f, cand)
            if val > cur_val:
                cur, cur_val, improved = cand, val, True
                break
        if not improved:
            break
    return cur, cur_val


def witness_search(
    f: VBF,
    seed: int = 0,
    max_centers: int = 64,
    climb_restarts: int = 4,
    spec: FieldSpec | None = None,
) -> tuple[AffineMap, int]:
    """Best affine approximation found by gerbera-seeded candidates plus hill climbing.

    Deterministic for a given seed. Stops early once the Sidon bound is met by an
    APN function, since nothing larger can exist.
    """
    n, m = f.n, f.m
    rng = np.random.default_rng(seed)
    target = None
    if n == m and n >= 2 and is_apn(f):
        target = max_complete_sidon_size(n)
    best_A = AffineMap.constant(n, m, int(f.table[0]))
    best = intersection_count(f, best_A)

    if n == m and n >= 3:
        t = _span_t(n)
        if monomial_exponent(f, spec) is not None:
            centers = center_orbit_representatives(f, spec).representatives
        else:
            pool = np.flatnonzero(~_graph_mask(f))
            centers = rng.permutation(pool)[:max_centers].tolist()
        table = np.ascontiguousarray(f.table, dtype=np.int64)
        for w in centers:
            b, _, _, buf = _scan_one(table, n, w, t, 1 << n, False)
            if b > best:
                best, best_A = b, AffineMap.from_table(buf, n, n)
            if target is not None and best >= target:
                return best_A, best

    starts = [best_A] + [
        AffineMap(
            BitMatrix(n, m, tuple(int(r) for r in rng.integers(0, 1 << m, size=n))),
            int(rng.integers(0, 1 << m)),
        )
        for _ in range(climb_restarts)
    ]
    for A in starts:
        A2, v = hill_climb(f, A, rng, steps=4 * (n * m + m))
        if v > best:
            best, best_A = v, A2
        if target is not None and best >= target:
            break
    return best_A, best


# --------------------------------------------------------------------------
# Reports


@dataclass
class DistanceReport:
    function: str
    n: int
    m: int
    exact: int | None
    lower: int
    upper: int
    bounds: Bounds
    witness: AffineMap | None
    witness_agreement: int | None
    method: str
    lmc: str
    budget_exceeded: bool = False
    certificate: ScanCertificate | None = None

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "n": self.n,
            "m": self.m,
            "exact": self.exact,
            "lower": self.lower,
            "upper": self.upper,
            "method": self.method,
            "lmc": self.lmc,
            "budget_exceeded": self.budget_exceeded,
            "bounds": asdict(self.bounds),
            "witness": self.witness.to_dict() if self.witness else None,
            "witness_agreement": self.witness_agreement,
            "certificate": None
            if self.certificate is None
            else {k: v for k, v in self.certificate.to_dict().items() if k not in ("table", "wall_clock")},
        }


def lmc_status(lower: int, upper: int, n: int, m: int) -> str:
    if not satisfies_lmc(lower, n, m):
        return "violated"
    if satisfies_lmc(upper, n, m):
        return "consistent"
    return "undecided"


def distance_report(
    f: VBF,
    strategy: str = "auto",
    *,
    seed: int = 0,
    long: bool = False,
    threads: int = 1,
    checkpoint: str | Path | None = None,
    spec: FieldSpec | None = None,
) -> DistanceReport:
    """Exact distance when affordable, otherwise witness + gerbera certificate + bounds.

    ``strategy`` is one of "auto", "exact", "scan", "bounds". Scans in dimension 8
    and 9 run only with ``long=True``.
    """
    if strategy not in ("auto", "exact", "scan", "bounds"):
        raise ValueError(f"unknown strategy {strategy!r}")
    n, m, N = f.n, f.m, 1 << f.n
    bounds = bounds_report(f, spec)
    lower, upper = bounds.lower, bounds.upper
    witness, agree, cert = None, None, None
    method = "bounds"
    budget_exceeded = False

    if strategy in ("auto", "exact") and exact_feasible(f):
        d, witness = best_affine_approximation(f, threads=threads)
        agree = N - d
        return DistanceReport(
            f.label, n, m, d, d, d, bounds, witness, agree, "exact", lmc_status(d, d, n, m)
        )
    if strategy == "exact":
        raise BudgetExceeded(f"exact distance for ({n},{m}) exceeds the budget")

    if strategy in ("auto", "scan") and n == m and bounds.delta == 2:
        witness, agree = witness_search(f, seed=seed, spec=spec)
        upper = min(upper, N - agree)
        method = "witness"
        if n >= 2 and agree >= max_complete_sidon_size(n):
            lower = max(lower, N - agree)
            method = "witness+sidon"
        if n in SCAN_LICENSES and (n < 8 or long):
            # even when the Sidon bound already closes the gap, the scan documents it
            while True:
                s = max(agree + 1, SCAN_LICENSES[n][0])
                cert = gerbera_scan(f, s, spec=spec, threads=threads, checkpoint=checkpoint)
                if cert.found:
                    witness, agree = cert.witness, cert.max_found
                    upper = min(upper, N - agree)
                    continue
                if cert.lower_bound is not None:
                    lower = max(lower, cert.lower_bound)
                method += "+scan"
                break
        elif lower < upper:
            budget_exceeded = True
    elif strategy != "bounds":
        budget_exceeded = True

    exact = lower if lower == upper else None
    return DistanceReport(
        f.label,
        n,
        m,
        exact,
        lower,
        upper,
        bounds,
        witness,
        agree,
        method,
        lmc_status(lower, upper, n, m),
        budget_exceeded,
        cert,
    )
