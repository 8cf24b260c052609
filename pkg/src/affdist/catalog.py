"""Bundled functions: APN power families, the Kim function, and the monomial pairs
(h, A) whose graphs meet in 2^(n/2) + 2 points."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .gf2 import AffineMap, FieldSpec, power_table
from .vbf import VBF, differential_spectrum, is_apn, load_truth_table, vbf_from_polynomial, vbf_from_power

FAMILIES = ("Gold", "Kasami", "Welch", "Niho", "Inverse", "Dobbertin", "Kim", "custom")


class UnsupportedEntry(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: str
    n: int
    exponent: int | None = None
    terms: tuple[tuple[int, int], ...] = ()  # (coefficient, exponent) for polynomials
    table_path: str | None = None
    expected_delta: int = 2
    note: str = ""
    params: dict = field(default_factory=dict)

    def instantiate(self, spec: FieldSpec | None = None) -> VBF:
        spec = spec or FieldSpec(self.n)
        if self.exponent is not None:
            return vbf_from_power(spec, self.exponent, self.name)
        if self.terms:
            return vbf_from_polynomial(spec, list(self.terms), self.name)
        if self.table_path:
            f = load_truth_table(self.table_path)
            return VBF(f.n, f.m, f.table, self.name)
        raise UnsupportedEntry(f"entry {self.name} has no definition")

    def validate(self) -> None:
        f = self.instantiate()
        delta = differential_spectrum(f).delta_max
        if delta != self.expected_delta:
            raise AssertionError(f"{self.name}: expected delta {self.expected_delta}, got {delta}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["terms"] = [list(t) for t in self.terms]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CatalogEntry":
        d = dict(d)
        d["terms"] = tuple(tuple(t) for t in d.get("terms", ()))
        return cls(**d)


def _norm(d: int, n: int) -> int:
    q1 = (1 << n) - 1
    return d % q1 or q1


def cyclotomic_leader(d: int, n: int) -> int:
    """Smallest element of {d 2^i mod 2^n - 1}."""
    q1 = (1 << n) - 1
    d = _norm(d, n)
    return min(_norm(d << i, n) for i in range(n)) if q1 > 1 else d


def gold_exponent(k: int) -> int:
    return (1 << k) + 1


def kasami_exponent(k: int) -> int:
    return (1 << (2 * k)) - (1 << k) + 1


def welch_exponent(t: int) -> int:
    return (1 << t) + 3


def niho_exponent(t: int) -> int:
    if t % 2 == 0:
        return (1 << t) + (1 << (t // 2)) - 1
    return (1 << t) + (1 << ((3 * t + 1) // 2)) - 1


def dobbertin_exponent(t: int) -> int:
    return (1 << (4 * t)) + (1 << (3 * t)) + (1 << (2 * t)) + (1 << t) - 1


# Kim's sextic: x^3 + x^10 + zeta x^24 over GF(2^6) with the default modulus;
# zeta is the first primitive element for which it is APN.
KIM_ZETA = 7


def kim_entry() -> CatalogEntry:
    return CatalogEntry(
        "Kim",
        "Kim",
        6,
        terms=((1, 3), (1, 10), (KIM_ZETA, 24)),
        note=f"x^3 + x^10 + z x^24, z = {KIM_ZETA:#x} (primitive)",
    )


def catalog_lookup(n: int, family: str, **params) -> CatalogEntry:
    """A validated entry; ``k`` selects the Gold/Kasami parameter."""
    fam = family.capitalize() if family.lower() != "kim" else "Kim"
    if fam not in FAMILIES or fam == "custom":
        raise UnsupportedEntry(f"unknown family {family!r}")
    if n < 1:
        raise UnsupportedEntry("n must be positive")
    if fam == "Gold":
        k = params.get("k", 1)
        if not 1 <= k < n or math.gcd(k, n) != 1:
            raise UnsupportedEntry(f"Gold needs 1 <= k < n and gcd(k, n) = 1 (n={n}, k={k})")
        entry = CatalogEntry(f"Gold x^{gold_exponent(k)}", fam, n, _norm(gold_exponent(k), n), params={"k": k})
    elif fam == "Kasami":
        k = params.get("k", 2)
        if not 2 <= k < n or math.gcd(k, n) != 1:
            raise UnsupportedEntry(f"Kasami needs 2 <= k < n and gcd(k, n) = 1 (n={n}, k={k})")
        d = _norm(kasami_exponent(k), n)
        entry = CatalogEntry(f"Kasami x^{d}", fam, n, d, params={"k": k})
    elif fam in ("Welch", "Niho"):
        if n % 2 == 0 or n < 3:
            raise UnsupportedEntry(f"{fam} needs n = 2t + 1")
        t = (n - 1) // 2
        d = _norm((welch_exponent if fam == "Welch" else niho_exponent)(t), n)
        entry = CatalogEntry(f"{fam} x^{d}", fam, n, d, params={"t": t})
    elif fam == "Inverse":
        if n % 2 == 0 or n < 3:
            raise UnsupportedEntry("the inverse map is APN only for odd n")
        t = (n - 1) // 2
        entry = CatalogEntry(
            f"Inverse x^{(1 << n) - 2}",
            fam,
            n,
            (1 << n) - 2,
            params={"t": t},
            note=f"cyclotomic class of 2^(2t)-1 = {(1 << (2 * t)) - 1}",
        )
    elif fam == "Dobbertin":
        if n % 5 or n < 5:
            raise UnsupportedEntry("Dobbertin needs n = 5t")
        t = n // 5
        d = _norm(dobbertin_exponent(t), n)
        entry = CatalogEntry(f"Dobbertin x^{d}", fam, n, d, params={"t": t})
    else:
        if n != 6:
            raise UnsupportedEntry("the Kim function is defined for n = 6")
        entry = kim_entry()
    entry.validate()
    return entry


def apn_catalog(n: int) -> list[CatalogEntry]:
    """Bundled APN entries of dimension n, one per cyclotomic class of exponents."""
    if n == 1:
        return [CatalogEntry("identity", "custom", 1, 1, note="every map F_2 -> F_2 is APN")]
    out: list[CatalogEntry] = []
    seen: set[int] = set()

    def add(entry: CatalogEntry):
        if entry.exponent is not None:
            lead = cyclotomic_leader(entry.exponent, n)
            if lead in seen:
                return
            seen.add(lead)
        out.append(entry)

    for k in range(1, n):
        if math.gcd(k, n) == 1 and k <= n // 2:
            add(catalog_lookup(n, "Gold", k=k))
    for k in range(2, n):
        if math.gcd(k, n) == 1 and k <= n // 2:
            add(catalog_lookup(n, "Kasami", k=k))
    for fam in ("Welch", "Niho", "Inverse", "Dobbertin"):
        try:
            add(catalog_lookup(n, fam))
        except UnsupportedEntry:
            pass
    if n == 6:
        add(kim_entry())
    return out


def theorem13_pair(n: int, which: str) -> tuple[VBF, AffineMap]:
    """(h1, A1) = (x^(2^n-2), x^(2^(n/2))) for even n; (h2, A2) = (x^(2^(n/2-1)+1), x^(2^(n-1))) for 4 | n."""
    spec = FieldSpec(n)
    if which == "h1":
        if n % 2 or n < 2:
            raise ValueError("h1 needs even n")
        h = vbf_from_power(spec, (1 << n) - 2, f"x^{(1 << n) - 2}")
        a = 1 << (n // 2)
    elif which == "h2":
        if n % 4 or n < 4:
            raise ValueError("h2 needs n divisible by 4")
        d = (1 << (n // 2 - 1)) + 1
        h = vbf_from_power(spec, d, f"x^{d}")
        a = 1 << (n - 1)
    else:
        raise ValueError("which must be 'h1' or 'h2'")
    A = AffineMap.from_table(power_table(spec, a), n, n)
    return h, A


# --------------------------------------------------------------------------
# Manifest: JSON list of entries


def save_manifest(entries: list[CatalogEntry], path: str | Path) -> None:
    Path(path).write_text(json.dumps([e.to_dict() for e in entries], indent=1, sort_keys=True) + "\n")


def load_manifest(path: str | Path) -> list[CatalogEntry]:
    base = Path(path).parent
    out = []
    for d in json.loads(Path(path).read_text()):
        e = CatalogEntry.from_dict(d)
        if e.table_path and not Path(e.table_path).is_absolute():
            e = CatalogEntry(**{**asdict(e), "terms": e.terms, "table_path": str(base / e.table_path)})
        out.append(e)
    return out


def all_bundled() -> list[CatalogEntry]:
    return [e for n in range(1, 10) for e in apn_catalog(n)]


def is_bundled_apn(entry: CatalogEntry) -> bool:
    return is_apn(entry.instantiate())

