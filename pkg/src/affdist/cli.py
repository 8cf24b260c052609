"""Command-line entry point: ``affdist <subcommand>``.

Exit codes: 0 success, 1 input error, 2 budget exceeded (interval result), 3 failed
verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bent import (
    QUASIFIELDS,
    BentSpec,
    construct_mm,
    construct_ps,
    construct_qf,
    expected_bent_distance,
    is_vectorial_bent,
    load_quasifield,
    validate_prequasifield,
)
from .catalog import UnsupportedEntry, apn_catalog, catalog_lookup, kim_entry, save_manifest
from .distance import (
    BudgetExceeded,
    ScanCertificate,
    ScanPreconditionError,
    bounds_report,
    distance_exact,
    distance_report,
    exact_feasible,
    intersection_count,
    verify_certificate,
)
from .gf2 import BitMatrix, FieldSpec, random_affine_permutation
from .sidon import (
    SidonSet,
    affine_basis,
    ellipse,
    extended_affine_basis,
    greedy_complete,
    greedy_census,
    hyperbola,
    is_complete_sidon,
    is_sidon,
    load_sidon,
    max_gerbera_size,
    power_graph,
    save_sidon,
)
from .sidon_iso import SidonIsomorphism, aut_sidon, build_gamma, isom_sidon
from .vbf import VBF, differential_spectrum, load_truth_table, nonlinearity, save_truth_table, walsh_table

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3

log = logging.getLogger("affdist")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    threads: int = 1
    long: bool = False
    output: str | None = None
    as_json: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.threads < 1:
            raise InputError("--threads must be positive")


# --------------------------------------------------------------------------
# Function sources


def _add_function_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("function")
    g.add_argument("--power", type=int, metavar="D", help="x^D over GF(2^n)")
    g.add_argument("--n", type=int, help="field degree")
    g.add_argument("--kim", action="store_true", help="the Kim function over GF(2^6)")
    g.add_argument("--family", help="catalog family (Gold, Kasami, Welch, Niho, Inverse, Dobbertin)")
    g.add_argument("--k", type=int, help="family parameter for Gold/Kasami")
    g.add_argument("--file", help="truth-table file ('n m' header, hex lines)")
    g.add_argument("--modulus", type=lambda s: int(s, 0), default=0, help="field modulus (default table)")


def _function_from_args(args) -> tuple[VBF, FieldSpec | None]:
    chosen = sum(x is not None and x is not False for x in (args.power, args.file, args.family, args.kim or None))
    if chosen != 1:
        raise InputError("give exactly one of --power, --kim, --family, --file")
    if args.file:
        try:
            return load_truth_table(args.file), None
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from None
    if args.kim:
        return kim_entry().instantiate(), FieldSpec(6)
    if args.n is None:
        raise InputError("--n is required")
    try:
        spec = FieldSpec(args.n, args.modulus)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.family:
        params = {"k": args.k} if args.k is not None else {}
        try:
            return catalog_lookup(args.n, args.family, **params).instantiate(spec), spec
        except UnsupportedEntry as exc:
            raise InputError(str(exc)) from None
    from .vbf import vbf_from_power

    try:
        return vbf_from_power(spec, args.power), spec
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    blob = json.dumps(payload, indent=1, sort_keys=True)
    if cfg.output:
        Path(cfg.output).write_text(blob + "\n")
    print(blob if cfg.as_json else text)


# --------------------------------------------------------------------------
# analyze


def cmd_analyze(cfg: RunConfig, args) -> int:
    f, spec = _function_from_args(args)
    W = walsh_table(f)
    ds = differential_spectrum(f)
    vals = W.values[1:] if f.m else np.zeros(1)
    payload = {
        "function": f.label,
        "n": f.n,
        "m": f.m,
        "nonlinearity": nonlinearity(f, W),
        "delta": ds.delta_max,
        "apn": f.n == f.m and ds.delta_max == 2,
        "bent": bool(f.n % 2 == 0 and _is_bent(f)),
        "walsh_min": int(vals.min()) if vals.size else 0,
        "walsh_max": int(vals.max()) if vals.size else 0,
        "bounds": asdict(bounds_report(f, spec)),
    }
    text = "\n".join(
        [
            f"{f.label}: ({f.n},{f.m})-function",
            f"  nl={payload['nonlinearity']}  delta={payload['delta']}  APN={payload['apn']}  bent={payload['bent']}",
            f"  Walsh range (b != 0): [{payload['walsh_min']}, {payload['walsh_max']}]",
            f"  distance bounds: [{payload['bounds']['ngp_lower']}, {payload['bounds']['trivial_upper']}]",
        ]
    )
    _emit(cfg, payload, text)
    return EXIT_OK


def _is_bent(f: VBF) -> bool:
    return f.n >= 2 and is_vectorial_bent(f)


# --------------------------------------------------------------------------
# distance


def cmd_distance(cfg: RunConfig, args) -> int:
    if args.verify:
        return _verify_scan(args.verify, args.rescan)
    f, spec = _function_from_args(args)
    ckpt = None
    if args.checkpoint_dir:
        Path(args.checkpoint_dir).mkdir(parents=True, exist_ok=True)
        digest = hashlib.sha1(f.table.tobytes()).hexdigest()[:12]
        ckpt = Path(args.checkpoint_dir) / f"scan-n{f.n}-{digest}.json"
    try:
        rep = distance_report(
            f, args.strategy, seed=cfg.seed, long=cfg.long, threads=cfg.threads, checkpoint=ckpt, spec=spec
        )
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if rep.witness is not None:
        assert intersection_count(f, rep.witness) == rep.witness_agreement
    if args.cert and rep.certificate is not None:
        rep.certificate.save(args.cert)
    payload = rep.to_dict()
    if rep.exact is not None:
        head = f"d_H({f.label}, affine) = {rep.exact}"
    else:
        head = f"{rep.lower} <= d_H({f.label}, affine) <= {rep.upper}"
    lines = [head, f"  method={rep.method}  LMC={rep.lmc}"]
    if rep.witness_agreement is not None:
        lines.append(f"  witness meets the graph in {rep.witness_agreement} points")
    if rep.certificate is not None:
        lines.append(f"  certificate: {rep.certificate.conclusion} ({len(rep.certificate.centers)} centres)")
    if rep.budget_exceeded:
        lines.append("  budget exceeded: interval only (use --long for dimension 8 and 9 scans)")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_BUDGET if rep.budget_exceeded and rep.exact is None else EXIT_OK


def _verify_scan(path: str, rescan: bool) -> int:
    try:
        cert = ScanCertificate.load(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    problems = verify_certificate(cert, rescan=rescan)
    if problems:
        for p in problems:
            print(f"FAIL: {p}")
        return EXIT_VERIFY
    print(f"OK: {cert.conclusion}")
    return EXIT_OK


# --------------------------------------------------------------------------
# sidon


def _named_set(name: str, dim: int | None, d: int | None) -> SidonSet:
    if dim is None:
        raise InputError("--dim is required with --gen")
    if name == "basis":
        return affine_basis(dim)
    if name == "extended-basis":
        return extended_affine_basis(dim)
    if dim % 2:
        raise InputError(f"{name} needs an even --dim")
    spec = FieldSpec(dim // 2)
    if name == "hyperbola":
        return hyperbola(spec)
    if name == "ellipse":
        return ellipse(spec, with_origin=dim // 2 == 4)
    if name == "power":
        return power_graph(spec, d or 3)
    raise InputError(f"unknown generator {name!r}")


def _load_set(args, which: str = "file") -> SidonSet:
    path = getattr(args, which, None)
    if path:
        try:
            return load_sidon(path)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
    if args.gen:
        return _named_set(args.gen, args.dim, args.d)
    raise InputError("give a Sidon-set file or --gen")


def cmd_sidon(cfg: RunConfig, args) -> int:
    action = args.action
    if action == "census":
        sizes = greedy_census(args.dim, args.seeds, args.seed)
        payload = {"dim": args.dim, "seeds": args.seeds, "sizes": {str(k): len(v) for k, v in sizes.items()}}
        if args.aut:
            orders = {}
            for size, seeds in sizes.items():
                s = greedy_complete(SidonSet(args.dim, ()), seeds[0])
                orders[str(size)] = aut_sidon(s).order
            payload["aut_orders"] = orders
        aut = payload.get("aut_orders", {})
        text = f"dim {args.dim}: " + ", ".join(
            f"size {k} x{v}" + (f" (|Aut| {aut[k]})" if k in aut else "") for k, v in payload["sizes"].items()
        )
        _emit(cfg, payload, text)
        return EXIT_OK
    if action == "isom":
        a, b = load_sidon(args.file), load_sidon(args.other)
        iso = isom_sidon(a, b)
        if iso is None:
            _emit(cfg, {"isomorphic": False}, "not affinely equivalent")
            return EXIT_OK
        payload = {"isomorphic": True, "certificate": iso.to_dict()}
        if args.cert:
            Path(args.cert).write_text(json.dumps(iso.to_dict(), indent=1, sort_keys=True) + "\n")
        _emit(cfg, payload, "affinely equivalent; map rows " + " ".join(payload["certificate"]["matrix"]))
        return EXIT_OK
    if action == "plant":
        s = _load_set(args)
        A = random_affine_permutation(s.dim, np.random.default_rng(cfg.seed))
        img = SidonSet(s.dim, tuple(A(p) for p in s.points))
        if not cfg.output:
            raise InputError("plant needs --output")
        save_sidon(img, cfg.output)
        print(f"wrote image of {len(s)} points under a random affine map to {cfg.output}")
        return EXIT_OK
    s = _load_set(args)
    sid = is_sidon(s.points, s.dim)
    payload = {"dim": s.dim, "size": len(s), "sidon": sid}
    if sid:
        payload["complete"] = is_complete_sidon(s)
        payload["max_gerbera"] = max_gerbera_size(s)
    if action == "complete":
        if not sid:
            raise InputError("input is not a Sidon set")
        s = greedy_complete(s, cfg.seed)
        payload.update(size=len(s), complete=True, points=[format(p, "x") for p in s.points])
    if action == "aut":
        if not sid:
            raise InputError("input is not a Sidon set")
        res = aut_sidon(s)
        payload.update(
            aut_order=res.order,
            gamma_order=res.gamma_order,
            blocks=len(build_gamma(s).blocks),
            generators=[A.to_dict() for A in res.generators],
        )
    text = f"dim {s.dim}, {len(s)} points: Sidon={sid}"
    if sid:
        text += f", complete={payload['complete']}"
    if "aut_order" in payload:
        text += f", |Aut| = {payload['aut_order']}"
    _emit(cfg, payload, text)
    return EXIT_OK


# --------------------------------------------------------------------------
# bent


def _bent_spec_from_args(args, rng) -> BentSpec:
    m, t = args.m, args.t
    if args.spec:
        try:
            d = json.loads(Path(args.spec).read_text())
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read spec: {exc}") from None
        tau = None
        if "tau" in d:
            tau = BitMatrix(m, t, tuple(int(r, 16) if isinstance(r, str) else int(r) for r in d["tau"]))
        return BentSpec(m, t, tau=tau, gamma=d.get("gamma"), sigma=d.get("sigma"), h=d.get("h"), pi=d.get("pi"))
    if args.random:
        return BentSpec.random(m, t, rng)
    gamma = np.arange(1 << m) & ((1 << t) - 1)
    return BentSpec(m, t, gamma=gamma)


def cmd_bent(cfg: RunConfig, args) -> int:
    rng = np.random.default_rng(cfg.seed)
    try:
        spec = _bent_spec_from_args(args, rng)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.quasifield_file:
        q = load_quasifield(args.quasifield_file)
    else:
        q = QUASIFIELDS[args.quasifield](FieldSpec(args.m))
    bad = validate_prequasifield(q)
    if bad is not None:
        raise InputError(f"not a pre-quasifield: {bad}")
    f = {"mm": lambda: construct_mm(spec), "ps": lambda: construct_ps(q, spec), "qf": lambda: construct_qf(q, spec)}[
        args.construction
    ]()
    bent = is_vectorial_bent(f)
    payload = {
        "construction": args.construction,
        "quasifield": q.name,
        "m": args.m,
        "t": args.t,
        "bent": bent,
        "nonlinearity": nonlinearity(f),
        "expected_distance": expected_bent_distance(args.m, args.t),
    }
    if exact_feasible(f):
        payload["distance"] = distance_exact(f, threads=cfg.threads)
    if args.table:
        save_truth_table(f, args.table)
    text = f"{f.label}: bent={bent} nl={payload['nonlinearity']}"
    if "distance" in payload:
        text += f" distance={payload['distance']} (expected {payload['expected_distance']})"
    _emit(cfg, payload, text)
    ok = bent and payload.get("distance", payload["expected_distance"]) == payload["expected_distance"]
    return EXIT_OK if ok else EXIT_VERIFY


# --------------------------------------------------------------------------
# catalog and verify


def cmd_catalog(cfg: RunConfig, args) -> int:
    if args.family:
        if args.n is None:
            raise InputError("--n is required with --family")
        params = {"k": args.k} if args.k is not None else {}
        try:
            entries = [catalog_lookup(args.n, args.family, **params)]
        except UnsupportedEntry as exc:
            raise InputError(str(exc)) from None
    else:
        dims = [args.n] if args.n else range(1, 10)
        entries = [e for n in dims for e in apn_catalog(n)]
    if args.manifest:
        save_manifest(entries, args.manifest)
    payload = {"entries": [e.to_dict() for e in entries]}
    text = "\n".join(
        f"n={e.n:<2} {e.family:<10} {e.name}" + (f"  [{e.note}]" if e.note else "") for e in entries
    )
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, ValueError) as exc:
            print(f"{path}: cannot read ({exc})")
            return EXIT_INPUT
        if "permutation" in d:
            ok = SidonIsomorphism.from_dict(d).verify()
            print(f"{path}: {'OK' if ok else 'FAIL'} isomorphism certificate")
            status = status if ok else EXIT_VERIFY
        else:
            rc = _verify_scan(path, args.rescan)
            if rc != EXIT_OK:
                status = rc
    return status


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="affdist", description="Distance of vectorial functions to affine maps.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomised steps (default 0)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--long", action="store_true", help="allow long scans (dimension 8 and 9)")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("-o", "--output", help="also write the JSON report here")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="nonlinearity, differential uniformity, bounds")
    _add_function_args(a)

    d = sub.add_parser("distance", parents=[common], help="distance to affine maps")
    _add_function_args(d)
    d.add_argument("--strategy", choices=["auto", "exact", "scan", "bounds"], default="auto")
    d.add_argument("--cert", help="write the scan certificate here")
    d.add_argument("--checkpoint-dir", help="resume long scans from per-centre checkpoints")
    d.add_argument("--verify", metavar="CERT", help="re-check a stored certificate instead")
    d.add_argument("--rescan", action="store_true", help="with --verify, rerun the scan")

    s = sub.add_parser("sidon", parents=[common], help="Sidon-set tools")
    s.add_argument("action", choices=["check", "aut", "census", "isom", "complete", "plant"])
    s.add_argument("file", nargs="?")
    s.add_argument("other", nargs="?")
    s.add_argument("--gen", choices=["basis", "extended-basis", "hyperbola", "ellipse", "power"])
    s.add_argument("--dim", type=int)
    s.add_argument("--d", type=int, help="exponent for --gen power")
    s.add_argument("--seeds", type=int, default=100)
    s.add_argument("--aut", action="store_true", help="census: also report automorphism orders")
    s.add_argument("--cert", help="isom: write the certificate here")

    b = sub.add_parser("bent", parents=[common], help="construct and check (2m,t)-bent functions")
    b.add_argument("construction", choices=["mm", "ps", "qf"])
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--t", type=int, required=True)
    b.add_argument("--quasifield", choices=sorted(QUASIFIELDS), default="field")
    b.add_argument("--quasifield-file")
    b.add_argument("--spec", help="JSON with gamma, tau (rows), sigma, h, pi")
    b.add_argument("--random", action="store_true", help="random valid ingredients from --seed")
    b.add_argument("--table", help="write the truth table here")

    c = sub.add_parser("catalog", parents=[common], help="bundled APN functions")
    c.add_argument("--n", type=int)
    c.add_argument("--family")
    c.add_argument("--k", type=int)
    c.add_argument("--manifest", help="write a manifest file")

    v = sub.add_parser("verify", parents=[common], help="re-check certificate files")
    v.add_argument("paths", nargs="+")
    v.add_argument("--rescan", action="store_true")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "distance": cmd_distance,
    "sidon": cmd_sidon,
    "bent": cmd_bent,
    "catalog": cmd_catalog,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = RunConfig(args.command, args.seed, args.threads, args.long, args.output, args.json)
        return COMMANDS[args.command](cfg, args)
    except (InputError, ScanPreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
