"""Command-line front end: classes, brandt, graph, spectrum, verify.

Exit codes: 0 success, 1 computation or verification failure, 2 usage
error.  All mathematical values in JSON payloads are decimal strings
(rationals as "a/b"); outputs are byte-deterministic for a fixed cache
state and do not depend on --jobs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import brandt as brandt_mod
from . import graphs as graphs_mod
from . import spectra as spectra_mod
from .cache import (
    CacheIntegrityError,
    cache_path,
    default_cache_dir,
    get_class_set,
    load_class_set,
    save_class_set,
)
from .hermitian import genus_mass
from .quat import ConstructionError, is_prime

__all__ = ["main"]

KNOWN_TABLES_P5 = {
    (1, 2): [[3]],
    (1, 3): [[4]],
    (1, 7): [[8]],
    (1, 11): [[12]],
    (2, 2): [[12, 3], [10, 5]],
    (2, 3): [[34, 6], [20, 20]],
    (2, 7): [[322, 78], [260, 140]],
    (2, 11): [[1164, 300], [1000, 464]],
    (3, 2): [[54, 27, 54], [30, 15, 90], [14, 21, 100]],
    (3, 3): [[292, 180, 648], [200, 200, 720], [168, 168, 784]],
}


def _fstr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit_json(payload: dict, out) -> None:
    out.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="superspecial",
        description=(
            "class sets of quaternionic hermitian lattices, Brandt matrices, "
            "and isogeny graphs"
        ),
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, need_ell=False, need_n=False):
        p.add_argument("--p", type=int, required=True, help="ramified prime")
        p.add_argument("--g", type=int, required=True, help="rank (dimension)")
        if need_n:
            p.add_argument("--n", "--ell", dest="n", type=int, required=True,
                           help="level n (prime ell required when g > 1)")
        if need_ell:
            p.add_argument("--ell", "--n", dest="ell", type=int, required=True,
                           help="isogeny degree prime, != p")
        p.add_argument("--cache-dir", type=Path, default=None)
        p.add_argument("--jobs", type=int, default=1)

    pc = sub.add_parser("classes", help="class set: h and automorphism counts")
    common(pc)
    pc.add_argument("--format", choices=("json", "csv"), default="json")

    pb = sub.add_parser("brandt", help="Brandt matrix B_g(n)")
    common(pb, need_n=True)
    pb.add_argument("--format", choices=("json", "csv"), default="json")
    pb.add_argument("--timing", action="store_true",
                    help="include elapsed_ms (breaks byte determinism)")

    pg = sub.add_parser("graph", help="big/little/enhanced isogeny graph")
    common(pg, need_ell=True)
    pg.add_argument("--kind", choices=("big", "little", "enhanced"),
                    required=True)
    pg.add_argument("--strip-half-edges", action="store_true")
    pg.add_argument("--format", choices=("dot", "json"), default="dot")

    ps = sub.add_parser("spectrum", help="exact spectrum and regularity bound")
    common(ps, need_ell=True)
    ps.add_argument("--kind", choices=("big", "little", "enhanced"),
                    default="big")
    ps.add_argument("--format", choices=("json",), default="json")

    pv = sub.add_parser("verify", help="run the structural identity suite")
    common(pv, need_ell=True)
    pv.add_argument("--format", choices=("json", "text"), default="text")
    return top


def _validate(args, parser) -> None:
    if not is_prime(args.p):
        parser.error(f"--p must be prime (got {args.p})")
    if args.g < 1:
        parser.error(f"--g must be >= 1 (got {args.g})")
    ell = getattr(args, "ell", None)
    if ell is not None and (not is_prime(ell) or ell == args.p):
        parser.error(f"--ell must be a prime different from p (got {ell})")
    n = getattr(args, "n", None)
    if n is not None:
        if n < 1:
            parser.error(f"--n must be >= 1 (got {n})")
        if args.g > 1 and (not is_prime(n) or n == args.p):
            parser.error("for g > 1 the level must be a prime different from p")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")


def _cache_dir(args) -> Path:
    return args.cache_dir if args.cache_dir is not None else default_cache_dir()


def cmd_classes(args, out) -> int:
    cs = get_class_set(args.p, args.g, _cache_dir(args))
    mass = cs.mass()
    if args.format == "csv":
        out.write("index,e\n")
        for t, e in enumerate(cs.e_values):
            out.write(f"{t},{e}\n")
        return 0
    _emit_json({
        "p": args.p,
        "g": args.g,
        "h": cs.h,
        "e": [str(e) for e in cs.e_values],
        "mass": _fstr(mass),
        "cache": str(cache_path(_cache_dir(args), args.p, args.g)),
    }, out)
    return 0


def cmd_brandt(args, out) -> int:
    started = time.monotonic()
    cs = get_class_set(args.p, args.g, _cache_dir(args))
    matrix = brandt_mod.brandt_matrix(cs, args.n, jobs=args.jobs)
    rows = matrix.as_int_rows()
    row_sum = matrix.row_sums()[0] if rows else Fraction(0)
    if args.format == "csv":
        for row in rows:
            out.write(",".join(str(v) for v in row) + "\n")
        return 0
    payload = {
        "p": args.p,
        "g": args.g,
        "n": args.n,
        "h": matrix.h,
        "matrix": [[str(v) for v in row] for row in rows],
        "e": [str(e) for e in matrix.e_values],
        "row_sum": _fstr(row_sum),
    }
    if args.timing:
        payload["elapsed_ms"] = int((time.monotonic() - started) * 1000)
    _emit_json(payload, out)
    return 0


def _build_graph(args, cs):
    if args.kind == "big":
        return graphs_mod.build_big(cs, args.ell)
    little = graphs_mod.build_little(cs, args.ell)
    if args.kind == "little":
        return little
    return graphs_mod.build_enhanced(little).graph


def cmd_graph(args, out) -> int:
    cs = get_class_set(args.p, args.g, _cache_dir(args))
    graph = _build_graph(args, cs)
    if args.strip_half_edges:
        if not graph.has_opposites:
            raise ConstructionError(
                "cannot strip half-edges from a graph without opposites"
            )
        graph = graphs_mod.strip_half_edges(graph)
    if args.format == "dot":
        out.write(graphs_mod.to_dot(graph))
        return 0
    _emit_json(graphs_mod.graph_to_dict(graph), out)
    return 0


def cmd_spectrum(args, out) -> int:
    cs = get_class_set(args.p, args.g, _cache_dir(args))
    graph = _build_graph(args, cs)
    if args.kind == "big":
        rows = graph.adjacency()
        bipartite = False
    elif args.kind == "little":
        rows = [[int(v) for v in row] for row in graph.weighted_adjacency()]
        bipartite = False
    else:
        rows = [[int(v) for v in row] for row in graph.weighted_adjacency()]
        bipartite = True
    report = spectra_mod.ramanujan_report(rows, bipartite=bipartite)
    _emit_json({
        "p": args.p,
        "g": args.g,
        "ell": args.ell,
        "kind": args.kind,
        "char_poly": [str(c) for c in report.char_coefficients],
        "k": str(report.k),
        "bound_squared": str(4 * (report.k - 1)),
        "bound_description": report.bound_description,
        "eigenvalues": [
            {
                "exact": _fstr(ev.exact) if ev.exact is not None else None,
                "interval": [_fstr(ev.lo), _fstr(ev.hi)],
                "multiplicity": ev.multiplicity,
            }
            for ev in report.eigenvalues
        ],
        "verdicts": list(report.verdicts),
        "ramanujan": report.is_ramanujan,
    }, out)
    return 0


def _verify_checks(args):
    """Yield (name, ok, detail) for the full identity suite at (p, g, ell)."""
    p, g, ell = args.p, args.g, args.ell
    cache_dir = _cache_dir(args)

    path = cache_path(cache_dir, p, g)
    if path.exists():
        try:
            cs = load_class_set(path)
            yield "cache-integrity", True, str(path)
        except CacheIntegrityError as exc:
            yield "cache-integrity", False, str(exc)
            return
    else:
        cs = get_class_set(p, g, cache_dir)
        yield "cache-integrity", True, "cache written"

    expected = genus_mass(p, g)
    if expected is not None:
        ok = cs.mass() == expected
        yield "mass-formula", ok, f"{cs.mass()} vs {expected}"

    matrix = brandt_mod.brandt_matrix(cs, ell, jobs=args.jobs)
    ok, report = brandt_mod.row_sum_check(matrix)
    yield "row-sums", ok, f"target {report['target']}"

    ok = brandt_mod.weighted_symmetry_check(matrix)
    yield "weighted-symmetry", ok, "diag(e)^-1 B symmetric"

    if p == 5 and (g, ell) in KNOWN_TABLES_P5:
        try:
            perm = brandt_mod.matches_up_to_permutation(
                matrix, KNOWN_TABLES_P5[(g, ell)]
            )
            yield "table-fixture", perm is not None, f"permutation {perm}"
        except brandt_mod.OrientationError as exc:
            yield "table-fixture", False, str(exc)

    big = graphs_mod.build_big(cs, ell)
    ok = big.adjacency() == matrix.as_int_rows()
    yield "big-adjacency", ok, "Ad(big) = B"

    little = graphs_mod.build_little(cs, ell)
    ad = little.adjacency()
    ok = ad == [list(row) for row in zip(*ad)]
    yield "little-symmetric", ok, "Ad(little) symmetric"
    adw = little.weighted_adjacency()
    ok = [[int(v) for v in row] for row in adw] == matrix.as_int_rows() and all(
        v.denominator == 1 for row in adw for v in row
    )
    yield "little-weighted-adjacency", ok, "Adw(little) = B"

    try:
        enh = graphs_mod.build_enhanced(little)
        h = cs.h
        full = enh.graph.adjacency()
        blocks_ok = all(
            full[i][j] == 0 and full[h + i][h + j] == 0
            and full[i][h + j] == ad[i][j] and full[h + i][j] == ad[i][j]
            for i in range(h) for j in range(h)
        )
        yield "enhanced-structure", blocks_ok, "Ad = [[0,Ad],[Ad,0]], cover verified"
    except ConstructionError as exc:
        yield "enhanced-structure", False, str(exc)

    for name, graph in (("big", big), ("little", little), ("enhanced", enh.graph)):
        yield f"connectivity-{name}", graphs_mod.is_connected(graph), ""

    if g == 1:
        classical = brandt_mod.brandt_g1_classical(p, ell)
        perm = brandt_mod.matches_up_to_permutation(
            matrix, classical.as_int_rows()
        )
        yield "g1-cross-formulation", perm is not None, "ideal route matches"

    rows = matrix.as_int_rows()
    rep = spectra_mod.ramanujan_report(rows)
    yield "spectral-trivial-eigenvalue", True, f"k = {rep.k} is a root (exact)"
    adw_int = [[int(v) for v in row] for row in little.weighted_adjacency()]
    doubled = [
        [0] * cs.h + row for row in adw_int
    ] + [
        row + [0] * cs.h for row in adw_int
    ]
    spec_small = spectra_mod.char_poly(adw_int)
    spec_big = spectra_mod.char_poly(doubled)
    reflected = [c * (-1) ** k for k, c in enumerate(spec_small)]
    ok = _poly_eq_up_to_sign(spec_big, _poly_mul(spec_small, reflected))
    yield "double-cover-spectrum", ok, "char(enh) = +-char(B)(x)char(B)(-x)"


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_eq_up_to_sign(a, b):
    return a == b or a == [-c for c in b]


def cmd_verify(args, out) -> int:
    checks = []
    failed = False
    for name, ok, detail in _verify_checks(args):
        checks.append({"name": name, "ok": ok, "detail": detail})
        if not ok:
            failed = True
    if args.format == "json":
        _emit_json({
            "p": args.p, "g": args.g, "ell": args.ell,
            "checks": checks,
            "ok": not failed,
        }, out)
    else:
        for c in checks:
            status = "pass" if c["ok"] else "FAIL"
            detail = f"  ({c['detail']})" if c["detail"] else ""
            out.write(f"[{status}] {c['name']}{detail}\n")
        out.write(("all checks passed" if not failed else "FAILURES present") + "\n")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    out = sys.stdout
    handlers = {
        "classes": cmd_classes,
        "brandt": cmd_brandt,
        "graph": cmd_graph,
        "spectrum": cmd_spectrum,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args, out)
    except (CacheIntegrityError, ConstructionError, ArithmeticError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
