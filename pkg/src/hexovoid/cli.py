"""Command-line entry point: ``python -m hexovoid <command> ...``.

Every command prints (or writes with ``--out``) one JSON report. Exit
status is 0 iff every check passed; rejected inputs get their own codes.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import ovoid as ov
from . import q8search
from . import report as rp
from .gf import FieldError, FiniteField, is_prime_power
from .hexagon import build_hexagon
from .projgeom import CacheFormatError, PointSet, read_header
from .quadric import pi_section, q7_plus, q8_space

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BAD_Q = 3
EXIT_CACHE = 4
EXIT_RESOURCE = 5

CACHE_ENV = "HEXOVOID_CACHE"

log = logging.getLogger("hexovoid")


class BadQ(ValueError):
    pass


def require_q(q: int, plus: bool = False) -> FiniteField:
    if not is_prime_power(q):
        raise BadQ(f"{q} is not a prime power")
    if plus and q % 3 != 1:
        raise BadQ(f"q = {q} is not 1 mod 3; the Q+(7,q) pipelines need q = 1 mod 3")
    return FiniteField(q)


def cache_path(args, q: int) -> Path | None:
    if args.cache:
        return Path(args.cache)
    d = os.environ.get(CACHE_ENV)
    return Path(d) / f"ovoid_q{q}.pvps" if d else None


def load_or_build_O(args, F: FiniteField):
    H = build_hexagon(F)
    path = cache_path(args, F.q)
    if path is not None and path.exists():
        pts = PointSet.load(path, F)
        if pts.indexer.n != H.space.indexer.n or len(pts) != ov.ovoid_size(F.q):
            raise CacheFormatError(f"{path}: cached set has {len(pts)} points")
        return H, ov.OvoidCandidate(H.space, pts, F.q * F.q + F.q + 1, label="O"), str(path)
    O = ov.build_O(H)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        O.points.save(path)
    return H, O, None


# -- commands ---------------------------------------------------------------


def cmd_field_info(args, rng):
    F = require_q(args.q)
    rep = rp.Report("field-info", F.q, F.info())
    rep.extend("number-theory", rp.number_theory_checks, F)
    return rep


def cmd_quadric_info(args, rng):
    F = require_q(args.q)
    spaces = {"q8": q8_space, "pi": pi_section, "q7plus": q7_plus}
    sp = spaces[args.which](F)
    rep = rp.Report(f"quadric info {args.which}", F.q, F.info())
    rep.data = {
        "name": sp.name,
        "kind": sp.kind,
        "rank": sp.rank,
        "radical_dim": int(len(sp.singular_radical)),
        "points": ov.polar_point_count(F.q, sp.rank, sp.polar_e) if sp.kind != "cone" else None,
        "generators": sp.generator_count if sp.kind != "cone" else None,
        "points_per_generator": sp.points_per_generator if sp.kind != "cone" else None,
    }
    if args.which == "pi":
        rep.extend("quadric", rp.quadric_checks, F)
    return rep


def cmd_hexagon_verify(args, rng):
    F = require_q(args.q, plus=True)
    H = build_hexagon(F)
    rep = rp.Report("hexagon verify", F.q, F.info())
    pairs = args.pairs if args.pairs else (None if F.q <= 4 else 10_000)
    rep.extend("hexagon", rp.hexagon_checks, H, rng, pairs)
    return rep


def cmd_ovoid_build(args, rng):
    F = require_q(args.q, plus=True)
    t = time.perf_counter()
    H, O, cached = load_or_build_O(args, F)
    rep = rp.Report("ovoid build", F.q, F.info())
    rep.timings["build"] = round(time.perf_counter() - t, 3)
    path = cache_path(args, F.q)
    rep.data = {"size": len(O), "m": O.m, "cache": str(path) if path else None, "from_cache": cached is not None}
    rep.extend("ovoid-build", rp.ovoid_build_checks, H, O, exhaustive=F.q <= 7 and not args.reps_only)
    return rep


def cmd_ovoid_verify(args, rng):
    F = require_q(args.q, plus=True)
    H, O, _ = load_or_build_O(args, F)
    rep = rp.Report(f"ovoid verify --mode {args.mode}" + (" --reps-only" if args.reps_only else ""), F.q, F.info())
    rep.data = {"m": O.m, "size": len(O), "perp_targets": list(ov.perp_targets(O))}
    if args.reps_only:
        rep.extend("reps", rp.reps_checks, O, rng)
    else:
        rep.extend("ovoid-verify", rp.ovoid_verify_checks, O, args.mode)
    return rep


def cmd_ovoid_orbits(args, rng):
    F = require_q(args.q, plus=True)
    H = build_hexagon(F)
    rep = rp.Report("ovoid orbits", F.q, F.info())
    rep.extend("orbits", rp.orbit_checks, H)
    return rep


def cmd_ovoid_spectrum(args, rng):
    F = require_q(args.q, plus=True)
    H, O, _ = load_or_build_O(args, F)
    rep = rp.Report("ovoid spectrum", F.q, F.info())
    lines = O.space.lines()
    rep.data = {
        "O": ov.line_spectrum(O, lines),
        "hyperplane_section": ov.line_spectrum(ov.hyperplane_section(O.space), lines),
    }
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("set,intersection,lines\n")
            for name, spec in rep.data.items():
                for k, v in sorted(spec.items()):
                    fh.write(f"{name},{k},{v}\n")
    rep.extend("distinguishing", rp.distinguishing_checks, H, O)
    return rep


def cmd_search_q8(args, rng):
    F = require_q(args.q)
    rep = rp.Report("search-q8", F.q, F.info())
    res = q8search.run_search(F.q, m=args.m, limit=args.limit, allow_q5=args.allow_q5)
    rep.timings.update({k: round(v, 3) for k, v in res.pop("timings").items()})
    rep.data = res
    sols = res["solutions"]
    rep.checks.append(rp.check("q8-found", "at least one invariant solution", True, len(sols) > 0))
    rep.checks.append(rp.check("q8-reverified", "every solution meets every generator in m points", True, res["pass"]))
    return rep


def cmd_cache_inspect(args, rng):
    data = Path(args.file).read_bytes()
    hdr = read_header(data)
    rep = rp.Report("cache inspect", hdr.get("p", 0) ** hdr.get("e", 1))
    rep.data = {"file": str(args.file), "header": hdr}
    return rep


def cmd_verify_all(args, rng):
    F = require_q(args.q, plus=True)
    return rp.verify_all(F.q, rng, reps_only=True if args.reps_only else None, pairs=args.pairs)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    common.add_argument("--no-timings", action="store_true", help="drop timing fields from the JSON")
    common.add_argument("-v", "--verbose", action="store_true")

    def with_q(p):
        p.add_argument("--q", type=int, required=True)
        return p

    parser = argparse.ArgumentParser(prog="hexovoid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    with_q(sub.add_parser("field-info", parents=[common])).set_defaults(func=cmd_field_info)

    quad = sub.add_parser("quadric").add_subparsers(dest="action", required=True)
    p = with_q(quad.add_parser("info", parents=[common]))
    p.add_argument("--which", choices=["q8", "pi", "q7plus"], default="pi")
    p.set_defaults(func=cmd_quadric_info)

    hexa = sub.add_parser("hexagon").add_subparsers(dest="action", required=True)
    p = with_q(hexa.add_parser("verify", parents=[common]))
    p.add_argument("--pairs", type=int, help="random plane pairs (default: all pairs for q <= 4)")
    p.set_defaults(func=cmd_hexagon_verify)

    ovo = sub.add_parser("ovoid").add_subparsers(dest="action", required=True)
    for name, func in (("build", cmd_ovoid_build), ("verify", cmd_ovoid_verify),
                       ("orbits", cmd_ovoid_orbits), ("spectrum", cmd_ovoid_spectrum)):
        p = with_q(ovo.add_parser(name, parents=[common]))
        p.add_argument("--cache", help=f"point-set cache file (default: ${CACHE_ENV}/ovoid_q<q>.pvps)")
        p.set_defaults(func=func, reps_only=False)
        if name in ("build", "verify"):
            p.add_argument("--reps-only", action="store_true")
        if name == "verify":
            p.add_argument("--mode", choices=["perp", "generators", "both"], default="both")
        if name == "spectrum":
            p.add_argument("--csv")

    p = with_q(sub.add_parser("search-q8", parents=[common]))
    p.add_argument("--m", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--allow-q5", action="store_true", help="permit q = 5 (long run)")
    p.set_defaults(func=cmd_search_q8)

    cache = sub.add_parser("cache").add_subparsers(dest="action", required=True)
    p = cache.add_parser("inspect", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_cache_inspect)

    p = with_q(sub.add_parser("verify-all", parents=[common]))
    p.add_argument("--reps-only", action="store_true")
    p.add_argument("--pairs", type=int)
    p.set_defaults(func=cmd_verify_all)
    return parser


def emit(args, payload: dict):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    rng = np.random.default_rng(args.seed)
    try:
        rep = args.func(args, rng)
    except BadQ as exc:
        emit(args, {"command": args.command, "error": str(exc), "pass": False})
        return EXIT_BAD_Q
    except (CacheFormatError, FieldError) as exc:
        code = EXIT_CACHE if isinstance(exc, CacheFormatError) else EXIT_BAD_Q
        emit(args, {"command": args.command, "error": str(exc), "pass": False})
        return code
    except q8search.ResourceCapError as exc:
        emit(args, {"command": args.command, "error": str(exc), "pass": False})
        return EXIT_RESOURCE
    emit(args, rep.as_dict(timings=not args.no_timings))
    return EXIT_OK if rep.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
