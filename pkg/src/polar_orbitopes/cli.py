"""Command-line front end.

Subcommands: ``pencil`` (emit SDPA / JSON pencils), ``member`` (membership
query with margin and tight representation), ``polytope`` (Weyl-orbit
vertices and weight values), ``faces`` (face-orbit representatives),
``verify`` (randomized verification suites as a JSON report).

Exit codes: 0 success, 1 domain error (JSON diagnostics on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import algebra as al
from . import faces as fc
from . import harness as hz
from . import orbitope as ob
from . import schemas
from .errors import OrbitopeError


class UsageError(Exception):
    pass


def _family(label: str) -> al.AlgebraFamily:
    from .errors import ShapeError

    try:
        return al.family_from_label(label)
    except ShapeError as exc:
        raise UsageError(str(exc)) from exc


def _parse_values(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse numbers from {text!r}") from exc


def _load_point_file(path: str, family: al.AlgebraFamily) -> al.PointP:
    import jsonschema

    with open(path) as fh:
        data = json.load(fh)
    try:
        jsonschema.validate(data, schemas.POINT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"{path}: {exc.message}") from exc
    return al.point_from_json(data, family=family)


def parse_point(spec: str, family: al.AlgebraFamily, center: bool = False) -> al.PointP:
    """Point mini-language: ``diag:v1,v2,..``, ``sing:v1,..``, ``json:PATH``
    or a bare ``*.json`` path."""
    if spec.startswith("json:"):
        return _load_point_file(spec[5:], family)
    if spec.endswith(".json"):
        return _load_point_file(spec, family)
    kind, _, rest = spec.partition(":")
    if kind == "diag":
        v = _parse_values(rest)
        if family.kind == "so_mn":
            raise UsageError("use sing: for so_mn points")
        if family.kind == "sl_r" and center:
            v = v - v.mean()
        return al.embed_point(family, v)
    if kind == "sing":
        if family.kind != "so_mn":
            raise UsageError("sing: applies to so_mn only")
        return al.embed_point(family, _parse_values(rest))
    raise UsageError(f"unrecognized point spec {spec!r}")


def _emit(obj: dict, path: str | None) -> None:
    text = ob.dump_json(obj)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_member(args) -> int:
    fam = _family(args.family)
    x = parse_point(args.x, fam, center=args.center)
    y = parse_point(args.y, fam, center=args.center)
    res = ob.member(x, y, tol=args.tol, matrix_check=args.matrix_check)
    _emit({"verdict": res.verdict, "margin": res.margin, "tight": res.tight,
           "family": fam.label}, args.out)
    return 0


def _cmd_pencil(args) -> int:
    fam = _family(args.family)
    x = parse_point(args.x, fam)
    pencils = ob.build_pencils(x)
    if not args.sdpa and not args.json:
        raise UsageError("pencil needs --sdpa and/or --json output paths")
    if args.sdpa:
        ob.write_sdpa(pencils, args.sdpa)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(ob.dump_json(ob.pencils_to_json(pencils, anchor=x)))
    summary = {
        "family": fam.label,
        "blocks": [{"rep": p.rep_tag, "dim": p.dim, "constant": p.constant}
                   for p in pencils],
        "written": {k: v for k, v in (("sdpa", args.sdpa), ("json", args.json)) if v},
    }
    sys.stdout.write(ob.dump_json(summary))
    return 0


def _cmd_polytope(args) -> int:
    fam = _family(args.family)
    x = parse_point(args.x, fam)
    poly = ob.momentum_polytope(x)
    weights = al.fundamental_weight_values(fam, poly.anchor.a, tol=1e-6)
    _emit({
        "family": fam.label,
        "anchor": [float(v) for v in poly.anchor.a],
        "vertices": [[float(u) for u in v] for v in poly.vertices],
        "weight_values": [float(w) for w in weights],
        "weight_tags": al.analytic_weight_tags(fam),
    }, args.out)
    return 0


def _cmd_faces(args) -> int:
    fam = _family(args.family)
    x = parse_point(args.x, fam)
    poly = ob.momentum_polytope(x)
    lat = fc.face_lattice(poly)
    orbits = []
    for oid, members in enumerate(lat.orbits):
        f = lat.faces[members[0]]
        orbits.append({
            "dim": f.dim,
            "vertex_indices": list(f.vertex_set),
            "vertices": [[float(u) for u in poly.vertices[i]] for i in f.vertex_set],
            "functional": [float(v) for v in f.functional],
            "level": float(f.level),
            "orbit_size": len(members),
        })
    orbits.sort(key=lambda o: (o["dim"], tuple(o["vertex_indices"])))
    _emit({
        "family": al.family_to_json(fam),
        "anchor": [float(v) for v in poly.anchor.a],
        "orbits": orbits,
        "counts_by_dim": fc.face_orbit_summary(poly),
    }, args.out)
    return 0


def _cmd_verify(args) -> int:
    fam = _family(args.family)
    x = parse_point(args.x, fam)
    cfg = hz.SampleConfig(seed=args.seed, count=args.count)
    reports = []
    if args.suite in ("theorem1", "all"):
        reports.append(hz.verify_theorem1(x, cfg, margins_csv=args.margins_csv))
    if args.suite in ("kostant", "all"):
        reports.append(hz.verify_kostant(x, cfg))
    if args.suite in ("faces", "all"):
        reports.append(fc.verify_correspondence(x, trials=args.trials, seed=args.seed))
    out = {"family": fam.label, "seed": args.seed, "reports": reports}
    _emit(out, args.out)
    failures = 0
    for rep in reports:
        for v in rep.values():
            if isinstance(v, dict) and "failures" in v:
                failures += v["failures"]
    sys.stdout.write(f"suites: {len(reports)}  failures: {failures}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polar-orbitopes",
        description="Spectrahedral pencils, membership oracles and momentum "
                    "polytopes for orbit hulls of the classical matrix families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_y=False):
        p.add_argument("--family", required=True,
                       help="sl_r:N | so_mn:M,N | sl_h:M")
        p.add_argument("--x", required=True,
                       help="point spec: diag:..., sing:..., json:PATH or *.json")
        if needs_y:
            p.add_argument("--y", required=True, help="query point (same formats)")
        p.add_argument("--out", default=None, help="write JSON output here")

    p = sub.add_parser("member", help="membership query with margin")
    add_common(p, needs_y=True)
    p.add_argument("--tol", type=float, default=ob.MEMBER_TOL)
    p.add_argument("--matrix-check", action="store_true", dest="matrix_check",
                   help="run the eigenvalue path alongside the weight path")
    p.add_argument("--center", action="store_true",
                   help="sl_r only: center diag inputs by trace/n before testing")
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("pencil", help="emit SDPA and/or JSON pencils")
    add_common(p)
    p.add_argument("--sdpa", default=None, help="write SDPA sparse file here")
    p.add_argument("--json", default=None, help="write pencil JSON here")
    p.set_defaults(func=_cmd_pencil, center=False)

    p = sub.add_parser("polytope", help="momentum polytope vertices and weights")
    add_common(p)
    p.set_defaults(func=_cmd_polytope, center=False)

    p = sub.add_parser("faces", help="face-orbit representatives")
    add_common(p)
    p.set_defaults(func=_cmd_faces, center=False)

    p = sub.add_parser("verify", help="run verification suites")
    add_common(p)
    p.add_argument("--suite", choices=["theorem1", "kostant", "faces", "all"],
                   default="all")
    p.add_argument("--count", type=int, default=200, help="sample count")
    p.add_argument("--trials", type=int, default=100, help="face-suite trials")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify, center=False)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(json.dumps({"error": "FileNotFoundError",
                                     "message": str(exc)}) + "\n")
        return 1
    except OrbitopeError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__,
                                     "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
