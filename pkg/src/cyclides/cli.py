"""Batch command-line front end.

Subcommands: ``analyze`` (line+circle classification), ``gallery``
(canonical entries and their self-checks), ``darboux`` (the conformal
map, its inverse, and surface pullbacks), ``lines-meeting`` (lines
through three circles), ``takeuchi`` (many-circle sphere recovery).

Exit codes: 0 = confirmed / all checks pass, 1 = checks failed,
2 = malformed input.  Identical inputs and flags produce byte-identical
reports.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import serialize
from .darboux import (
    DarbouxBranch,
    darboux_map_many,
    darboux_inverse,
    pullback_implicit,
)
from .errors import GeometryError, NonIsolatedFamily
from .families import (
    classify_line_circle_surface,
    takeuchi_pipeline,
)
from .gallery import GALLERY, list_entries
from .pluecker import CurveSampler, lines_meeting_three
from .serialize import SchemaError
from .surfaces import is_darboux_cyclide


@dataclass
class RunConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-7
    samples: int = 64
    seed: int = 0
    out: Path = Path(".")
    mesh: bool = False
    csv: bool = False

    def __post_init__(self):
        if self.samples < 8:
            raise SchemaError("--samples must be at least 8")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise SchemaError("tolerances must be positive")
        self.out = Path(self.out)


def _config_from_args(args):
    return RunConfig(
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
        samples=args.samples,
        seed=args.seed,
        out=Path(args.out),
        mesh=getattr(args, "mesh", False),
        csv=getattr(args, "csv", False),
    )


def _add_common_flags(p):
    p.add_argument("--abs-tol", type=float, default=1e-9, dest="abs_tol")
    p.add_argument("--rel-tol", type=float, default=1e-7, dest="rel_tol")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--mesh", action="store_true", help="also write mesh.obj")
    p.add_argument("--csv", action="store_true", help="also write sample CSVs")


def _fail(msg, code=2):
    print(f"error: {msg}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def cmd_analyze(args):
    cfg = _config_from_args(args)
    surface_obj = serialize.load_json(args.surface)
    families_obj = serialize.load_json(args.families)
    surface = serialize.surface_from_json(surface_obj)
    families = serialize.families_from_json(families_obj)
    lines = [f for f in families if f.kind == "Lines"]
    circles = [f for f in families if f.kind == "Circles"]
    cfg.out.mkdir(parents=True, exist_ok=True)
    report_path = cfg.out / "report.json"
    if not lines:
        serialize.dump_json(
            {"confirmed": False, "reason": "NoLineFamily"}, report_path
        )
        return 1
    if not circles:
        serialize.dump_json(
            {"confirmed": False, "reason": "NoCircleFamily"}, report_path
        )
        return 1
    line_family = lines[0]
    circle_family = circles[0]
    samples = np.vstack(
        [line_family.all_points(), circle_family.all_points()]
    )
    try:
        report = classify_line_circle_surface(
            line_family, circle_family, samples, tol=cfg.abs_tol
        )
    except GeometryError as exc:
        serialize.dump_json(
            {"confirmed": False, "reason": type(exc).__name__, "detail": str(exc)},
            report_path,
        )
        return 1
    fitted_degree = report.surface_degree
    obj = {
        "confirmed": report.confirmed,
        "checks": {
            "planes_parallel": report.planes_parallel,
            "single_circle_section": report.single_circle_section,
            "section_degree_consistent": report.reason != "SectionDegreeMismatch",
        },
        "degree": fitted_degree,
        "class": report.quadric_class.value if report.quadric_class else None,
        "declared_degree": surface.degree,
        "residuals": {k: float(v) for k, v in report.residuals.items()},
        "reason": report.reason,
    }
    serialize.dump_json(obj, report_path)
    return 0 if report.confirmed else 1


# ---------------------------------------------------------------------------
# gallery
# ---------------------------------------------------------------------------


def cmd_gallery(args):
    cfg = _config_from_args(args)
    name = args.name
    if name == "list":
        for entry in list_entries():
            print(entry)
        return 0
    if name not in GALLERY:
        print("available entries:", ", ".join(list_entries()), file=sys.stderr)
        return _fail(f"unknown gallery entry {name!r}")
    if name == "torus":
        entry = GALLERY[name](args.major, args.minor)
    else:
        entry = GALLERY[name]()
    cfg.out.mkdir(parents=True, exist_ok=True)
    results = entry.verify()
    report = {
        "entry": entry.name,
        "checks": {
            k: {
                "passed": bool(v.passed),
                "residual": None if v.residual is None else float(v.residual),
                "note": v.note,
            }
            for k, v in sorted(results.items())
        },
        "all_passed": all(v.passed for v in results.values()),
    }
    serialize.dump_json(report, cfg.out / "report.json")
    if entry.surface is not None:
        serialize.dump_json(
            serialize.surface_to_json(entry.surface), cfg.out / "surface.json"
        )
    serialize.dump_json(
        serialize.families_to_json(entry.families), cfg.out / "families.json"
    )
    mesh = entry.mesh()
    if mesh is not None:
        serialize.mesh_to_obj(*mesh, cfg.out / "mesh.obj")
    if cfg.csv and entry.families:
        pts = np.vstack([f.all_points() for f in entry.families.values()])
        serialize.points_to_csv(pts, cfg.out / "samples.csv")
    return 0 if report["all_passed"] else 1


# ---------------------------------------------------------------------------
# darboux
# ---------------------------------------------------------------------------


def cmd_darboux(args):
    cfg = _config_from_args(args)
    if args.inverse and not args.branch:
        return _fail("--inverse requires --branch inside|outside")
    cfg.out.mkdir(parents=True, exist_ok=True)
    if args.surface:
        surface = serialize.surface_from_json(serialize.load_json(args.surface))
        if args.inverse:
            return _fail("--inverse applies to point input, not surfaces")
        pulled = pullback_implicit(surface)
        form = is_darboux_cyclide(pulled)
        serialize.dump_json(
            serialize.surface_to_json(pulled), cfg.out / "pullback.json"
        )
        serialize.dump_json(
            {
                "cyclide": form is not None,
                "leading": None if form is None else form.a,
            },
            cfg.out / "verdict.json",
        )
        return 0
    pts = serialize.points_from_csv(args.points)
    if args.inverse:
        branch = (
            DarbouxBranch.INSIDE_UNIT_BALL
            if args.branch == "inside"
            else DarbouxBranch.OUTSIDE_UNIT_BALL
        )
        try:
            mapped = np.array([darboux_inverse(p, branch) for p in pts])
        except GeometryError as exc:
            return _fail(str(exc))
    else:
        mapped = darboux_map_many(pts)
    serialize.points_to_csv(mapped, cfg.out / "mapped.csv")
    return 0


# ---------------------------------------------------------------------------
# lines-meeting
# ---------------------------------------------------------------------------


def cmd_lines_meeting(args):
    cfg = _config_from_args(args)
    circles = [
        serialize.circle_from_json(serialize.load_json(p))
        for p in (args.circle_a, args.circle_b, args.circle_c)
    ]
    samplers = [CurveSampler.from_circle(c, cfg.samples) for c in circles]
    cfg.out.mkdir(parents=True, exist_ok=True)
    out_path = cfg.out / "lines.json"
    try:
        lines = lines_meeting_three(
            samplers[0], samplers[1], samplers[2], tol=cfg.abs_tol
        )
    except NonIsolatedFamily as exc:
        serialize.dump_json(
            {
                "non_isolated_family": True,
                "occupied_fraction": float(exc.occupied_fraction),
                "lines": [],
            },
            out_path,
        )
        return 0
    except GeometryError as exc:
        return _fail(str(exc))
    serialize.dump_json(
        {
            "non_isolated_family": False,
            "lines": [serialize.line_to_json(l) for l in lines],
        },
        out_path,
    )
    return 0


# ---------------------------------------------------------------------------
# takeuchi
# ---------------------------------------------------------------------------


def cmd_takeuchi(args):
    cfg = _config_from_args(args)
    families = serialize.families_from_json(serialize.load_json(args.families))
    if not families:
        return _fail("families list is empty")
    samples = np.vstack([f.all_points() for f in families])
    cfg.out.mkdir(parents=True, exist_ok=True)
    try:
        result = takeuchi_pipeline(
            families, args.genus, samples, tol=cfg.abs_tol
        )
    except GeometryError as exc:
        serialize.dump_json(
            {"sphere": None, "reason": type(exc).__name__},
            cfg.out / "verdict.json",
        )
        return 1
    obj = {
        "sphere": None
        if result.sphere is None
        else serialize.sphere_to_json(result.sphere),
        "reason": result.reason,
    }
    serialize.dump_json(obj, cfg.out / "verdict.json")
    return 0 if result.sphere is not None else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cyclides",
        description="Analyze surfaces carrying line and circle families.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="line+circle classification pipeline")
    p.add_argument("surface", help="surface JSON path")
    p.add_argument("families", help="families JSON path")
    _add_common_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gallery", help="canonical entries ('list' to enumerate)")
    p.add_argument("name")
    p.add_argument("--R", type=float, default=2.0, dest="major")
    p.add_argument("--r", type=float, default=1.0, dest="minor")
    _add_common_flags(p)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("darboux", help="conformal map, inverse, pullback")
    p.add_argument("--surface", help="surface JSON input")
    p.add_argument("--points", help="points CSV input")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--branch", choices=["inside", "outside"])
    _add_common_flags(p)
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("lines-meeting", help="lines through three circles")
    p.add_argument("circle_a")
    p.add_argument("circle_b")
    p.add_argument("circle_c")
    _add_common_flags(p)
    p.set_defaults(func=cmd_lines_meeting)

    p = sub.add_parser("takeuchi", help="many-circle sphere recovery")
    p.add_argument("families")
    p.add_argument("--genus", type=int, choices=[0, 1], required=True)
    _add_common_flags(p)
    p.set_defaults(func=cmd_takeuchi)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "command", None) == "darboux":
        if not args.surface and not args.points:
            return _fail("darboux needs --surface or --points")
    try:
        return args.func(args)
    except SchemaError as exc:
        return _fail(str(exc))
    except FileNotFoundError as exc:
        return _fail(str(exc))
    except GeometryError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
