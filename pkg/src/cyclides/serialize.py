"""JSON, CSV, and OBJ interchange.

Wire formats:

* polynomial: ``{"terms": [{"coef": c, "pow": [i, j, k]}, ...]}``
* surface: polynomial plus optional ``"name"``
* circle: ``{"center": [x,y,z], "radius": r, "normal": [a,b,c]}``;
  sphere analogous without the normal
* line: array of 6 reals, or ``[re, im]`` pairs for complex lines
* family: ``{"kind": "Circles"|"Lines",
  "curves": [{"param": t, "points": [[x,y,z], ...]}, ...]}``
* reports: plain JSON objects with sorted keys (byte-stable)
* points CSV: header row ``x,y,z``
* OBJ: ASCII vertices and triangular faces
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .circles import Circle3, Sphere
from .families import CurveFamily, SampledCurve
from .polynomial import MultiPoly
from .pluecker import PluckerLine
from .surfaces import ImplicitSurface


class SchemaError(ValueError):
    """Malformed interchange data."""


# -- polynomials / surfaces --------------------------------------------------


def poly_to_json(poly):
    return {
        "terms": [
            {"coef": c, "pow": list(p)} for p, c in sorted(poly.terms.items())
        ]
    }


def poly_from_json(obj):
    try:
        terms = {tuple(t["pow"]): float(t["coef"]) for t in obj["terms"]}
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad polynomial JSON: {exc}") from exc
    return MultiPoly(terms)


def surface_to_json(surface):
    out = poly_to_json(surface.poly)
    if surface.name:
        out["name"] = surface.name
    return out


def surface_from_json(obj):
    return ImplicitSurface(poly_from_json(obj), obj.get("name"))


# -- circles / spheres -------------------------------------------------------


def circle_to_json(circle):
    return {
        "center": [float(v) for v in circle.center],
        "radius": float(circle.radius),
        "normal": [float(v) for v in circle.normal],
    }


def circle_from_json(obj):
    try:
        return Circle3(obj["center"], float(obj["radius"]), obj["normal"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad circle JSON: {exc}") from exc


def sphere_to_json(sphere):
    return {
        "center": [float(v) for v in sphere.center],
        "radius": float(sphere.radius),
    }


# -- lines ---------------------------------------------------------------------


def line_to_json(line):
    p = line.p
    if np.iscomplexobj(p):
        return [[float(v.real), float(v.imag)] for v in p]
    return [float(v) for v in p]


def line_from_json(obj):
    arr = np.asarray(obj)
    if arr.ndim == 2 and arr.shape == (6, 2):
        return PluckerLine(arr[:, 0] + 1j * arr[:, 1])
    if arr.shape == (6,):
        return PluckerLine(arr.astype(np.float64))
    raise SchemaError(f"bad line JSON shape {arr.shape}")


# -- families ------------------------------------------------------------------


def family_to_json(family):
    return {
        "kind": family.kind,
        "curves": [
            {
                "param": float(c.param),
                "points": [[float(v) for v in row] for row in c.points],
            }
            for c in family.curves
        ],
    }


def family_from_json(obj):
    try:
        kind = obj["kind"]
        curves = [
            SampledCurve(float(c["param"]), np.asarray(c["points"], dtype=float))
            for c in obj["curves"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad family JSON: {exc}") from exc
    return CurveFamily(kind, curves)


def families_to_json(families):
    if isinstance(families, dict):
        return {
            "families": [
                dict(family_to_json(f), name=name)
                for name, f in families.items()
            ]
        }
    return {"families": [family_to_json(f) for f in families]}


def families_from_json(obj):
    try:
        items = obj["families"]
    except (KeyError, TypeError) as exc:
        raise SchemaError("missing 'families' key") from exc
    return [family_from_json(f) for f in items]


# -- reports / files -----------------------------------------------------------


def dump_json(obj, path):
    """Deterministic JSON: sorted keys, no whitespace drift, trailing
    newline."""
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {path}: {exc}") from exc


# -- CSV -------------------------------------------------------------------------


def points_to_csv(pts, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "z"])
        for row in np.atleast_2d(pts):
            w.writerow([repr(float(v)) for v in row])


def points_from_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "y", "z"]:
        raise SchemaError("points CSV must start with header x,y,z")
    try:
        return np.array([[float(v) for v in row] for row in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"bad CSV value: {exc}") from exc


# -- OBJ -------------------------------------------------------------------------


def mesh_to_obj(vertices, faces, path):
    """ASCII OBJ with 1-based triangular faces."""
    buf = io.StringIO()
    for v in vertices:
        buf.write(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
    for f in faces:
        buf.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())
