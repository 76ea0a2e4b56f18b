"""Canonical surfaces with self-verifying constructions.

Each entry bundles an implicit surface (or a complex parametrization),
its attached line/circle families, and a verifier that re-establishes
every claimed property at the default tolerances: contained lines,
circle sections, parallel planes, homology classes, cyclide-form
verdicts.  Gallery output is deterministic; no randomness anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circles import Circle3, IsotropicClass, classify_isotropic, fit_circle
from .errors import DegenerateConic, SelfIntersectingTorus
from .families import (
    CurveFamily,
    SampledCurve,
    TorusClass,
    homology_class_mod2,
    planes_parallel,
    standard_torus_chart,
)
from .polynomial import MultiPoly, Plane, X, Y, Z, torus_poly
from .surfaces import (
    ImplicitSurface,
    contains_circle,
    contains_line,
    is_darboux_cyclide,
    is_isotropic_cyclide,
    section_circles,
    section_is_single_circle,
)


@dataclass
class CheckResult:
    passed: bool
    residual: Optional[float] = None
    note: str = ""


@dataclass
class GalleryEntry:
    name: str
    surface: Optional[ImplicitSurface]
    families: dict[str, CurveFamily] = field(default_factory=dict)
    lines: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    torus_classes: Optional[list[TorusClass]] = None
    verifier: Optional[Callable[["GalleryEntry"], dict]] = None
    mesh_builder: Optional[Callable[[], tuple]] = None
    params: dict = field(default_factory=dict)

    def verify(self):
        """Run the entry's checks; returns {check name: CheckResult}."""
        return self.verifier(self) if self.verifier else {}

    def mesh(self):
        """(vertices, triangles) of a sampled patch, or None."""
        return self.mesh_builder() if self.mesh_builder else None

    def with_perturbed_coefficient(self, delta=1e-3):
        """Copy with the first surface coefficient shifted by ``delta``;
        used by the sensitivity checks."""
        if self.surface is None:
            raise ValueError(f"{self.name} carries no real implicit surface")
        key = next(iter(self.surface.poly.terms))
        terms = dict(self.surface.poly.terms)
        terms[key] += delta
        return GalleryEntry(
            name=self.name + "_perturbed",
            surface=ImplicitSurface(MultiPoly(terms), self.name),
            families=self.families,
            lines=self.lines,
            torus_classes=self.torus_classes,
            verifier=self.verifier,
            mesh_builder=None,
            params=self.params,
        )


def _grid_mesh(vertices_grid, wrap_u=False, wrap_v=False):
    """Triangulate a (nu, nv, 3) grid of vertices."""
    nu, nv, _ = vertices_grid.shape
    verts = vertices_grid.reshape(-1, 3)
    faces = []
    ulim = nu if wrap_u else nu - 1
    vlim = nv if wrap_v else nv - 1
    for i in range(ulim):
        for j in range(vlim):
            a = i * nv + j
            b = ((i + 1) % nu) * nv + j
            c = ((i + 1) % nu) * nv + (j + 1) % nv
            d = i * nv + (j + 1) % nv
            faces.append((a, b, c))
            faces.append((a, c, d))
    return verts, np.array(faces, dtype=np.int64)


# ---------------------------------------------------------------------------
# cubic with one circle family and four lines
# ---------------------------------------------------------------------------

_EX5_LINES = [
    ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
    ((0.0, 0.0, 0.0), (-1.0, 1.0, 1.0)),
    ((0.0, 1.0, 0.0), (1.0, -1.0, 2.0)),
    ((0.0, 1.0, 0.0), (-1.0, -1.0, 2.0)),
]


def _ex5_poly():
    return (X * X - Z * Z) * (3.0 * Z - 2.0) + (Y - Z) * (
        3.0 * Y * Z - 2.0 * Y - 4.0 * Z + 2.0
    )


def _ex5_section_circle(c):
    """Closed-form circle of the section z = c (None when degenerate)."""
    denom = 3.0 * c - 2.0
    if abs(denom) < 0.2:
        return None
    b = (-3.0 * c**2 - 2.0 * c + 2.0) / denom
    k = (-3.0 * c**3 + 6.0 * c**2 - 2.0 * c) / denom
    r2 = b * b / 4.0 - k
    if r2 < 1e-2:
        return None
    return Circle3((0.0, -b / 2.0, c), float(np.sqrt(r2)), (0.0, 0.0, 1.0))


_EX5_SECTION_HEIGHTS = [-0.4, -0.2, 0.0, 0.2, 0.4, 0.5, 1.0, 1.2]


def _ex5_verify(entry):
    s = entry.surface
    out = {}
    for idx, (pt, dr) in enumerate(entry.lines, start=1):
        coeffs = s.poly.restrict_to_line(pt, np.asarray(dr) / np.linalg.norm(dr))
        resid = float(np.max(np.abs(coeffs)))
        out[f"line_{idx}_contained"] = CheckResult(
            contains_line(s, pt, dr, 1e-12), resid
        )
    out["degree_3"] = CheckResult(s.degree == 3, float(s.degree))
    out["section_planes_parallel"] = CheckResult(
        planes_parallel(entry.families["sections"])
    )
    circ = section_is_single_circle(s, Plane((0, 0, 1), 0.5), tol=1e-9, window=4.0)
    if circ is None:
        out["section_z_half_circle"] = CheckResult(False, None, "no single circle")
    else:
        resid = float(np.max(np.abs(s.poly.eval_many(circ.points(32)))))
        out["section_z_half_circle"] = CheckResult(resid <= 1e-9, resid)
    worst = 0.0
    for c in entry.families["sections"].curves:
        worst = max(worst, float(np.max(np.abs(s.poly.eval_many(c.points)))))
    out["section_circles_on_surface"] = CheckResult(worst <= 1e-9, worst)
    return out


def example5():
    """Cubic covered by circles in horizontal planes and carrying
    exactly four lines."""
    surface = ImplicitSurface(_ex5_poly(), "example5")
    curves = []
    for c in _EX5_SECTION_HEIGHTS:
        circ = _ex5_section_circle(c)
        if circ is not None:
            curves.append(SampledCurve(c, circ.points(24)))
    fams = {"sections": CurveFamily("Circles", curves)}

    def mesh():
        cs = [c for c in np.linspace(-0.5, 1.3, 40) if _ex5_section_circle(c)]
        grid = np.array(
            [_ex5_section_circle(c).points(40) for c in cs]
        )
        return _grid_mesh(grid, wrap_u=False, wrap_v=True)

    return GalleryEntry(
        name="example5",
        surface=surface,
        families=fams,
        lines=[(np.array(p), np.array(d)) for p, d in _EX5_LINES],
        verifier=_ex5_verify,
        mesh_builder=mesh,
    )


# ---------------------------------------------------------------------------
# quartic with two circle families that is not of cyclide form
# ---------------------------------------------------------------------------


def _ex4_poly():
    s = X * X + Y * Y + Z * Z + 3.0
    return s * s - 4.0 * (Y * Y) * (Z * Z) - 16.0 * (X * X) - 12.0 * (Y * Y)


def _ex4_param(u, v):
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return np.stack(
        [np.cos(u) + 2.0 * np.cos(v), 2.0 * np.sin(v), np.sin(u)], axis=-1
    )


def _ex4_families(n_curves=12, n_pts=24):
    us = np.linspace(0, 2 * np.pi, n_pts, endpoint=False)
    vs = np.linspace(0, 2 * np.pi, n_curves, endpoint=False)
    y_family = [
        SampledCurve(float(v), _ex4_param(us, np.full_like(us, v))) for v in vs
    ]
    z_family = [
        SampledCurve(float(u), _ex4_param(np.full_like(us, u), us)) for u in vs
    ]
    return {
        "y_sections": CurveFamily("Circles", y_family),
        "z_sections": CurveFamily("Circles", z_family),
    }


def _ex4_verify(entry):
    s = entry.surface
    out = {}
    out["degree_4"] = CheckResult(s.degree == 4, float(s.degree))
    out["not_cyclide_form"] = CheckResult(is_darboux_cyclide(s) is None)
    fits = section_circles(s, Plane((0, 1, 0), 0.0), tol=1e-8, window=4.0)
    ok = len(fits) == 2 and all(f is not None for f in fits)
    resid = None
    if ok:
        centers = sorted(
            (f[0].center for f in fits), key=lambda c: c[0]
        )
        resid = float(
            np.linalg.norm(centers[0] - np.array([-2.0, 0.0, 0.0]))
            + np.linalg.norm(centers[1] - np.array([2.0, 0.0, 0.0]))
            + abs(fits[0][0].radius - 1.0)
            + abs(fits[1][0].radius - 1.0)
        )
        ok = resid <= 1e-7
    out["y0_section_two_unit_circles"] = CheckResult(ok, resid)
    # the sampled sections themselves are circles in planes y = const and
    # z = const (the z sections come in crossing pairs, so they are
    # checked member by member, not through branch extraction)
    for key in ("y_sections", "z_sections"):
        worst = 0.0
        on_plane = 0.0
        axis = 1 if key == "y_sections" else 2
        for c in entry.families[key].curves:
            _circle, rms = fit_circle(c.points)
            worst = max(worst, rms)
            on_plane = max(on_plane, float(np.ptp(c.points[:, axis])))
        out[f"{key}_fit_circles"] = CheckResult(
            worst <= 1e-8 and on_plane <= 1e-12, worst
        )
    # an additional disjoint-plane oracle away from y = 0
    fits = section_circles(s, Plane((0, 1, 0), 1.0), tol=1e-8, window=4.0)
    out["y1_section_fit"] = CheckResult(
        len(fits) == 2 and all(f is not None for f in fits),
        float(max((f[1] for f in fits if f), default=np.inf)),
    )
    return out


def example4():
    """Quartic swept by translating one circle along another; two circle
    families but no cyclide-form decomposition."""
    surface = ImplicitSurface(_ex4_poly(), "example4")

    def mesh():
        us = np.linspace(0, 2 * np.pi, 48, endpoint=False)
        vs = np.linspace(0, 2 * np.pi, 48, endpoint=False)
        U, V = np.meshgrid(us, vs, indexing="ij")
        return _grid_mesh(_ex4_param(U, V), wrap_u=True, wrap_v=True)

    return GalleryEntry(
        name="example4",
        surface=surface,
        families=_ex4_families(),
        verifier=_ex4_verify,
        mesh_builder=mesh,
    )


# ---------------------------------------------------------------------------
# cubic graph with three families of vertical parabolas
# ---------------------------------------------------------------------------


def _ex6_poly():
    # z - x y (y - x)
    return Z - X * Y * Y + X * X * Y


def _ex6_section(kind, c, ts):
    ts = np.asarray(ts, dtype=np.float64)
    if kind == "x":
        x = np.full_like(ts, c)
        y = ts
    elif kind == "y":
        x = ts
        y = np.full_like(ts, c)
    else:  # y - x = c
        x = ts
        y = ts + c
    z = x * y * (y - x)
    return np.stack([x, y, z], axis=-1)


def _ex6_verify(entry):
    s = entry.surface
    out = {}
    out["degree_3"] = CheckResult(s.degree == 3, float(s.degree))
    out["not_isotropic_cyclide"] = CheckResult(is_isotropic_cyclide(s) is None)
    ts = np.linspace(-1.2, 1.2, 25)
    for kind, label in (("x", "x_sections"), ("y", "y_sections"), ("diag", "diag_sections")):
        verdicts = []
        for c in (-1.0, -0.5, 0.5, 1.0):
            verdicts.append(classify_isotropic(_ex6_section(kind, c, ts)))
        out[label + "_vertical_parabolas"] = CheckResult(
            all(v is IsotropicClass.VERTICAL_PARABOLA for v in verdicts)
        )
    # the x = 0 member degenerates to the line z = 0
    pts = _ex6_section("x", 0.0, ts)
    degenerate = False
    try:
        classify_isotropic(pts)
    except DegenerateConic:
        degenerate = True
    except ValueError:
        degenerate = True
    out["x0_member_degenerates_to_line"] = CheckResult(
        degenerate or bool(np.allclose(pts[:, 2], 0.0)),
        note="section at x = 0 is the line z = 0",
    )
    return out


def example6():
    """Graph surface covered by three families of vertical parabolas yet
    failing the isotropic quartic decomposition."""
    surface = ImplicitSurface(_ex6_poly(), "example6")
    # its section curves are parabolas, so neither family kind applies;
    # the verifier samples the sections directly

    def mesh():
        g = np.linspace(-1.2, 1.2, 40)
        Xg, Yg = np.meshgrid(g, g, indexing="ij")
        V = np.stack([Xg, Yg, Xg * Yg * (Yg - Xg)], axis=-1)
        return _grid_mesh(V)

    return GalleryEntry(
        name="example6",
        surface=surface,
        verifier=_ex6_verify,
        mesh_builder=mesh,
    )


# ---------------------------------------------------------------------------
# complex quartic with a line family and a circle family
# ---------------------------------------------------------------------------


def _ex1_point(s, t):
    """Homogeneous parametrization; affine-linear in s for fixed t."""
    return np.array(
        [
            t * t - 1.0,
            1j * (t * t - 1.0 - 2.0 * s * t),
            s * (t * t + 1.0),
            s * (t * t - 1.0) + 4.0 * t,
        ],
        dtype=np.complex128,
    )


def _ex1_implicit(p):
    """Homogenized quartic with the complex plane-pair term."""
    x, y, z, w = p
    s2 = x * x + y * y + z * z
    return s2 * s2 + ((x + 1j * y) ** 2 - z * z) * w * w


def _ex1_verify(entry):
    out = {}
    grid = np.linspace(-1.0, 1.0, 10)
    worst = 0.0
    for s in grid:
        for t in grid:
            p = _ex1_point(s, t)
            p = p / np.max(np.abs(p))
            worst = max(worst, abs(_ex1_implicit(p)))
    out["implicit_grid_residual"] = CheckResult(worst <= 1e-10, float(worst))

    rank_worst = 0.0
    for t in (-1.5, -0.5, 0.5, 2.0):
        rows = []
        for s in (0.0, 1.0, 2.0):
            p = _ex1_point(s, t)
            rows.append(p / np.linalg.norm(p))
        sv = np.linalg.svd(np.array(rows), compute_uv=False)
        rank_worst = max(rank_worst, sv[2] / sv[0])
    out["s_curves_are_lines"] = CheckResult(rank_worst <= 1e-10, float(rank_worst))

    plan_worst = 0.0
    for s in (0.25, 0.75, 1.5, -1.0):
        rows = []
        for t in (-1.0, -0.3, 0.2, 0.8, 1.7):
            p = _ex1_point(s, t)
            rows.append(p / np.linalg.norm(p))
        sv = np.linalg.svd(np.array(rows), compute_uv=False)
        plan_worst = max(plan_worst, sv[3] / sv[0])
    out["t_curves_are_planar_conics"] = CheckResult(
        plan_worst <= 1e-10, float(plan_worst)
    )
    return out


def example1():
    """Complex quartic covered by a family of lines and a family of
    planar conics through the absolute conic; no real surface patch."""
    return GalleryEntry(
        name="example1",
        surface=None,
        verifier=_ex1_verify,
        mesh_builder=None,
    )


# ---------------------------------------------------------------------------
# torus
# ---------------------------------------------------------------------------


def _rotz(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def torus_circles_through_point(major, minor):
    """The four circles through (0, major+minor, 0): meridian, parallel,
    and the two oblique circles cut by the bitangent planes through the
    origin."""
    root = np.sqrt(major**2 - minor**2)
    meridian = Circle3((0.0, major, 0.0), minor, (1.0, 0.0, 0.0))
    parallel = Circle3((0.0, 0.0, 0.0), major + minor, (0.0, 0.0, 1.0))
    oblique_plus = Circle3(
        (0.0, minor, 0.0), major, (-minor / major, 0.0, root / major)
    )
    oblique_minus = Circle3(
        (0.0, minor, 0.0), major, (minor / major, 0.0, root / major)
    )
    return [meridian, parallel, oblique_plus, oblique_minus]


def torus_families(major, minor, n_curves=16, n_pts=24):
    """The four circle families, each parametrized over a full turn."""
    base_m, _, base_p, base_q = torus_circles_through_point(major, minor)
    params = np.linspace(0, 2 * np.pi, n_curves, endpoint=False)

    def rotate_family(circle):
        curves = []
        for a in params:
            R = _rotz(a)
            rc = Circle3(R @ circle.center, circle.radius, R @ circle.normal)
            curves.append(SampledCurve(float(a), rc.points(n_pts)))
        return CurveFamily("Circles", curves)

    parallels = []
    for v in params:
        center = (0.0, 0.0, minor * np.sin(v))
        radius = major + minor * np.cos(v)
        parallels.append(
            SampledCurve(
                float(v), Circle3(center, radius, (0.0, 0.0, 1.0)).points(n_pts)
            )
        )
    return {
        "meridians": rotate_family(base_m),
        "parallels": CurveFamily("Circles", parallels),
        "oblique_plus": rotate_family(base_p),
        "oblique_minus": rotate_family(base_q),
    }


def _torus_verify(entry):
    s = entry.surface
    major = entry.params["major"]
    minor = entry.params["minor"]
    out = {}
    circles = torus_circles_through_point(major, minor)
    names = ["meridian", "parallel", "oblique_plus", "oblique_minus"]
    for nme, c in zip(names, circles):
        pts = c.points(2 * s.degree + 1)
        resid = float(
            np.max(
                np.abs(s.poly.eval_many(pts))
                / np.maximum(s.poly.eval_abs_many(pts), 1e-300)
            )
        )
        out[f"contains_{nme}"] = CheckResult(
            contains_circle(s, c, 1e-10), resid
        )
    p0 = np.array([0.0, major + minor, 0.0])
    through = [
        c for c in circles if c.distance_to(p0[None, :])[0] <= 1e-9 * major
    ]
    distinct = len(
        {
            (round(float(c.radius), 9),) + tuple(np.round(c.center, 9))
            + tuple(np.round(c.normal, 9))
            for c in circles
        }
    )
    out["four_circles_through_point"] = CheckResult(
        len(through) == 4 and distinct == 4, float(len(through))
    )
    chart = standard_torus_chart(major)
    got = [
        homology_class_mod2(c.points(64, closed=True), chart).as_tuple()
        for c in circles
    ]
    out["homology_classes"] = CheckResult(
        got == [(0, 1), (1, 0), (1, 1), (1, 1)], note=str(got)
    )
    return out


def torus_entry(major=2.0, minor=1.0):
    """Torus with its four circles through a common point, homology
    bookkeeping, and the four circle families."""
    if not (major > minor > 0):
        raise SelfIntersectingTorus(
            f"need major > minor > 0, got {major}, {minor}"
        )
    surface = ImplicitSurface(torus_poly(major, minor), "torus")
    entry = GalleryEntry(
        name="torus",
        surface=surface,
        families=torus_families(major, minor),
        torus_classes=[
            TorusClass(0, 1),
            TorusClass(1, 0),
            TorusClass(1, 1),
            TorusClass(1, 1),
        ],
        verifier=_torus_verify,
        params={"major": major, "minor": minor},
    )

    def mesh():
        us = np.linspace(0, 2 * np.pi, 48, endpoint=False)
        vs = np.linspace(0, 2 * np.pi, 24, endpoint=False)
        U, V = np.meshgrid(us, vs, indexing="ij")
        pts = np.stack(
            [
                (major + minor * np.cos(V)) * np.cos(U),
                (major + minor * np.cos(V)) * np.sin(U),
                minor * np.sin(V),
            ],
            axis=-1,
        )
        return _grid_mesh(pts, wrap_u=True, wrap_v=True)

    entry.mesh_builder = mesh
    return entry


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

GALLERY = {
    "example1": example1,
    "example4": example4,
    "example5": example5,
    "example6": example6,
    "torus": torus_entry,
}


def list_entries():
    return sorted(GALLERY)
