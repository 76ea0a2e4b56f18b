"""Curve families on surfaces and the verification pipelines.

Three pipelines mirror the structure of the classification proofs:

* line family + circle family: parallel circle planes, minimal-degree
  implicit fit, single-circle plane section, section-degree consistency,
  and the quadric class when the degree is 2;
* at least 7 circle families on a closed surface: pick three pairwise
  even families, build the sphere through a transversal pair, and check
  every surface sample against it;
* 4 circle families: find an even pair, verify cosphericity near a
  transversal point, and confirm the quartic decomposition when an
  implicit polynomial is available.

Parity of intersection counts is computed on mod-2 homology classes of
loops on a torus chart, never by counting geometric intersections of
noisy samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .circles import (
    Circle3,
    Sphere,
    cospherical,
    fit_circle,
    intersect_circles,
    transversal_at,
    COINCIDENT,
    TRANSVERSAL_ANGLE_MIN,
)
from .errors import (
    NoAlgebraicModel,
    NoGenericPoint,
    NotACircleFamily,
    NotALineFamily,
    OpenCurve,
    UndersampledLoop,
)
from .polynomial import DEFAULT_TOL, MultiPoly, Plane
from .surfaces import (
    ImplicitSurface,
    QuadricClass,
    RULED_CIRCULAR_CLASSES,
    classify_quadric,
    is_darboux_cyclide,
    plane_section_degree,
    section_is_single_circle,
)

# reason codes carried by pipeline results
INSUFFICIENT_FAMILIES = "InsufficientFamilies"
OFF_SPHERE = "OffSphere"
NO_EVEN_TRIPLE = "NoEvenTriple"
NO_SPHERE = "NoSphere"

# default angle agreement for "parallel planes" (radians)
PARALLEL_ANGLE_TOL = 1e-6

# circle-fit acceptance: rms relative to radius
_CIRCLE_FIT_REL = 1e-6


@dataclass(frozen=True)
class SampledCurve:
    """One member of a family: its parameter value and its samples."""

    param: float
    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.shape[0] < 3 or pts.shape[1] != 3:
            raise ValueError("curve needs at least 3 sample points in R^3")
        object.__setattr__(self, "points", pts)


@dataclass
class CurveFamily:
    """A one-parameter family of sampled closed curves."""

    kind: str  # "Lines" or "Circles"
    curves: list[SampledCurve]
    _fitted: Optional[list[Circle3]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("Lines", "Circles"):
            raise ValueError(f"unknown family kind {self.kind!r}")

    @classmethod
    def from_circles(cls, circles, params=None, n=24):
        params = (
            list(params) if params is not None else list(range(len(circles)))
        )
        curves = [
            SampledCurve(float(p), c.points(n)) for p, c in zip(params, circles)
        ]
        return cls("Circles", curves)

    def all_points(self):
        return np.vstack([c.points for c in self.curves])

    def fitted_circles(self):
        """Fit every member as a circle; raises NotACircleFamily when a
        member's rms exceeds the relative fit bound (ellipses fail here)."""
        if self.kind != "Circles":
            raise NotACircleFamily(f"family kind is {self.kind}")
        if self._fitted is None:
            fitted = []
            for c in self.curves:
                try:
                    circle, rms = fit_circle(c.points)
                except Exception as exc:
                    raise NotACircleFamily(str(exc)) from exc
                if rms > _CIRCLE_FIT_REL * circle.radius:
                    raise NotACircleFamily(
                        f"member at param {c.param} has circle rms {rms:.2e}"
                    )
                fitted.append(circle)
            self._fitted = fitted
        return self._fitted

    def fitted_lines(self):
        """Represent every member as (point, direction); raises
        NotALineFamily on non-collinear samples."""
        if self.kind != "Lines":
            raise NotALineFamily(f"family kind is {self.kind}")
        out = []
        for c in self.curves:
            centroid = c.points.mean(axis=0)
            _u, s, vt = np.linalg.svd(c.points - centroid, full_matrices=False)
            if s[1] > 1e-7 * max(s[0], 1e-300):
                raise NotALineFamily(
                    f"member at param {c.param} is not collinear"
                )
            out.append((centroid, vt[0]))
        return out


@dataclass(frozen=True)
class TorusClass:
    """Homology class of a loop on a parametrized torus, mod 2."""

    p: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "p", int(self.p) % 2)
        object.__setattr__(self, "q", int(self.q) % 2)

    def as_tuple(self):
        return (self.p, self.q)


def intersection_parity(a, b):
    """Mod-2 intersection form ``p_a q_b + q_a p_b``."""
    return (a.p * b.q + a.q * b.p) % 2


def select_even_subfamily(classes):
    """Largest of the three isotropic groups {0,(1,0)}, {0,(0,1)},
    {0,(1,1)}; its members pairwise intersect evenly and it always
    holds at least ceil(n/3) of the input."""
    if not classes:
        raise ValueError("need at least one class")
    groups = [{(0, 0), (1, 0)}, {(0, 0), (0, 1)}, {(0, 0), (1, 1)}]
    buckets = [
        [i for i, c in enumerate(classes) if c.as_tuple() in g] for g in groups
    ]
    return max(buckets, key=len)


def homology_class_mod2(loop_points, chart, tol=1e-9):
    """Mod-2 class of a closed loop through a torus chart.

    ``chart`` maps an (N, 3) array to (N, 2) angles in radians.  The
    loop must repeat its first point at the end (within ``tol``), and
    consecutive chart steps must stay clearly below a half turn so the
    unwrapping is unambiguous.
    """
    pts = np.atleast_2d(np.asarray(loop_points, dtype=np.float64))
    scale = max(1.0, float(np.max(np.abs(pts))))
    if np.linalg.norm(pts[0] - pts[-1]) > max(tol, 1e-9) * scale:
        raise OpenCurve("loop endpoints do not match")
    uv = np.asarray(chart(pts), dtype=np.float64)
    steps = np.diff(uv, axis=0)
    wrapped = (steps + np.pi) % (2 * np.pi) - np.pi
    if np.any(np.abs(wrapped) >= 0.9 * np.pi):
        raise UndersampledLoop("consecutive chart steps approach a half turn")
    total = wrapped.sum(axis=0)
    winding = total / (2 * np.pi)
    k = np.round(winding)
    if np.any(np.abs(winding - k) > 0.05):
        raise OpenCurve("chart winding does not close to integers")
    return TorusClass(int(k[0]), int(k[1]))


def standard_torus_chart(major):
    """Chart of the z-axis torus: (angle around the axis, angle around
    the tube)."""

    def chart(pts):
        pts = np.atleast_2d(pts)
        u = np.arctan2(pts[:, 1], pts[:, 0])
        rho = np.hypot(pts[:, 0], pts[:, 1]) - major
        v = np.arctan2(pts[:, 2], rho)
        return np.column_stack([u, v])

    return chart


# ---------------------------------------------------------------------------
# parallel planes
# ---------------------------------------------------------------------------


def planes_parallel(family, tol=PARALLEL_ANGLE_TOL):
    """True when all fitted circle normals agree within the angle ``tol``.

    Normals carry the deterministic sign convention, so parallelism is a
    plain vector comparison.
    """
    circles = family.fitted_circles()
    if len(circles) < 2:
        raise ValueError("need at least 2 circles")
    n0 = circles[0].normal
    worst = 0.0
    for c in circles[1:]:
        angle = float(np.arccos(min(1.0, abs(float(c.normal @ n0)))))
        worst = max(worst, angle)
    return worst <= tol


def parallel_angle_spread(family):
    circles = family.fitted_circles()
    n0 = circles[0].normal
    return max(
        (
            float(np.arccos(min(1.0, abs(float(c.normal @ n0)))))
            for c in circles[1:]
        ),
        default=0.0,
    )


# ---------------------------------------------------------------------------
# implicit fitting
# ---------------------------------------------------------------------------


def _monomials_up_to(degree):
    return [
        (i, j, k)
        for d in range(degree + 1)
        for i in range(d + 1)
        for j in range(d + 1 - i)
        for k in (d - i - j,)
    ]


def fit_implicit(samples, degree):
    """Null-space fit of a degree <= `degree` polynomial to samples.

    Columns of the monomial design matrix are scaled to unit max before
    the SVD; the residual is the smallest singular value normalized by
    the sample count (rms of the scaled design response).
    """
    pts = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    monos = _monomials_up_to(degree)
    cols = [pts[:, 0] ** i * pts[:, 1] ** j * pts[:, 2] ** k for i, j, k in monos]
    A = np.column_stack(cols)
    scale = np.maximum(np.max(np.abs(A), axis=0), 1e-300)
    _u, s, vt = np.linalg.svd(A / scale, full_matrices=False)
    v = vt[-1]
    resid = float(s[-1]) / np.sqrt(pts.shape[0])
    coeffs = v / scale
    coeffs = coeffs / np.max(np.abs(coeffs))
    poly = MultiPoly(
        {
            m: c
            for m, c in zip(monos, coeffs)
            if abs(c) > 1e-12
        }
    )
    return poly, resid


def fit_implicit_min_degree(samples, tol=1e-9, max_degree=4):
    """Smallest degree in 1..max_degree whose fit residual passes."""
    for d in range(1, max_degree + 1):
        poly, resid = fit_implicit(samples, d)
        if resid <= tol and not poly.is_zero() and poly.degree == d:
            return poly, resid, d
        if resid <= tol and not poly.is_zero():
            return poly, resid, poly.degree
    raise NoAlgebraicModel(
        f"no polynomial of degree <= {max_degree} fits within {tol}"
    )


# ---------------------------------------------------------------------------
# line/circle transversal incidence
# ---------------------------------------------------------------------------


def _line_circle_common_point(point, direction, circle, tol):
    d = np.asarray(direction, dtype=np.float64)
    d = d / np.linalg.norm(d)
    n = circle.normal
    denom = float(d @ n)
    scale = max(circle.radius, 1.0)
    if abs(denom) > 1e-12:
        t = (circle.plane().offset - n @ point) / denom
        x = point + t * d
        if circle.distance_to(x[None, :])[0] <= tol * scale:
            return x
        return None
    # line parallel to the circle plane
    if abs(n @ point - circle.plane().offset) > tol * scale:
        return None
    q = point - circle.center
    aa = 1.0
    bb = 2 * float(q @ d)
    cc = float(q @ q) - circle.radius**2
    disc = bb * bb - 4 * aa * cc
    if disc < 0:
        return None
    t = (-bb + np.sqrt(disc)) / 2
    return point + t * d


def _find_line_circle_transversal(line_reps, circles, tol):
    for point, direction in line_reps:
        for circle in circles:
            x = _line_circle_common_point(point, direction, circle, max(tol, 1e-7))
            if x is None:
                continue
            try:
                tangent = circle.tangent_at(x)
            except Exception:
                continue
            d = direction / np.linalg.norm(direction)
            angle = float(np.arccos(min(1.0, abs(float(tangent @ d)))))
            if angle >= TRANSVERSAL_ANGLE_MIN:
                return x
    return None


# ---------------------------------------------------------------------------
# line + circle classification pipeline
# ---------------------------------------------------------------------------


@dataclass
class ClassificationReport:
    planes_parallel: bool
    single_circle_section: Optional[bool]
    surface_degree: int
    quadric_class: Optional[QuadricClass]
    residuals: dict
    reason: Optional[str] = None

    @property
    def confirmed(self):
        if not self.planes_parallel:
            return False
        if self.quadric_class is None:
            return False
        if self.surface_degree >= 2 and not self.single_circle_section:
            return False
        return self.quadric_class in RULED_CIRCULAR_CLASSES


def classify_line_circle_surface(lines, circles, surface_samples, tol=1e-9):
    """Run the full line-plus-circle classification.

    Steps: validate both families, verify one transversal line/circle
    incidence, check circle-plane parallelism, fit the minimal-degree
    implicit model, test the single-circle section and the section
    degree, and classify the quadric when the degree is 2.
    """
    if lines.kind != "Lines" or circles.kind != "Circles":
        raise ValueError("expected a Lines family and a Circles family")
    if not lines.curves:
        raise NotALineFamily("empty line family")
    if not circles.curves:
        raise NotACircleFamily("empty circle family")
    fitted = circles.fitted_circles()
    line_reps = lines.fitted_lines()
    if _find_line_circle_transversal(line_reps, fitted, tol) is None:
        raise NoGenericPoint("no transversal line/circle incidence found")

    par = planes_parallel(circles)
    samples = np.atleast_2d(np.asarray(surface_samples, dtype=np.float64))
    poly, fit_resid, degree = fit_implicit_min_degree(samples, max(tol, 1e-9))
    surface = ImplicitSurface(poly)
    residuals = {
        "implicit_fit": fit_resid,
        "parallel_angle": parallel_angle_spread(circles),
    }

    if degree == 1:
        return ClassificationReport(
            planes_parallel=par,
            single_circle_section=None,
            surface_degree=1,
            quadric_class=QuadricClass.PLANE,
            residuals=residuals,
        )

    section_plane = fitted[0].plane()
    uv = section_plane.to_chart(samples)
    window = 1.2 * float(np.max(np.abs(uv))) + 0.5
    circle = section_is_single_circle(surface, section_plane, tol, window=window)
    single = circle is not None
    if single:
        residuals["section_circle"] = float(
            np.max(circle.distance_to(circle.points(32)))
        )
    sec_degree = plane_section_degree(surface, section_plane)
    residuals["section_degree"] = float(sec_degree)
    qclass = classify_quadric(surface) if degree == 2 else None
    reason = None
    if sec_degree != degree:
        reason = "SectionDegreeMismatch"
    return ClassificationReport(
        planes_parallel=par,
        single_circle_section=single,
        surface_degree=degree,
        quadric_class=qclass,
        residuals=residuals,
        reason=reason,
    )


# ---------------------------------------------------------------------------
# cosphericity of two families
# ---------------------------------------------------------------------------


def cospherical_families(fa, fb, tol=1e-9):
    """True when every sampled pair across the two circle families lies
    on a common sphere or plane."""
    ca = fa.fitted_circles()
    cb = fb.fitted_circles()
    for c1 in ca:
        for c2 in cb:
            if cospherical(c1, c2, tol) is None:
                return False
    return True


# ---------------------------------------------------------------------------
# seven-family sphere pipeline
# ---------------------------------------------------------------------------


@dataclass
class TakeuchiResult:
    sphere: Optional[Sphere]
    reason: Optional[str] = None


def _transversal_pair(circles_a, circles_b, tol):
    for ia, ca in enumerate(circles_a):
        for ib, cb in enumerate(circles_b):
            pts = intersect_circles(ca, cb, max(tol, 1e-9))
            if pts is COINCIDENT or len(pts) != 2:
                continue
            for p in pts:
                try:
                    if transversal_at(ca, cb, p, max(tol, 1e-7)):
                        return ia, ib, p
                except Exception:
                    continue
    return None


def takeuchi_pipeline(
    families, genus, surface_samples, tol=1e-9, torus_classes=None
):
    """Sphere recovery from many circle families.

    Fewer than 7 families is reported, not an error.  For genus 1 the
    three pairwise-even families are chosen through the supplied
    homology classes; on a topological sphere any three families do.
    The sphere through a transversal pair must then carry every surface
    sample within ``tol``.
    """
    if genus not in (0, 1):
        raise ValueError("genus must be 0 or 1")
    fitted = [f.fitted_circles() for f in families]
    if len(families) < 7:
        return TakeuchiResult(None, INSUFFICIENT_FAMILIES)
    if genus == 0:
        chosen = [0, 1, 2]
    else:
        if torus_classes is None:
            raise ValueError(
                "genus-1 selection requires the families' homology classes"
            )
        sel = select_even_subfamily(list(torus_classes))
        if len(sel) < 3:
            return TakeuchiResult(None, NO_EVEN_TRIPLE)
        chosen = sel[:3]

    found = None
    for fi, fj in (
        (a, b) for a in chosen for b in chosen if a < b
    ):
        hit = _transversal_pair(fitted[fi], fitted[fj], tol)
        if hit:
            found = (fitted[fi][hit[0]], fitted[fj][hit[1]])
            break
    if not found:
        raise NoGenericPoint("no transversal circle pair on sampled members")
    ca, cb = found
    sph = cospherical(ca, cb, max(tol, 1e-9))
    if not isinstance(sph, Sphere):
        return TakeuchiResult(None, NO_SPHERE)
    samples = np.atleast_2d(np.asarray(surface_samples, dtype=np.float64))
    worst = float(np.max(sph.distance_to(samples)))
    if worst > max(tol, 1e-9) * max(1.0, sph.radius):
        return TakeuchiResult(None, OFF_SPHERE)
    return TakeuchiResult(sph)


# ---------------------------------------------------------------------------
# four-family cyclide pipeline
# ---------------------------------------------------------------------------


class FourFamiliesVerdict(Enum):
    CYCLIDE_CONFIRMED = "CyclideConfirmed"
    COSPHERICAL_PAIR_FOUND = "CosphericalPairFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class FourFamiliesResult:
    verdict: FourFamiliesVerdict
    pair: Optional[tuple[int, int]] = None
    form: Optional[object] = None
    reason: Optional[str] = None


def _near_indices(params, base_index, k):
    params = np.asarray(params, dtype=np.float64)
    span = params.max() - params.min()
    if span <= 0:
        return [base_index]
    step = span / max(len(params) - 1, 1)
    period = span + step
    d = np.abs(params - params[base_index])
    d = np.minimum(d, period - d)
    order = np.argsort(d)
    return order[: k + 1].tolist()


def four_families_pipeline(
    families, genus, surface_poly=None, tol=1e-9, torus_classes=None
):
    """Cyclide verdict from 4 circle families.

    Finds a pair of distinct families with even mod-2 pairing, verifies
    that members near a transversal point with two common points are
    cospherical, and, when an implicit polynomial is supplied, confirms
    the quartic decomposition.
    """
    if len(families) != 4:
        raise ValueError("exactly 4 families required")
    if genus not in (0, 1):
        raise ValueError("genus must be 0 or 1")
    fitted = [f.fitted_circles() for f in families]

    if genus == 0:
        pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    else:
        if torus_classes is None:
            return FourFamiliesResult(
                FourFamiliesVerdict.INCONCLUSIVE,
                reason="no homology classes supplied for genus 1",
            )
        classes = list(torus_classes)
        pairs = [
            (i, j)
            for i in range(4)
            for j in range(i + 1, 4)
            if intersection_parity(classes[i], classes[j]) == 0
        ]
        if not pairs:
            return FourFamiliesResult(
                FourFamiliesVerdict.INCONCLUSIVE, reason="no even pair"
            )

    chosen = None
    base = None
    for i, j in pairs:
        base = _transversal_pair(fitted[i], fitted[j], tol)
        if base:
            chosen = (i, j)
            break
    if chosen is None:
        raise NoGenericPoint("no transversal pair among even families")
    i, j = chosen
    ia, ib, _p = base
    params_a = [c.param for c in families[i].curves]
    params_b = [c.param for c in families[j].curves]

    verified = 0
    for na in _near_indices(params_a, ia, 4):
        for nb in _near_indices(params_b, ib, 4):
            c1 = fitted[i][na]
            c2 = fitted[j][nb]
            pts = intersect_circles(c1, c2, max(tol, 1e-9))
            if pts is COINCIDENT or len(pts) != 2:
                continue
            if cospherical(c1, c2, max(tol, 1e-9)) is None:
                return FourFamiliesResult(
                    FourFamiliesVerdict.INCONCLUSIVE,
                    pair=chosen,
                    reason="intersecting near pair not cospherical",
                )
            verified += 1
    if verified == 0:
        return FourFamiliesResult(
            FourFamiliesVerdict.INCONCLUSIVE,
            pair=chosen,
            reason="no near pair with two common points",
        )

    if surface_poly is not None:
        form = is_darboux_cyclide(ImplicitSurface(surface_poly))
        if form is not None:
            return FourFamiliesResult(
                FourFamiliesVerdict.CYCLIDE_CONFIRMED, pair=chosen, form=form
            )
        return FourFamiliesResult(
            FourFamiliesVerdict.COSPHERICAL_PAIR_FOUND,
            pair=chosen,
            reason="implicit polynomial is not of cyclide form",
        )
    return FourFamiliesResult(
        FourFamiliesVerdict.COSPHERICAL_PAIR_FOUND, pair=chosen
    )
