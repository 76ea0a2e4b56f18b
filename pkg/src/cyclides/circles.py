"""Circles and spheres in Euclidean 3-space.

Construction, least-squares fitting, intersection, cosphericity,
transversality, the two circular points a plane cuts out of the
absolute conic, and the isotropic-circle classification used by the
vertical-parabola surface checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateCircle, DegenerateConic, NotIncident
from .polynomial import (
    DEFAULT_TOL,
    Plane,
    as_point,
    orthonormal_frame,
)

# tangents count as transversal above this angle (radians), far above fit noise
TRANSVERSAL_ANGLE_MIN = 1e-4

# a fitted sphere radius beyond this is reported as a plane
_PLANE_RADIUS_CUTOFF = 1.0 / DEFAULT_TOL.rank_eps

#: sentinel returned by :func:`intersect_circles` for coincident circles
COINCIDENT = object()


def _normalize_normal_sign(n):
    """Sign convention: non-negative z, ties broken by y then x, so that
    parallel planes compare by vector equality."""
    for a in (2, 1, 0):
        if abs(n[a]) > 1e-12:
            return -n if n[a] < 0 else n
    return n


@dataclass(frozen=True)
class Circle3:
    """Circle as (center, radius, unit normal).

    Parametrized as ``center + radius (cos t e1 + sin t e2)`` where
    ``(e1, e2, normal)`` is the deterministic orthonormal frame.
    """

    center: np.ndarray
    radius: float
    normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        n = np.asarray(self.normal, dtype=np.float64)
        nrm = np.linalg.norm(n)
        if nrm == 0.0 or not np.isfinite(nrm):
            raise DegenerateCircle("circle normal must be nonzero")
        object.__setattr__(self, "normal", _normalize_normal_sign(n / nrm))
        r = float(self.radius)
        if not (r > DEFAULT_TOL.abs_eps):
            raise DegenerateCircle(f"radius {r} too small")
        object.__setattr__(self, "radius", r)

    def frame(self):
        e1, e2, _ = orthonormal_frame(self.normal)
        return e1, e2

    def points(self, n=32, phase=0.0, closed=False):
        """Equispaced samples; ``closed`` repeats the first point at the end."""
        e1, e2 = self.frame()
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False) + phase
        pts = (
            self.center
            + self.radius * np.cos(t)[:, None] * e1
            + self.radius * np.sin(t)[:, None] * e2
        )
        if closed:
            pts = np.vstack([pts, pts[:1]])
        return pts

    def point_at(self, t):
        e1, e2 = self.frame()
        return self.center + self.radius * (np.cos(t) * e1 + np.sin(t) * e2)

    def tangent_at(self, p):
        """Unit tangent direction of the circle at a point on it."""
        v = np.cross(self.normal, as_point(p) - self.center)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise NotIncident("point coincides with the circle center")
        return v / nrm

    def plane(self):
        return Plane.from_point_normal(self.center, self.normal)

    def distance_to(self, pts):
        """Euclidean distance from points to the circle curve."""
        q = np.atleast_2d(pts) - self.center
        h = q @ self.normal
        rho = np.linalg.norm(q - np.outer(h, self.normal), axis=-1)
        return np.hypot(rho - self.radius, h)


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (r > DEFAULT_TOL.abs_eps):
            raise ValueError(f"sphere radius {r} too small")
        object.__setattr__(self, "radius", r)

    def distance_to(self, pts):
        return np.abs(
            np.linalg.norm(np.atleast_2d(pts) - self.center, axis=-1) - self.radius
        )


class IsotropicClass(Enum):
    VERTICAL_PARABOLA = "VerticalParabola"
    CIRCULAR_PROJECTION_ELLIPSE = "CircularProjectionEllipse"
    NOT_ISOTROPIC = "NotIsotropic"


def circle_through(p1, p2, p3):
    """Circle through three non-collinear points."""
    p1, p2, p3 = as_point(p1), as_point(p2), as_point(p3)
    u = p2 - p1
    v = p3 - p1
    n = np.cross(u, v)
    scale = max(np.linalg.norm(u), np.linalg.norm(v))
    if scale == 0.0 or np.linalg.norm(n) <= DEFAULT_TOL.abs_eps * scale**2:
        raise DegenerateCircle("points are collinear or coincident")
    # circumcenter p1 + a u + b v: solve [uu uv; uv vv] [a b] = [uu/2, vv/2]
    uu, vv, uv = u @ u, v @ v, u @ v
    det = uu * vv - uv * uv
    a = vv * (uu - uv) / (2 * det)
    b = uu * (vv - uv) / (2 * det)
    center = p1 + a * u + b * v
    radius = float(np.linalg.norm(p1 - center))
    return Circle3(center, radius, n)


def fit_circle(pts):
    """Least-squares circle through >= 4 points.

    Plane fit by principal components, algebraic in-plane fit, then one
    Gauss-Newton polish.  Returns ``(circle, rms)`` where rms is the
    root-mean-square 3-D distance from the samples to the circle.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if pts.shape[0] < 4:
        raise DegenerateCircle("need at least 4 points")
    centroid = pts.mean(axis=0)
    q = pts - centroid
    _u, s, vt = np.linalg.svd(q, full_matrices=False)
    if s[1] <= DEFAULT_TOL.rank_eps * max(s[0], 1e-300):
        raise DegenerateCircle("points are collinear")
    normal = vt[2]
    e1, e2 = vt[0], vt[1]
    u = q @ e1
    v = q @ e2
    # algebraic fit: 2 cu u + 2 cv v + k = u^2 + v^2
    A = np.column_stack([2 * u, 2 * v, np.ones_like(u)])
    b = u * u + v * v
    (cu, cv, k), *_ = np.linalg.lstsq(A, b, rcond=None)
    r2 = k + cu * cu + cv * cv
    if r2 <= 0:
        raise DegenerateCircle("algebraic fit produced no real circle")
    r = np.sqrt(r2)
    # one Gauss-Newton step on (cu, cv, r) against radial residuals
    du = u - cu
    dv = v - cv
    rho = np.hypot(du, dv)
    good = rho > 1e-300
    res = rho - r
    J = np.column_stack(
        [
            np.where(good, -du / np.maximum(rho, 1e-300), 0.0),
            np.where(good, -dv / np.maximum(rho, 1e-300), 0.0),
            -np.ones_like(rho),
        ]
    )
    step, *_ = np.linalg.lstsq(J, -res, rcond=None)
    cu, cv, r = cu + step[0], cv + step[1], r + step[2]
    if r <= DEFAULT_TOL.abs_eps:
        raise DegenerateCircle("fitted radius collapsed")
    center = centroid + cu * e1 + cv * e2
    circle = Circle3(center, float(r), normal)
    rms = float(np.sqrt(np.mean(circle.distance_to(pts) ** 2)))
    return circle, rms


def intersect_circles(c1, c2, tol=1e-9):
    """Common points of two circles.

    Returns a list of 0, 1, or 2 points (tangency reports one), or the
    :data:`COINCIDENT` sentinel for equal circles.
    """
    scale = max(c1.radius, c2.radius, 1.0)
    same_plane = (
        abs(abs(c1.normal @ c2.normal) - 1.0) <= 1e-12 + tol / scale
        and abs(c1.normal @ (c2.center - c1.center)) <= tol * scale
    )
    if same_plane:
        if (
            np.linalg.norm(c1.center - c2.center) <= tol * scale
            and abs(c1.radius - c2.radius) <= tol * scale
        ):
            return COINCIDENT
        return _intersect_coplanar(c1, c2, tol)
    # planes meet in a line; common points must lie on it
    line_pt, line_dir = _plane_plane_line(c1.plane(), c2.plane())
    t1 = _line_circle_params(line_pt, line_dir, c1, tol * scale)
    t2 = _line_circle_params(line_pt, line_dir, c2, tol * scale)
    out = []
    for a in t1:
        for b in t2:
            if abs(a - b) * np.linalg.norm(line_dir) <= tol * scale:
                out.append(line_pt + 0.5 * (a + b) * line_dir)
    return _dedup_points(out, tol * scale)


def _intersect_coplanar(c1, c2, tol):
    scale = max(c1.radius, c2.radius, 1.0)
    n = c1.normal
    d = c2.center - c1.center
    dist = np.linalg.norm(d)
    if dist <= tol * scale:
        return []  # concentric, different radii
    r1, r2 = c1.radius, c2.radius
    if dist > r1 + r2 + tol * scale or dist < abs(r1 - r2) - tol * scale:
        return []
    u = d / dist
    a = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist)
    h2 = r1 * r1 - a * a
    if h2 <= (tol * scale) ** 2:
        return [c1.center + a * u]  # tangency
    h = np.sqrt(h2)
    w = np.cross(n, u)
    base = c1.center + a * u
    return [base + h * w, base - h * w]


def _plane_plane_line(pl1, pl2):
    d = np.cross(pl1.normal, pl2.normal)
    # point on both planes: solve 2x3 system with the pseudo-inverse
    A = np.vstack([pl1.normal, pl2.normal])
    b = np.array([pl1.offset, pl2.offset])
    pt, *_ = np.linalg.lstsq(A, b, rcond=None)
    return pt, d / np.linalg.norm(d)


def _line_circle_params(p0, d, circle, atol):
    """Parameters t with p0 + t d on the circle (the line lies in its plane)."""
    q = p0 - circle.center
    aa = d @ d
    bb = 2 * (q @ d)
    cc = q @ q - circle.radius**2
    disc = bb * bb - 4 * aa * cc
    width = abs(2 * circle.radius * np.sqrt(aa))
    if disc < -2 * atol * width:
        return []
    if disc <= (2 * atol * width):
        return [-bb / (2 * aa)]
    s = np.sqrt(disc)
    return [(-bb - s) / (2 * aa), (-bb + s) / (2 * aa)]


def _dedup_points(pts, atol):
    out = []
    for p in pts:
        if all(np.linalg.norm(p - q) > atol for q in out):
            out.append(p)
    return out


def cospherical(c1, c2, tol=1e-9):
    """Common sphere (or plane) through two circles, if one exists.

    Fits a least-squares sphere through 8 samples of each circle and
    accepts when the rms residual is at most ``tol * max(radius)``.  A
    fit whose radius blows past ``1/rank_eps`` degenerates to the common
    plane.  Returns a :class:`Sphere`, a :class:`Plane`, or ``None``.
    """
    pts = np.vstack([c1.points(8), c2.points(8)])
    scale = max(c1.radius, c2.radius)
    # coplanar pair: the degenerate sphere is their plane
    centroid = pts.mean(axis=0)
    _u, s, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    if s[2] <= tol * scale:
        return Plane.from_point_normal(centroid, vt[2])
    A = np.column_stack([2 * pts, np.ones(len(pts))])
    b = (pts * pts).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = sol[:3]
    r2 = sol[3] + center @ center
    if r2 <= 0:
        return None
    radius = float(np.sqrt(r2))
    rms = float(np.sqrt(np.mean((np.linalg.norm(pts - center, axis=1) - radius) ** 2)))
    if rms > tol * scale:
        return None
    if radius > _PLANE_RADIUS_CUTOFF:
        return Plane.from_point_normal(centroid, vt[2])
    return Sphere(center, radius)


def transversal_at(c1, c2, p, tol=1e-9):
    """True when the two circles cross at ``p`` with a genuine angle.

    Raises :class:`NotIncident` when ``p`` is off either circle.  The
    angle threshold is :data:`TRANSVERSAL_ANGLE_MIN`.
    """
    p = as_point(p)
    scale = max(c1.radius, c2.radius, 1.0)
    for c in (c1, c2):
        if c.distance_to(p[None, :])[0] > tol * scale:
            raise NotIncident("point is not on both circles")
    t1 = c1.tangent_at(p)
    t2 = c2.tangent_at(p)
    angle = np.arccos(min(1.0, abs(float(t1 @ t2))))
    return bool(angle >= TRANSVERSAL_ANGLE_MIN)


def circular_points(plane):
    """The two conjugate points where the plane's line at infinity meets
    the absolute conic: directions d with d.d = 0, d.normal = 0, w = 0."""
    e1, e2, _ = orthonormal_frame(plane.normal)
    d_plus = e1 + 1j * e2
    d_minus = e1 - 1j * e2
    return (
        np.append(d_plus, 0.0).astype(np.complex128),
        np.append(d_minus, 0.0).astype(np.complex128),
    )


def classify_isotropic(pts, tol=1e-7):
    """Classify a planar sampled curve as an isotropic circle.

    Fits a conic to the in-plane coordinates.  A parabola whose axis is
    parallel to Oz is :attr:`IsotropicClass.VERTICAL_PARABOLA`; an
    ellipse whose projection to Oxy is a circle is
    :attr:`IsotropicClass.CIRCULAR_PROJECTION_ELLIPSE`; anything else is
    :attr:`IsotropicClass.NOT_ISOTROPIC`.  Samples that no conic fits
    (or a rank-deficient conic) raise :class:`DegenerateConic`.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if pts.shape[0] < 6:
        raise ValueError("need at least 6 samples")
    centroid = pts.mean(axis=0)
    _u, s, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    if s[2] > max(tol, 1e-9) * max(s[0], 1e-300):
        raise ValueError("samples are not coplanar")
    plane = Plane.from_point_normal(centroid, vt[2])
    uv = plane.to_chart(pts)
    u, v = uv[:, 0], uv[:, 1]
    scale = max(float(np.max(np.abs(uv))), 1.0)
    u, v = u / scale, v / scale
    M = np.column_stack([u * u, u * v, v * v, u, v, np.ones_like(u)])
    _mu, ms, mvt = np.linalg.svd(M, full_matrices=False)
    conic = mvt[5]
    fit_resid = ms[5] / max(ms[0], 1e-300)
    if fit_resid > max(tol, 1e-8) * 10:
        raise DegenerateConic(f"conic fit residual {fit_resid:.2e}")
    a, bb, c, _d, _e, _f = conic
    C = np.array(
        [
            [a, bb / 2, conic[3] / 2],
            [bb / 2, c, conic[4] / 2],
            [conic[3] / 2, conic[4] / 2, conic[5]],
        ]
    )
    if abs(np.linalg.det(C)) <= 1e-12 * np.linalg.norm(conic) ** 3:
        raise DegenerateConic("conic matrix is rank deficient")
    disc = bb * bb - 4 * a * c
    qnorm = max(abs(a), abs(bb), abs(c))
    if qnorm == 0.0:
        raise DegenerateConic("no quadratic part")
    if abs(disc) <= max(tol, 1e-8) * qnorm**2:
        # parabola: axis is the null direction of the quadratic part
        Q = np.array([[a, bb / 2], [bb / 2, c]])
        w, vec = np.linalg.eigh(Q)
        axis_uv = vec[:, int(np.argmin(np.abs(w)))]
        _origin, e1, e2 = plane.chart()
        axis3 = axis_uv[0] * e1 + axis_uv[1] * e2
        axis3 /= np.linalg.norm(axis3)
        if abs(abs(axis3[2]) - 1.0) <= max(tol, 1e-8):
            return IsotropicClass.VERTICAL_PARABOLA
        return IsotropicClass.NOT_ISOTROPIC
    if disc < 0:
        # ellipse: is the Oxy projection of the samples a circle?
        xy = pts[:, :2]
        span = np.linalg.svd(xy - xy.mean(axis=0), compute_uv=False)
        if span[1] <= max(tol, 1e-8) * max(span[0], 1e-300):
            return IsotropicClass.NOT_ISOTROPIC  # projection collapses
        A2 = np.column_stack([2 * xy, np.ones(len(xy))])
        b2 = (xy * xy).sum(axis=1)
        sol, *_ = np.linalg.lstsq(A2, b2, rcond=None)
        cxy = sol[:2]
        r2 = sol[2] + cxy @ cxy
        if r2 <= 0:
            return IsotropicClass.NOT_ISOTROPIC
        r = np.sqrt(r2)
        rms = np.sqrt(np.mean((np.linalg.norm(xy - cxy, axis=1) - r) ** 2))
        if rms <= max(tol, 1e-8) * max(r, 1.0):
            return IsotropicClass.CIRCULAR_PROJECTION_ELLIPSE
        return IsotropicClass.NOT_ISOTROPIC
    return IsotropicClass.NOT_ISOTROPIC
