"""Implicit surface analysis.

Quadric classification by eigen-signature, recognition of the quartic
forms whose leading part is ``a (x^2+y^2+z^2)^2`` (and the variant with
``x^2+y^2``), plane-section degree, single-circle sections via marching
squares, and line/circle containment checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from skimage import measure

from .circles import Circle3, fit_circle
from .errors import (
    DegenerateCircle,
    EmptySection,
    NotACyclideCandidate,
    NotAQuadric,
    PlaneInSurface,
)
from .polynomial import DEFAULT_TOL, MultiPoly, Plane

SECTION_GRID = 512
_DEFAULT_WINDOW = 8.0


@dataclass(frozen=True)
class ImplicitSurface:
    """Zero set of a nonzero real polynomial."""

    poly: MultiPoly
    name: Optional[str] = None

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("surface polynomial must not vanish identically")

    @property
    def degree(self):
        return self.poly.degree


class QuadricClass(Enum):
    PLANE = "Plane"
    ONE_SHEETED_HYPERBOLOID = "OneSheetedHyperboloid"
    QUADRATIC_CONE = "QuadraticCone"
    ELLIPTIC_CYLINDER = "EllipticCylinder"
    SPHERE = "Sphere"
    ELLIPSOID = "Ellipsoid"
    TWO_SHEETED_HYPERBOLOID = "TwoSheetedHyperboloid"
    HYPERBOLIC_PARABOLOID = "HyperbolicParaboloid"
    ELLIPTIC_PARABOLOID = "EllipticParaboloid"
    HYPERBOLIC_CYLINDER = "HyperbolicCylinder"
    PARABOLIC_CYLINDER = "ParabolicCylinder"
    DEGENERATE_PAIR = "DegeneratePair"
    OTHER = "Other"


#: the outcome classes of the line-plus-circle classification
RULED_CIRCULAR_CLASSES = frozenset(
    {
        QuadricClass.PLANE,
        QuadricClass.ONE_SHEETED_HYPERBOLOID,
        QuadricClass.QUADRATIC_CONE,
        QuadricClass.ELLIPTIC_CYLINDER,
    }
)


@dataclass(frozen=True)
class CyclideForm:
    """Decomposition ``a S^2 + S (b x + c y + d z) + Q`` of a quartic,
    where S is ``x^2+y^2+z^2`` (kind "darboux") or ``x^2+y^2``
    (kind "isotropic") and Q has degree at most 2."""

    a: float
    b: float
    c: float
    d: float
    q: MultiPoly
    kind: str = "darboux"

    def reassemble(self):
        x = MultiPoly.variable(0)
        y = MultiPoly.variable(1)
        z = MultiPoly.variable(2)
        s = x * x + y * y + (z * z if self.kind == "darboux" else MultiPoly({}))
        lin = self.b * x + self.c * y + self.d * z
        return self.a * (s * s) + s * lin + self.q


def _quadric_matrices(poly):
    """(A, b, c) with p(x) = x^T A x + 2 b^T x + c."""
    A = np.zeros((3, 3))
    b = np.zeros(3)
    c = 0.0
    for (i, j, k), coef in poly.terms.items():
        pows = (i, j, k)
        d = i + j + k
        if d == 0:
            c = coef
        elif d == 1:
            b[pows.index(1)] = coef / 2.0
        elif d == 2:
            if 2 in pows:
                a = pows.index(2)
                A[a, a] = coef
            else:
                a, bidx = [ax for ax in range(3) if pows[ax] == 1]
                A[a, bidx] = A[bidx, a] = coef / 2.0
        else:
            raise NotAQuadric(f"degree {poly.degree} exceeds 2")
    return A, b, c


def classify_quadric(surface, tol=DEFAULT_TOL):
    """Classify a degree <= 2 implicit surface.

    Rank decisions use ``tol.rank_eps`` relative to the largest
    eigenvalue, which makes the result invariant under rigid motions and
    positive rescaling of the polynomial.  Near-degenerate data lands in
    ``OTHER`` rather than guessing.
    """
    poly = surface.poly
    if poly.degree > 2:
        raise NotAQuadric(f"degree {poly.degree} exceeds 2")
    if poly.degree <= 1:
        return QuadricClass.PLANE
    A, b, c = _quadric_matrices(poly)
    evals, evecs = np.linalg.eigh(A)
    lmax = float(np.max(np.abs(evals)))
    if lmax == 0.0:
        return QuadricClass.PLANE
    nonzero = np.abs(evals) > tol.rank_eps * lmax
    r3 = int(np.count_nonzero(nonzero))
    coeff_scale = max(lmax, float(np.linalg.norm(b)), abs(c))

    if r3 == 3:
        x0 = np.linalg.solve(A, -b)
        k = c + b @ x0
        k_zero = abs(k) <= tol.rank_eps * lmax * (1.0 + x0 @ x0)
        pos = int(np.count_nonzero(evals > 0))
        if k_zero:
            if pos in (1, 2):
                return QuadricClass.QUADRATIC_CONE
            return QuadricClass.OTHER  # single real point
        # lambda_i u_i^2 = -k: count positive normalized coefficients
        p = int(np.count_nonzero(evals / (-k) > 0))
        if p == 3:
            lam = np.abs(evals)
            if (lam.max() - lam.min()) <= 1e-6 * lam.max():
                return QuadricClass.SPHERE
            return QuadricClass.ELLIPSOID
        if p == 2:
            return QuadricClass.ONE_SHEETED_HYPERBOLOID
        if p == 1:
            return QuadricClass.TWO_SHEETED_HYPERBOLOID
        return QuadricClass.OTHER  # empty

    if r3 == 2:
        null_dir = evecs[:, ~nonzero][:, 0]
        beta = float(b @ null_dir)
        lam = evals[nonzero]
        vecs = evecs[:, nonzero]
        if abs(beta) > tol.rank_eps * coeff_scale:
            if lam[0] * lam[1] > 0:
                return QuadricClass.ELLIPTIC_PARABOLOID
            return QuadricClass.HYPERBOLIC_PARABOLOID
        b2 = vecs.T @ b
        x2 = -b2 / lam
        k = c + b2 @ x2
        k_zero = abs(k) <= tol.rank_eps * lmax * (1.0 + x2 @ x2)
        if lam[0] * lam[1] > 0:
            if k_zero:
                return QuadricClass.OTHER  # a single line
            if k * lam[0] < 0:
                return QuadricClass.ELLIPTIC_CYLINDER
            return QuadricClass.OTHER  # empty
        if k_zero:
            return QuadricClass.DEGENERATE_PAIR  # two crossing planes
        return QuadricClass.HYPERBOLIC_CYLINDER

    # r3 == 1
    null_vecs = evecs[:, ~nonzero]
    lam = evals[nonzero][0]
    vec = evecs[:, nonzero][:, 0]
    beta = np.linalg.norm(null_vecs.T @ b)
    if beta > tol.rank_eps * coeff_scale:
        return QuadricClass.PARABOLIC_CYLINDER
    b1 = float(vec @ b)
    k = c - b1 * b1 / lam
    if abs(k) <= tol.rank_eps * coeff_scale:
        return QuadricClass.DEGENERATE_PAIR  # doubled plane
    if k * lam < 0:
        return QuadricClass.DEGENERATE_PAIR  # two parallel planes
    return QuadricClass.OTHER  # empty


# ---------------------------------------------------------------------------
# cyclide-form recognition
# ---------------------------------------------------------------------------


def _monomials(degree):
    return [
        (i, j, k)
        for i in range(degree + 1)
        for j in range(degree + 1 - i)
        for k in range(degree + 1 - i - j)
        if i + j + k == degree
    ]


def _coeff_vector(poly, monos):
    return np.array([poly.terms.get(m, 0.0) for m in monos])


def _cyclide_form(surface, kind, tol):
    poly = surface.poly
    if poly.degree > 4:
        raise NotACyclideCandidate(f"degree {poly.degree} exceeds 4")
    x = MultiPoly.variable(0)
    y = MultiPoly.variable(1)
    z = MultiPoly.variable(2)
    s = x * x + y * y + (z * z if kind == "darboux" else MultiPoly({}))
    norm = max(poly.coeff_norm(), 1e-300)
    thr = tol.rel_eps * norm

    m4 = _monomials(4)
    v4 = _coeff_vector(poly.homogeneous_part(4), m4)
    t4 = _coeff_vector(s * s, m4)
    a = float(v4 @ t4 / (t4 @ t4))
    if np.linalg.norm(v4 - a * t4) > thr:
        return None

    m3 = _monomials(3)
    v3 = _coeff_vector(poly.homogeneous_part(3), m3)
    basis = np.column_stack(
        [_coeff_vector(s * x, m3), _coeff_vector(s * y, m3), _coeff_vector(s * z, m3)]
    )
    bcd, *_ = np.linalg.lstsq(basis, v3, rcond=None)
    if np.linalg.norm(v3 - basis @ bcd) > thr:
        return None
    b, c, d = (float(w) for w in bcd)

    remainder = poly - a * (s * s) - s * (b * x + c * y + d * z)
    q = MultiPoly(
        {p: co for p, co in remainder.terms.items() if sum(p) <= 2}
    )
    return CyclideForm(a, b, c, d, q, kind)


def is_darboux_cyclide(surface, tol=DEFAULT_TOL):
    """Decompose against ``S = x^2+y^2+z^2``; ``None`` when the quartic
    or cubic part does not match.  Any degree <= 2 input succeeds with
    ``a = b = c = d = 0``."""
    return _cyclide_form(surface, "darboux", tol)


def is_isotropic_cyclide(surface, tol=DEFAULT_TOL):
    """Same decomposition with ``S = x^2+y^2``."""
    return _cyclide_form(surface, "isotropic", tol)


# ---------------------------------------------------------------------------
# plane sections
# ---------------------------------------------------------------------------


def plane_section_degree(surface, plane, tol=DEFAULT_TOL):
    """Total degree of the restriction to the plane after discarding
    coefficients below ``rel_eps`` of the restricted norm."""
    restricted = surface.poly.restrict_to_plane(plane)
    if restricted.is_zero(tol.rel_eps * max(surface.poly.coeff_norm(), 1e-300)):
        raise PlaneInSurface("plane is contained in the surface")
    return restricted.degree(tol.rel_eps * restricted.coeff_norm())


def _refine_onto_curve(poly2, uv, iterations=4):
    """Newton-project chart points onto the zero set of the bivariate
    polynomial along its gradient."""
    fu = poly2.partial_u()
    fv = poly2.partial_v()
    for _ in range(iterations):
        f = poly2.eval(uv[:, 0], uv[:, 1])
        gu = fu.eval(uv[:, 0], uv[:, 1])
        gv = fv.eval(uv[:, 0], uv[:, 1])
        g2 = gu * gu + gv * gv
        g2 = np.where(g2 > 1e-300, g2, 1.0)
        uv = uv - (f / g2)[:, None] * np.column_stack([gu, gv])
    return uv


def section_branches(surface, plane, window=None, grid=SECTION_GRID):
    """Connected real branches of the plane section, as refined chart
    points.  Returns ``(branches, closed_flags)``; raises
    :class:`PlaneInSurface` / :class:`EmptySection` accordingly.
    """
    poly = surface.poly
    restricted = poly.restrict_to_plane(plane)
    if restricted.is_zero(DEFAULT_TOL.rel_eps * max(poly.coeff_norm(), 1e-300)):
        raise PlaneInSurface("plane is contained in the surface")
    w = float(window) if window is not None else _DEFAULT_WINDOW
    us = np.linspace(-w, w, grid)
    vs = np.linspace(-w, w, grid)
    F = restricted.eval_grid(us, vs)
    contours = measure.find_contours(F, 0.0)
    if not contours:
        raise EmptySection("no real section points inside the chart window")
    step = 2 * w / (grid - 1)
    branches = []
    closed = []
    for cont in contours:
        uv = np.column_stack([-w + cont[:, 0] * step, -w + cont[:, 1] * step])
        is_closed = bool(np.linalg.norm(cont[0] - cont[-1]) < 1e-9)
        if len(uv) > 512:
            idx = np.linspace(0, len(uv) - 1, 512).astype(int)
            uv = uv[idx]
        uv = _refine_onto_curve(restricted, uv)
        branches.append(uv)
        closed.append(is_closed)
    return branches, closed, restricted


def section_circles(surface, plane, tol=1e-9, window=None):
    """Per-branch circle fits of the real plane section.

    Returns a list of ``(circle, max_distance)`` for branches that fit a
    circle within ``tol``, and ``None`` entries for branches that do not.
    """
    branches, _closed, _r = section_branches(surface, plane, window)
    out = []
    for uv in branches:
        pts = plane.from_chart(uv)
        try:
            circle, _rms = fit_circle(pts)
        except DegenerateCircle:
            out.append(None)
            continue
        worst = float(np.max(circle.distance_to(pts)))
        out.append((circle, worst) if worst <= tol else None)
    return out


def section_is_single_circle(surface, plane, tol=1e-9, window=None):
    """The section circle, when the real section is one closed branch
    that fits a circle within ``tol``; ``None`` otherwise."""
    branches, closed, _r = section_branches(surface, plane, window)
    if len(branches) != 1 or not closed[0]:
        return None
    fits = _fit_branch(plane, branches[0], tol)
    return fits


def _fit_branch(plane, uv, tol):
    pts = plane.from_chart(uv)
    try:
        circle, _rms = fit_circle(pts)
    except DegenerateCircle:
        return None
    worst = float(np.max(circle.distance_to(pts)))
    return circle if worst <= tol else None


# ---------------------------------------------------------------------------
# containment
# ---------------------------------------------------------------------------


def contains_line(surface, point, direction, tol=1e-9):
    """True when the whole line lies on the surface: all coefficients of
    the substituted univariate polynomial vanish within
    ``tol * |coeffs|``."""
    d = np.asarray(direction, dtype=np.float64)
    nrm = np.linalg.norm(d)
    if nrm == 0.0:
        raise ValueError("direction must be nonzero")
    coeffs = surface.poly.restrict_to_line(point, d / nrm)
    return bool(np.max(np.abs(coeffs)) <= tol * max(surface.poly.coeff_norm(), 1e-300))


def contains_circle(surface, circle, tol=1e-9, phase=0.0):
    """True when the circle lies on the surface.

    Evaluates at ``2 deg + 1`` equispaced samples: the restriction of a
    degree-d polynomial to a circle is a trigonometric polynomial of
    degree at most d, so that many zeros force it to vanish identically.
    Residuals are compared against the local absolute-value scale of the
    polynomial at each sample.
    """
    m = 2 * surface.degree + 1
    pts = circle.points(m, phase=phase)
    vals = np.abs(surface.poly.eval_many(pts))
    scales = surface.poly.eval_abs_many(pts)
    return bool(np.all(vals <= tol * np.maximum(scales, 1e-300)))
