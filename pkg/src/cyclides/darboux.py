"""The conformal 2-to-1 map ``p -> 2p / (|p|^2 + 1)`` and friends.

The map fixes the unit sphere pointwise, folds space along inversion
(``p`` and ``p/|p|^2`` share an image), sends every circle orthogonal
to the unit sphere onto the chord joining its two intersection points,
and pulls quadrics back to quartics whose leading part is a multiple of
``(x^2+y^2+z^2)^2``.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DegreeCap, OutsideImage
from .polynomial import MultiPoly, as_point
from .surfaces import ImplicitSurface


class DarbouxBranch(Enum):
    """The two preimages of an interior point have radii r and 1/r."""

    INSIDE_UNIT_BALL = "inside"
    OUTSIDE_UNIT_BALL = "outside"


def darboux_map(p):
    """Image of a point; always lands in the closed unit ball."""
    p = as_point(p)
    return 2.0 * p / (p @ p + 1.0)


def darboux_map_many(pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    return 2.0 * pts / ((pts * pts).sum(axis=1, keepdims=True) + 1.0)


def darboux_inverse(q, branch):
    """Preimage of ``q`` on the requested branch.

    The map preserves rays from the origin, so the preimage radius
    solves ``rho^2 - (2/|q|) rho + 1 = 0``; the two roots are
    reciprocal.  Points with ``|q| = 1`` are fixed; ``|q| > 1`` is
    outside the image.
    """
    q = as_point(q)
    nq = float(np.linalg.norm(q))
    if nq > 1.0 + 1e-12:
        raise OutsideImage(f"|q| = {nq} > 1")
    if abs(nq - 1.0) <= 1e-12:
        return q.copy()
    if nq == 0.0:
        if branch is DarbouxBranch.INSIDE_UNIT_BALL:
            return np.zeros(3)
        raise OutsideImage("the origin has no finite outside-branch preimage")
    root = np.sqrt(max(0.0, 1.0 - nq * nq))
    if branch is DarbouxBranch.INSIDE_UNIT_BALL:
        rho = (1.0 - root) / nq
    else:
        rho = (1.0 + root) / nq
    return q * (rho / nq)


def pullback_implicit(surface, cap=8):
    """Preimage surface: substitute the map and clear denominators.

    For degree-d input the result is ``sum c 2^(i+j+k) x^i y^j z^k
    (|p|^2+1)^(d-i-j-k)``, of degree at most 2d; the zero set is exactly
    the preimage of the input's zero set.  No square-free reduction is
    attempted (the pullback of the unit sphere itself comes out doubled).
    """
    poly = surface.poly
    d = poly.degree
    if 2 * d > cap:
        raise DegreeCap(f"pullback degree {2 * d} exceeds cap {cap}")
    x = MultiPoly.variable(0)
    y = MultiPoly.variable(1)
    z = MultiPoly.variable(2)
    s1 = x * x + y * y + z * z + 1.0
    s1_pows = [MultiPoly.constant(1.0)]
    for _ in range(d):
        s1_pows.append(s1_pows[-1] * s1)
    acc = MultiPoly({})
    for (i, j, k), c in poly.terms.items():
        term = MultiPoly({(i, j, k): c * 2.0 ** (i + j + k)})
        acc = acc + term * s1_pows[d - i - j - k]
    name = f"pullback({surface.name})" if surface.name else None
    return ImplicitSurface(acc, name)


def orthogonal_to_unit_sphere(circle, tol=1e-7):
    """Power-of-origin criterion: ``|center|^2 = radius^2 + 1``.

    This is the pencil condition (the sphere carrying the circle as a
    great circle cuts the unit sphere at right angles); it is necessary
    for the circle itself to cross the unit sphere orthogonally.
    """
    lhs = float(circle.center @ circle.center)
    rhs = circle.radius**2 + 1.0
    return bool(abs(lhs - rhs) <= tol * (1.0 + lhs + rhs))


def maps_circle_to_line(circle, tol=1e-9, samples=16):
    """True when the images of circle samples are collinear (rank test
    on the centered image cloud)."""
    img = darboux_map_many(circle.points(samples))
    q = img - img.mean(axis=0)
    s = np.linalg.svd(q, compute_uv=False)
    return bool(s[1] <= max(tol, 1e-15) * max(s[0], 1e-300))
