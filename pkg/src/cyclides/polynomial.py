"""Numeric core: tolerances, planes, and multivariate polynomials.

Points are plain float arrays of shape ``(3,)``; homogeneous points of
projective 3-space are complex arrays of shape ``(4,)`` ordered
``(x, y, z, w)`` with the plane at infinity ``w = 0``.  Implicit
surfaces are carried by :class:`MultiPoly`, a dense-term trivariate real
polynomial capped at total degree 8, which is enough for the pullback of
a quartic under the degree-doubling conformal substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegreeCap

MAX_DEGREE = 8


@dataclass(frozen=True)
class Tolerance:
    """Residual thresholds standing in for exact containment statements.

    abs_eps: absolute residual bound.
    rel_eps: relative bound, scaled by coefficient or coordinate norms.
    rank_eps: eigenvalue/singular-value cutoff for rank decisions,
        relative to the largest magnitude.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-7
    rank_eps: float = 1e-8

    def __post_init__(self):
        if not (self.abs_eps > 0 and self.rel_eps > 0 and self.rank_eps > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.abs_eps > 1e-6:
            raise ValueError("abs_eps must be <= 1e-6")


DEFAULT_TOL = Tolerance()


def as_point(p):
    """Coerce to a finite float 3-vector."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def as_hpoint(p):
    """Coerce to a complex homogeneous 4-vector, not all zero."""
    p = np.asarray(p, dtype=np.complex128)
    if p.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {p.shape}")
    if not np.any(p):
        raise ValueError("homogeneous coordinates cannot all vanish")
    return p


def hpoint(x, y, z, w=1.0):
    return as_hpoint([x, y, z, w])


def affine_to_hpoint(p):
    p = as_point(p)
    return np.array([p[0], p[1], p[2], 1.0], dtype=np.complex128)


def hpoints_projectively_equal(a, b, tol=1e-12):
    """Projective equality: the 2x4 stack of the normalized points is rank 1."""
    a = as_hpoint(a)
    b = as_hpoint(b)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    s = np.linalg.svd(np.vstack([a, b]), compute_uv=False)
    return s[1] <= tol * s[0]


def orthonormal_frame(normal):
    """Deterministic right-handed frame ``(e1, e2, n)`` for a unit normal.

    The seed axis is the coordinate axis least aligned with the normal
    (smallest index on ties), so equal normals always produce equal
    frames and restrictions are reproducible.
    """
    n = np.asarray(normal, dtype=np.float64)
    n = n / np.linalg.norm(n)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(n)))] = 1.0
    e1 = np.cross(n, axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return e1, e2, n


@dataclass(frozen=True)
class Plane:
    """Affine plane ``normal . p = offset`` with unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=np.float64)
        nrm = np.linalg.norm(n)
        if not np.isfinite(nrm) or nrm == 0.0:
            raise ValueError("plane normal must be a nonzero finite vector")
        object.__setattr__(self, "normal", n / nrm)
        object.__setattr__(self, "offset", float(self.offset) / nrm)

    @classmethod
    def from_point_normal(cls, point, normal):
        n = np.asarray(normal, dtype=np.float64)
        return cls(n, float(np.dot(n, as_point(point))))

    def chart(self):
        """Origin and in-plane axes of the deterministic chart."""
        e1, e2, n = orthonormal_frame(self.normal)
        return self.offset * n, e1, e2

    def to_chart(self, pts):
        """Map world points to chart coordinates ``(u, v)``."""
        origin, e1, e2 = self.chart()
        q = np.atleast_2d(pts) - origin
        return np.stack([q @ e1, q @ e2], axis=-1)

    def from_chart(self, uv):
        origin, e1, e2 = self.chart()
        uv = np.atleast_2d(uv)
        return origin + np.outer(uv[:, 0], e1) + np.outer(uv[:, 1], e2)

    def signed_distance(self, pts):
        return np.atleast_2d(pts) @ self.normal - self.offset


class MultiPoly:
    """Real polynomial in (x, y, z) stored as exponent-triple -> coefficient.

    Zero coefficients are never stored; total degree is capped at
    :data:`MAX_DEGREE`.  Instances are immutable values.
    """

    __slots__ = ("terms", "_arrays", "_partials")

    def __init__(self, terms=None):
        clean = {}
        for pows, c in (terms or {}).items():
            i, j, k = (int(e) for e in pows)
            if i < 0 or j < 0 or k < 0:
                raise ValueError("negative exponent")
            c = float(c)
            if not np.isfinite(c):
                raise ValueError("non-finite coefficient")
            if c != 0.0:
                key = (i, j, k)
                clean[key] = clean.get(key, 0.0) + c
        clean = {p: c for p, c in clean.items() if c != 0.0}
        if clean and max(sum(p) for p in clean) > MAX_DEGREE:
            raise DegreeCap(f"total degree exceeds cap {MAX_DEGREE}")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "_arrays", None)
        object.__setattr__(self, "_partials", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def variable(cls, axis):
        pows = [0, 0, 0]
        pows[axis] = 1
        return cls({tuple(pows): 1.0})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def from_string_free(cls, coeffs):
        """Build from {(i,j,k): c} without the zero-drop already applied."""
        return cls(coeffs)

    # -- basic queries ---------------------------------------------------------

    @property
    def degree(self):
        if not self.terms:
            return 0
        return max(sum(p) for p in self.terms)

    def coeff_norm(self):
        if not self.terms:
            return 0.0
        return float(np.linalg.norm(list(self.terms.values())))

    def is_zero(self):
        return not self.terms

    def homogeneous_part(self, d):
        return MultiPoly({p: c for p, c in self.terms.items() if sum(p) == d})

    def drop_small(self, threshold):
        return MultiPoly(
            {p: c for p, c in self.terms.items() if abs(c) > threshold}
        )

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for (i, j, k), c in self.terms.items():
            mono = "".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip("xyz", (i, j, k))
                if e
            )
            bits.append(f"{c:+g}{('*' + mono) if mono else ''}")
        return f"MultiPoly({' '.join(bits)})"

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = MultiPoly.constant(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0.0) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = MultiPoly.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return MultiPoly({p: c * other for p, c in self.terms.items()})
        out = {}
        for (i1, j1, k1), c1 in self.terms.items():
            for (i2, j2, k2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(1.0)
        for _ in range(int(n)):
            out = out * self
        return out

    # -- evaluation ------------------------------------------------------------

    def _term_arrays(self):
        cached = self._arrays
        if cached is None:
            if self.terms:
                powers = np.array(list(self.terms.keys()), dtype=np.int64)
                coefs = np.array(list(self.terms.values()), dtype=np.float64)
            else:
                powers = np.zeros((0, 3), dtype=np.int64)
                coefs = np.zeros(0, dtype=np.float64)
            cached = (coefs, powers)
            object.__setattr__(self, "_arrays", cached)
        return cached

    def eval(self, pt):
        """Evaluate at a single point (exact up to floating rounding)."""
        return float(self.eval_many(np.asarray(pt, dtype=np.float64)[None, :])[0])

    def eval_many(self, pts):
        coefs, powers = self._term_arrays()
        return kernels.eval_poly(coefs, powers, pts)

    def eval_abs_many(self, pts):
        """Sum of absolute term values; the local conditioning scale."""
        coefs, powers = self._term_arrays()
        return kernels.eval_poly_abs(coefs, powers, pts)

    def eval_complex(self, pt):
        """Evaluate at a complex 3-vector (term loop, no kernel)."""
        x, y, z = pt
        return sum(
            c * x**i * y**j * z**k for (i, j, k), c in self.terms.items()
        )

    # -- calculus --------------------------------------------------------------

    def partial(self, axis):
        out = {}
        for pows, c in self.terms.items():
            e = pows[axis]
            if e == 0:
                continue
            q = list(pows)
            q[axis] = e - 1
            out[tuple(q)] = out.get(tuple(q), 0.0) + c * e
        return MultiPoly(out)

    def partials(self):
        cached = self._partials
        if cached is None:
            cached = tuple(self.partial(a) for a in range(3))
            object.__setattr__(self, "_partials", cached)
        return cached

    def gradient(self, pt):
        """Componentwise partial derivatives at ``pt``."""
        return np.array([p.eval(pt) for p in self.partials()])

    def gradient_many(self, pts):
        return np.stack([p.eval_many(pts) for p in self.partials()], axis=-1)

    # -- substitutions ---------------------------------------------------------

    def restrict_to_plane(self, plane):
        """Compose with the plane's orthonormal chart; returns a :class:`Poly2`.

        Because the chart is an isometry of the plane the total degree
        never grows, and rotation-invariant polynomials restrict to the
        same bivariate polynomial for every admissible frame.
        """
        origin, e1, e2 = plane.chart()
        d = self.degree
        size = d + 1
        # linear forms o + u e1 + v e2 per axis as (2, 2) coefficient blocks
        lin = []
        for a in range(3):
            m = np.zeros((2, 2))
            m[0, 0] = origin[a]
            m[1, 0] = e1[a]
            m[0, 1] = e2[a]
            lin.append(m)
        # power tables per axis up to the needed exponent
        pow_tables = []
        for a in range(3):
            maxe = max((p[a] for p in self.terms), default=0)
            tab = [np.ones((1, 1))]
            for _ in range(maxe):
                tab.append(_conv2(tab[-1], lin[a]))
            pow_tables.append(tab)
        acc = np.zeros((size, size))
        for (i, j, k), c in self.terms.items():
            block = _conv2(_conv2(pow_tables[0][i], pow_tables[1][j]), pow_tables[2][k])
            acc[: block.shape[0], : block.shape[1]] += c * block
        return Poly2(acc)

    def restrict_to_line(self, point, direction):
        """Univariate coefficients of ``p(point + t * direction)``, low to high."""
        point = as_point(point)
        direction = np.asarray(direction, dtype=np.float64)
        d = self.degree
        lin = [np.array([point[a], direction[a]]) for a in range(3)]
        tabs = []
        for a in range(3):
            maxe = max((p[a] for p in self.terms), default=0)
            tab = [np.ones(1)]
            for _ in range(maxe):
                tab.append(np.convolve(tab[-1], lin[a]))
            tabs.append(tab)
        acc = np.zeros(d + 1)
        for (i, j, k), c in self.terms.items():
            block = np.convolve(np.convolve(tabs[0][i], tabs[1][j]), tabs[2][k])
            acc[: block.size] += c * block
        return acc

    def homogenize(self):
        """Pad each term with the power of ``w`` that makes it degree-homogeneous."""
        d = self.degree
        return MultiPoly4(
            {(i, j, k, d - i - j - k): c for (i, j, k), c in self.terms.items()}
        )


def _conv2(a, b):
    """Dense 2-D polynomial product of coefficient matrices."""
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0.0:
                out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
    return out


class Poly2:
    """Dense bivariate polynomial ``sum c[i, j] u^i v^j``."""

    __slots__ = ("cmat",)

    def __init__(self, cmat):
        self.cmat = np.asarray(cmat, dtype=np.float64)

    def coeff_norm(self):
        return float(np.linalg.norm(self.cmat))

    def degree(self, threshold=0.0):
        """Total degree after discarding coefficients at or below ``threshold``."""
        deg = 0
        found = False
        for i in range(self.cmat.shape[0]):
            for j in range(self.cmat.shape[1]):
                if abs(self.cmat[i, j]) > threshold:
                    deg = max(deg, i + j)
                    found = True
        return deg if found else 0

    def is_zero(self, threshold=0.0):
        return bool(np.all(np.abs(self.cmat) <= threshold))

    def eval(self, u, v):
        return np.polynomial.polynomial.polyval2d(u, v, self.cmat)

    def eval_grid(self, us, vs):
        """Values on the tensor grid, shape ``(len(us), len(vs))``."""
        return kernels.eval_grid2(self.cmat, us, vs)

    def partial_u(self):
        if self.cmat.shape[0] == 1:
            return Poly2(np.zeros((1, self.cmat.shape[1])))
        return Poly2(self.cmat[1:, :] * np.arange(1, self.cmat.shape[0])[:, None])

    def partial_v(self):
        if self.cmat.shape[1] == 1:
            return Poly2(np.zeros((self.cmat.shape[0], 1)))
        return Poly2(self.cmat[:, 1:] * np.arange(1, self.cmat.shape[1])[None, :])


class MultiPoly4:
    """Homogeneous 4-variable form produced by :meth:`MultiPoly.homogenize`."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {
            tuple(int(e) for e in p): float(c)
            for p, c in terms.items()
            if c != 0.0
        }

    @property
    def degree(self):
        return max((sum(p) for p in self.terms), default=0)

    def eval_complex(self, pt):
        x, y, z, w = np.asarray(pt, dtype=np.complex128)
        return sum(
            c * x**i * y**j * z**k * w**l
            for (i, j, k, l), c in self.terms.items()
        )

    def substitute_w1(self):
        """Set ``w = 1``; recovers the affine polynomial exactly."""
        out = {}
        for (i, j, k, _l), c in self.terms.items():
            out[(i, j, k)] = out.get((i, j, k), 0.0) + c
        return MultiPoly(out)


# ---------------------------------------------------------------------------
# stock polynomials
# ---------------------------------------------------------------------------

X = MultiPoly.variable(0)
Y = MultiPoly.variable(1)
Z = MultiPoly.variable(2)


def sphere_poly(center=(0.0, 0.0, 0.0), radius=1.0):
    cx, cy, cz = center
    return (
        (X - cx) * (X - cx)
        + (Y - cy) * (Y - cy)
        + (Z - cz) * (Z - cz)
        - radius**2
    )


def torus_poly(major, minor):
    """Implicit torus around the z-axis: tube radius ``minor`` about a
    circle of radius ``major`` in the plane z = 0."""
    s = X * X + Y * Y + Z * Z + MultiPoly.constant(major**2 - minor**2)
    return s * s - (4.0 * major**2) * (X * X + Y * Y)
