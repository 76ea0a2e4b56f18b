"""Lines of projective 3-space as points of the Grassmann quadric.

A line through homogeneous points ``(x1,y1,z1,w1)`` and
``(x2,y2,z2,w2)`` gets the six coordinates

    (x1 y2 - x2 y1, x1 z2 - x2 z1, x1 w2 - x2 w1,
     y1 z2 - y2 z1, y1 w2 - y2 w1, z1 w2 - z2 w1)

which satisfy ``p0 p5 - p1 p4 + p2 p3 = 0``.  The module also carries
the numeric solver for lines meeting one, two, or three sampled curves;
the three-curve case seeds a parameter grid and refines with damped
Gauss-Newton on the incidence residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circles import Circle3
from .errors import DegenerateLine, IdenticalCurves, NonIsolatedFamily
from .polynomial import as_hpoint

# projective merge radius for duplicate solutions
_MERGE_EPS = 1e-6

# fraction of seed cells that converged solutions may occupy before the
# result is reported as a non-isolated family instead of sampled
_FAMILY_CELL_FRACTION = 0.25


@dataclass(frozen=True)
class PluckerLine:
    """Line of P^3 as six homogeneous coordinates on the Grassmann quadric."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p)
        if p.shape != (6,):
            raise ValueError("need exactly 6 coordinates")
        if not np.iscomplexobj(p):
            p = p.astype(np.float64)
        if np.linalg.norm(p) == 0.0:
            raise DegenerateLine("all six coordinates vanish")
        object.__setattr__(self, "p", p)

    def relation_residual(self):
        """|p0 p5 - p1 p4 + p2 p3|, zero exactly on the quadric."""
        p = self.p
        return float(abs(p[0] * p[5] - p[1] * p[4] + p[2] * p[3]))

    def norm(self):
        return float(np.linalg.norm(self.p))

    def matrix(self):
        """Antisymmetric 4x4 whose column space is the line's 2-plane."""
        p = self.p
        m = np.zeros((4, 4), dtype=p.dtype)
        m[0, 1], m[0, 2], m[0, 3] = p[0], p[1], p[2]
        m[1, 2], m[1, 3], m[2, 3] = p[3], p[4], p[5]
        return m - m.T

    def span(self):
        """Orthonormal basis (4x2) of the line's 2-dimensional span."""
        u, s, _vt = np.linalg.svd(self.matrix())
        return u[:, :2]

    def point_direction(self):
        """Affine representative ``(point, direction)`` for a real line
        not at infinity."""
        q = self.span()
        # find combinations with w != 0 and w == 0
        w = q[3, :]
        if np.linalg.norm(w) < 1e-14 * np.linalg.norm(q):
            raise DegenerateLine("line lies in the plane at infinity")
        # point: column mix with w = 1; direction: mix with w = 0
        c = np.array([w[1], -w[0]])
        dirv = (q @ c)[:3]
        k = np.argmax(np.abs(w))
        pt = (q[:, k] / q[3, k])[:3]
        return np.real(pt), np.real(dirv / np.linalg.norm(dirv))


def line_through(a, b, tol=1e-10):
    """Line through two homogeneous points; they must be projectively distinct."""
    a = as_hpoint(a)
    b = as_hpoint(b)
    p = np.array(
        [
            a[0] * b[1] - b[0] * a[1],
            a[0] * b[2] - b[0] * a[2],
            a[0] * b[3] - b[0] * a[3],
            a[1] * b[2] - b[1] * a[2],
            a[1] * b[3] - b[1] * a[3],
            a[2] * b[3] - b[2] * a[3],
        ]
    )
    scale = np.linalg.norm(a) * np.linalg.norm(b)
    if np.linalg.norm(p) <= tol * scale:
        raise DegenerateLine("points are projectively equal")
    if not np.iscomplexobj(a) and not np.iscomplexobj(b):
        p = p.real
    if np.iscomplexobj(p) and np.max(np.abs(p.imag)) <= 1e-15 * np.max(np.abs(p)):
        p = p.real
    return PluckerLine(p)


def line_from_point_direction(point, direction):
    a = np.append(np.asarray(point, dtype=np.float64), 1.0)
    d = np.asarray(direction, dtype=np.float64)
    b = np.append(np.asarray(point, dtype=np.float64) + d / np.linalg.norm(d), 1.0)
    return line_through(a, b)


def point_on_line(line, a, tol=1e-9):
    """True when the homogeneous point lies on the line, by the rank test
    on the reconstructed 2-plane."""
    a = as_hpoint(a)
    q = line.span()
    a = a / np.linalg.norm(a)
    resid = np.linalg.norm(a - q @ (q.conj().T @ a))
    return bool(resid <= tol)


def point_line_distance(pts, point, direction):
    """Euclidean distance from affine points to an affine line."""
    pts = np.atleast_2d(pts)
    d = np.asarray(direction, dtype=np.float64)
    d = d / np.linalg.norm(d)
    q = pts - np.asarray(point, dtype=np.float64)
    return np.linalg.norm(np.cross(q, d), axis=-1)


def projective_distance(l1, l2):
    """Sine of the angle between the two 6-vectors up to scale."""
    u = l1.p / np.linalg.norm(l1.p)
    v = l2.p / np.linalg.norm(l2.p)
    c = abs(np.vdot(u, v))
    return float(np.sqrt(max(0.0, 1.0 - min(1.0, c) ** 2)))


# ---------------------------------------------------------------------------
# curve samplers
# ---------------------------------------------------------------------------


@dataclass
class CurveSampler:
    """One-parameter curve ``t -> homogeneous point`` on a real interval.

    ``map`` takes a scalar parameter; vectorized evaluation is used when
    the callable accepts arrays, otherwise it falls back to a loop.
    Circle-backed samplers carry analytic derivatives.
    """

    map: Callable[[float], np.ndarray]
    interval: tuple[float, float]
    n: int = 64
    periodic: bool = False
    derivative: Optional[Callable[[float], np.ndarray]] = None
    circle: Optional[Circle3] = None
    _cache: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_circle(cls, circle, n=64):
        e1, e2 = circle.frame()

        def cmap(t):
            t = np.asarray(t, dtype=np.float64)
            pts = (
                circle.center
                + circle.radius * np.cos(t)[..., None] * e1
                + circle.radius * np.sin(t)[..., None] * e2
            )
            return np.concatenate([pts, np.ones(t.shape + (1,))], axis=-1)

        def cder(t):
            t = np.asarray(t, dtype=np.float64)
            return circle.radius * (
                -np.sin(t)[..., None] * e1 + np.cos(t)[..., None] * e2
            )

        return cls(
            map=cmap,
            interval=(0.0, 2.0 * np.pi),
            n=n,
            periodic=True,
            derivative=cder,
            circle=circle,
        )

    def params(self):
        t0, t1 = self.interval
        return np.linspace(t0, t1, self.n, endpoint=not self.periodic)

    def samples(self):
        if self._cache is None:
            self._cache = self._map_many(self.params())
        return self._cache

    def _map_many(self, ts):
        try:
            out = np.asarray(self.map(ts))
            if out.shape == (len(ts), 4):
                return out
        except Exception:
            pass
        return np.array([self.map(t) for t in ts])

    def affine_many(self, ts):
        """Real affine points; the solver works on affine representatives."""
        h = self._map_many(np.atleast_1d(ts))
        w = h[:, 3]
        return np.real(h[:, :3] / w[:, None])

    def affine_derivative_many(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
        if self.derivative is not None:
            try:
                d = np.asarray(self.derivative(ts))
                if d.shape == (len(ts), 3):
                    return d
            except Exception:
                pass
            return np.array([self.derivative(t) for t in ts])
        h = 1e-6 * (self.interval[1] - self.interval[0])
        return (self.affine_many(ts + h) - self.affine_many(ts - h)) / (2 * h)

    def scene_scale(self):
        return max(1.0, float(np.max(np.abs(self.affine_many(self.params())))))


def _samplers_identical(g1, g2, tol=1e-9):
    if g1 is g2:
        return True
    if g1.n != g2.n or g1.interval != g2.interval:
        a = g1.affine_many(g1.params())
        b = g2.affine_many(g2.params())
        if a.shape != b.shape:
            return False
        return bool(np.max(np.linalg.norm(a - b, axis=1)) <= tol)
    a = g1.affine_many(g1.params())
    b = g2.affine_many(g2.params())
    return bool(np.max(np.linalg.norm(a - b, axis=1)) <= tol)


# ---------------------------------------------------------------------------
# curve-curve intersections (for the exclusion rule)
# ---------------------------------------------------------------------------


def curve_intersections(g1, g2, tol=1e-9):
    """Common points of two sampled curves, by coarse search plus
    Gauss-Newton refinement of ``|g1(s) - g2(t)|``."""
    s = g1.params()
    t = g2.params()
    A = g1.affine_many(s)
    B = g2.affine_many(t)
    scale = max(g1.scene_scale(), g2.scene_scale())
    d2 = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
    found = []
    # every coarse near-minimum is refined; duplicates merged afterwards
    cand = np.argwhere(d2 <= (0.2 * scale) ** 2)
    if len(cand) > 256:
        order = np.argsort(d2[cand[:, 0], cand[:, 1]])
        cand = cand[order[:256]]
    for i, j in cand:
        si, tj = s[i], t[j]
        for _ in range(30):
            a = g1.affine_many([si])[0]
            b = g2.affine_many([tj])[0]
            r = a - b
            da = g1.affine_derivative_many([si])[0]
            db = g2.affine_derivative_many([tj])[0]
            J = np.column_stack([da, -db])
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
            si += step[0]
            tj += step[1]
            if np.linalg.norm(step) < 1e-14:
                break
        a = g1.affine_many([si])[0]
        b = g2.affine_many([tj])[0]
        if np.linalg.norm(a - b) <= max(tol, 1e-9) * scale:
            found.append(0.5 * (a + b))
    merged = []
    for p in found:
        if all(np.linalg.norm(p - q) > 1e-6 * scale for q in merged):
            merged.append(p)
    return merged


# ---------------------------------------------------------------------------
# lines meeting two curves
# ---------------------------------------------------------------------------


def lines_meeting_two(g1, g2, tol=1e-9, exclusion_radius=None):
    """Samples of the two-parameter family of lines through both curves.

    Lines passing through a common point of the two curves are excluded
    (within ``exclusion_radius``, default ``1e-6`` of the scene scale).
    """
    if _samplers_identical(g1, g2):
        raise IdenticalCurves("the two curves coincide")
    scale = max(g1.scene_scale(), g2.scene_scale())
    if exclusion_radius is None:
        exclusion_radius = 1e-6 * scale
    inter = curve_intersections(g1, g2, tol)
    A = g1.affine_many(g1.params())
    B = g2.affine_many(g2.params())
    out = []
    for a in A:
        for b in B:
            if np.linalg.norm(a - b) <= 1e-9 * scale:
                continue
            if inter:
                d = point_line_distance(np.array(inter), a, b - a)
                if np.min(d) <= exclusion_radius:
                    continue
            out.append(line_through(np.append(a, 1.0), np.append(b, 1.0)))
    return out


# ---------------------------------------------------------------------------
# lines meeting three curves
# ---------------------------------------------------------------------------


def _incidence_residual(A, B, C):
    d = B - A
    L = np.linalg.norm(d, axis=1)
    v = np.cross(C - A, d)
    return v / L[:, None], d, L, v


def lines_meeting_three(g1, g2, g3, tol=1e-9, grid=64, exclusion_radius=None):
    """Lines meeting three pairwise distinct sampled curves.

    Seeds a ``grid x grid`` parameter lattice on the first two curves,
    picks the closest third-curve parameter for each seed, and refines
    all seeds at once with damped Gauss-Newton on the incidence
    residual.  Converged solutions through pairwise curve intersections
    are dropped; the rest are merged at projective distance ``1e-6``.

    Raises :class:`NonIsolatedFamily` when converged solutions occupy at
    least 25% of the seed cells: then the lines fill a two-parameter
    set (every chord works, as for coplanar concentric circles) and
    discrete samples would misrepresent it.
    """
    for x, y in ((g1, g2), (g2, g3), (g1, g3)):
        if _samplers_identical(x, y):
            raise IdenticalCurves("curves must be pairwise distinct")
    scale = max(g.scene_scale() for g in (g1, g2, g3))
    if exclusion_radius is None:
        exclusion_radius = 1e-6 * scale
    resid_tol = max(tol, 1e-11) * scale

    s0, s1 = g1.interval
    t0, t1 = g2.interval
    ss = np.linspace(s0, s1, grid, endpoint=not g1.periodic)
    tt = np.linspace(t0, t1, grid, endpoint=not g2.periodic)
    S, T = np.meshgrid(ss, tt, indexing="ij")
    s = S.ravel().copy()
    t = T.ravel().copy()
    N = s.size

    # seed the third parameter at the sample closest to each seed line
    A = g1.affine_many(s)
    B = g2.affine_many(t)
    u_samples = g3.params()
    C_samples = g3.affine_many(u_samples)
    d = B - A
    L = np.linalg.norm(d, axis=1)
    keep = L > 1e-9 * scale
    v = np.cross(C_samples[None, :, :] - A[:, None, :], d[:, None, :])
    dist = np.linalg.norm(v, axis=2) / np.maximum(L[:, None], 1e-300)
    u = u_samples[np.argmin(dist, axis=1)].astype(np.float64)

    lam = np.full(N, 1e-10)
    r, d, L, _v = _incidence_residual(A, B, g3.affine_many(u))
    rnorm = np.linalg.norm(r, axis=1)
    span = np.array([s1 - s0, t1 - t0, g3.interval[1] - g3.interval[0]])

    for _ in range(40):
        A = g1.affine_many(s)
        B = g2.affine_many(t)
        C = g3.affine_many(u)
        dA = g1.affine_derivative_many(s)
        dB = g2.affine_derivative_many(t)
        dC = g3.affine_derivative_many(u)
        r, d, L, v = _incidence_residual(A, B, C)
        rnorm = np.linalg.norm(r, axis=1)
        Linv = 1.0 / np.maximum(L, 1e-300)
        dv_s = -(np.cross(dA, d) + np.cross(C - A, dA))
        dr_s = dv_s * Linv[:, None] + v * ((d * dA).sum(1) * Linv**3)[:, None]
        dr_t = np.cross(C - A, dB) * Linv[:, None] - v * (
            (d * dB).sum(1) * Linv**3
        )[:, None]
        dr_u = np.cross(dC, d) * Linv[:, None]
        J = np.stack([dr_s, dr_t, dr_u], axis=2)
        JtJ = np.einsum("nij,nik->njk", J, J)
        Jtr = np.einsum("nij,ni->nj", J, r)
        H = JtJ + (lam * np.trace(JtJ, axis1=1, axis2=2) + 1e-300)[:, None, None] * np.eye(3)
        try:
            step = -np.linalg.solve(H, Jtr[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = -np.einsum(
                "nij,nj->ni", np.linalg.pinv(H), Jtr
            )
        step = np.clip(step, -0.25 * span, 0.25 * span)
        s_new, t_new, u_new = s + step[:, 0], t + step[:, 1], u + step[:, 2]
        r_new, _, _, _ = _incidence_residual(
            g1.affine_many(s_new), g2.affine_many(t_new), g3.affine_many(u_new)
        )
        rnorm_new = np.linalg.norm(r_new, axis=1)
        better = rnorm_new <= rnorm
        s = np.where(better, s_new, s)
        t = np.where(better, t_new, t)
        u = np.where(better, u_new, u)
        lam = np.where(better, lam * 0.3, lam * 10.0)
        lam = np.clip(lam, 1e-14, 1e6)
        if np.max(np.where(better, rnorm_new, rnorm)) <= 0.01 * resid_tol:
            break

    A = g1.affine_many(s)
    B = g2.affine_many(t)
    C = g3.affine_many(u)
    r, d, L, _v = _incidence_residual(A, B, C)
    rnorm = np.linalg.norm(r, axis=1)
    ok = (rnorm <= resid_tol) & (L > 1e-9 * scale) & keep

    if not np.any(ok):
        return []

    # family detection: converged seeds snapped back to the seed lattice
    ds = (s1 - s0) / grid
    dt = (t1 - t0) / grid
    si = np.floor(((s[ok] - s0) / ds)).astype(int) % grid
    ti = np.floor(((t[ok] - t0) / dt)).astype(int) % grid
    cells = len(set(zip(si.tolist(), ti.tolist())))
    fraction = cells / float(grid * grid)
    if fraction >= _FAMILY_CELL_FRACTION:
        raise NonIsolatedFamily(fraction)

    # exclusion: drop solutions through pairwise curve intersections
    inter = []
    for x, y in ((g1, g2), (g2, g3), (g1, g3)):
        inter.extend(curve_intersections(x, y, tol))
    lines = []
    seen = set()
    for a, b in zip(A[ok], B[ok]):
        if inter:
            dists = point_line_distance(np.array(inter), a, b - a)
            if np.min(dists) <= exclusion_radius:
                continue
        ln = line_through(np.append(a, 1.0), np.append(b, 1.0))
        p = np.real(ln.p)
        p = p / np.linalg.norm(p)
        k = int(np.argmax(np.abs(p)))
        if p[k] < 0:
            p = -p
        key = tuple(np.round(p / _MERGE_EPS).astype(np.int64).tolist())
        if key in seen:
            continue
        seen.add(key)
        lines.append(ln)
    return lines
