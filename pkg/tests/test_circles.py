import numpy as np
import pytest

from cyclides.circles import (
    COINCIDENT,
    Circle3,
    IsotropicClass,
    Sphere,
    circle_through,
    circular_points,
    classify_isotropic,
    cospherical,
    fit_circle,
    intersect_circles,
    transversal_at,
)
from cyclides.errors import DegenerateCircle, DegenerateConic, NotIncident
from cyclides.polynomial import Plane, torus_poly


class TestCircleThrough:
    def test_equator_points(self):
        c = circle_through((1, 0, 0), (0, 1, 0), (-1, 0, 0))
        np.testing.assert_allclose(c.center, [0, 0, 0], atol=1e-14)
        assert c.radius == pytest.approx(1.0)
        np.testing.assert_allclose(np.abs(c.normal), [0, 0, 1], atol=1e-14)

    def test_collinear_rejected(self):
        with pytest.raises(DegenerateCircle):
            circle_through((0, 0, 0), (1, 0, 0), (2, 0, 0))

    def test_oblique_torus_circle_points(self):
        # three points on a torus(2,1) oblique circle, each checked on
        # the implicit surface first
        pts = [
            (np.sqrt(3), 1.0, 1.0),
            (0.0, 3.0, 0.0),
            (-np.sqrt(3), 1.0, -1.0),
        ]
        tor = torus_poly(2.0, 1.0)
        for p in pts:
            assert tor.eval(p) == pytest.approx(0.0, abs=1e-12)
        c = circle_through(*pts)
        np.testing.assert_allclose(c.center, [0, 1, 0], atol=1e-12)
        assert c.radius == pytest.approx(2.0, abs=1e-12)


class TestFitCircle:
    def test_exact_samples_roundtrip(self):
        circle = Circle3((0.3, -1.2, 2.0), 1.7, (0.2, 0.5, 0.9))
        fitted, rms = fit_circle(circle.points(100))
        assert rms <= 1e-12 * circle.radius
        np.testing.assert_allclose(fitted.center, circle.center, atol=1e-12)
        assert fitted.radius == pytest.approx(circle.radius, abs=1e-12)

    def test_noisy_samples(self):
        rng = np.random.default_rng(17)
        circle = Circle3((1.0, 2.0, -0.5), 2.0, (0.1, 0.9, 0.3))
        pts = circle.points(100) + rng.normal(scale=1e-6, size=(100, 3))
        _fitted, rms = fit_circle(pts)
        assert rms <= 3e-6 * circle.radius

    def test_quartic_section_branch(self):
        # one branch of a plane section known to factor into two unit
        # circles centered (+-2, 0, 0)
        th = np.linspace(0, 2 * np.pi, 40, endpoint=False)
        pts = np.stack(
            [2.0 + np.cos(th), np.zeros_like(th), np.sin(th)], axis=-1
        )
        fitted, rms = fit_circle(pts)
        assert rms <= 1e-12
        np.testing.assert_allclose(fitted.center, [2, 0, 0], atol=1e-12)
        assert fitted.radius == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(np.abs(fitted.normal), [0, 1, 0], atol=1e-12)

    def test_collinear_cloud_rejected(self):
        pts = np.outer(np.linspace(0, 1, 10), [1.0, 2.0, 3.0])
        with pytest.raises(DegenerateCircle):
            fit_circle(pts)

    def test_roundtrip_random_circles(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            center = rng.uniform(-3, 3, 3)
            radius = rng.uniform(0.2, 4.0)
            normal = rng.normal(size=3)
            circle = Circle3(center, radius, normal)
            fitted, rms = fit_circle(circle.points(32))
            assert rms <= 1e-10 * radius
            assert np.linalg.norm(fitted.center - circle.center) <= 1e-10 * radius
            assert abs(fitted.radius - radius) <= 1e-10 * radius


class TestIntersectCircles:
    def test_two_great_circles(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((0, 0, 0), 1.0, (0, 1, 0))
        pts = intersect_circles(c1, c2)
        assert len(pts) == 2
        got = sorted(round(float(p[0]), 9) for p in pts)
        assert got == [-1.0, 1.0]

    def test_coplanar_disjoint(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((5, 0, 0), 1.0, (0, 0, 1))
        assert intersect_circles(c1, c2) == []

    def test_meridian_parallel_tangency_point(self):
        # both constructed through (3, 0, 0) on the torus(2,1)
        meridian = Circle3((2, 0, 0), 1.0, (0, 1, 0))
        parallel = Circle3((0, 0, 0), 3.0, (0, 0, 1))
        pts = intersect_circles(meridian, parallel)
        assert len(pts) == 1
        np.testing.assert_allclose(pts[0], [3, 0, 0], atol=1e-9)

    def test_coincident(self):
        c = Circle3((1, 1, 1), 2.0, (0, 0, 1))
        assert intersect_circles(c, Circle3((1, 1, 1), 2.0, (0, 0, 1))) is COINCIDENT


class TestCospherical:
    def test_two_parallel_circles_on_sphere(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((0, 0, 1), np.sqrt(2.0), (0, 0, 1))
        sph = cospherical(c1, c2)
        assert isinstance(sph, Sphere)
        np.testing.assert_allclose(sph.center, [0, 0, 1], atol=1e-9)
        assert sph.radius == pytest.approx(np.sqrt(2.0), abs=1e-9)

    def test_two_great_circles(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((0, 0, 0), 1.0, (0, 1, 0))
        sph = cospherical(c1, c2)
        assert isinstance(sph, Sphere)
        np.testing.assert_allclose(sph.center, [0, 0, 0], atol=1e-9)
        assert sph.radius == pytest.approx(1.0, abs=1e-9)

    def test_far_apart_circles_are_not(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        oblique = Circle3((10, 1, 0), 2.0, (-0.5, 0, np.sqrt(3) / 2))
        assert cospherical(c1, oblique) is None

    def test_coplanar_circles_share_a_plane(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((0.5, 0, 0), 2.0, (0, 0, 1))
        out = cospherical(c1, c2)
        assert isinstance(out, Plane)
        np.testing.assert_allclose(np.abs(out.normal), [0, 0, 1], atol=1e-12)

    def test_two_common_points_imply_cospherical(self):
        # build pairs sharing two points by construction
        rng = np.random.default_rng(31)
        hits = 0
        for _ in range(100):
            a = rng.uniform(-2, 2, 3)
            b = rng.uniform(-2, 2, 3)
            if np.linalg.norm(a - b) < 0.5:
                continue
            c1 = circle_through(a, b, rng.uniform(-2, 2, 3))
            c2 = circle_through(a, b, rng.uniform(-2, 2, 3))
            pts = intersect_circles(c1, c2, 1e-7)
            if pts is COINCIDENT or len(pts) != 2:
                continue
            hits += 1
            assert cospherical(c1, c2, 1e-7) is not None
        assert hits > 50  # the generator really exercises the branch


class TestTransversalAt:
    def test_meridian_parallel_orthogonal(self):
        meridian = Circle3((2, 0, 0), 1.0, (0, 1, 0))
        parallel = Circle3((0, 0, 0), 3.0, (0, 0, 1))
        assert transversal_at(meridian, parallel, (3, 0, 0))

    def test_circle_with_itself(self):
        c = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        assert not transversal_at(c, c, (1, 0, 0))

    def test_internally_tangent_circles(self):
        c1 = Circle3((0, 0, 0), 2.0, (0, 0, 1))
        c2 = Circle3((1, 0, 0), 1.0, (0, 0, 1))
        assert not transversal_at(c1, c2, (2, 0, 0))

    def test_point_off_circle(self):
        c1 = Circle3((0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((0, 0, 0), 1.0, (0, 1, 0))
        with pytest.raises(NotIncident):
            transversal_at(c1, c2, (5, 5, 5))


class TestCircularPoints:
    def _projectively(self, p, q):
        k = np.argmax(np.abs(q))
        return np.allclose(p / p[k], q / q[k], atol=1e-12)

    def test_plane_z0(self):
        a, b = circular_points(Plane((0, 0, 1), 0.0))
        want1 = np.array([1, 1j, 0, 0])
        want2 = np.array([1, -1j, 0, 0])
        assert self._projectively(a, want1) or self._projectively(a, want2)
        assert self._projectively(b, want1) or self._projectively(b, want2)
        assert not self._projectively(a, b)

    def test_plane_x0(self):
        a, _b = circular_points(Plane((1, 0, 0), 0.0))
        want1 = np.array([0, 1, 1j, 0])
        want2 = np.array([0, 1, -1j, 0])
        assert self._projectively(a, want1) or self._projectively(a, want2)

    def test_random_planes_satisfy_absolute_conic(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            pl = Plane(rng.normal(size=3), rng.uniform(-2, 2))
            for p in circular_points(pl):
                assert abs(p[0] ** 2 + p[1] ** 2 + p[2] ** 2) < 1e-12
                assert p[3] == 0
                assert abs(np.dot(p[:3], pl.normal)) < 1e-12

    def test_outputs_are_conjugate(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            pl = Plane(rng.normal(size=3), rng.uniform(-2, 2))
            a, b = circular_points(pl)
            np.testing.assert_allclose(np.conj(a), b, atol=1e-14)


class TestClassifyIsotropic:
    def test_vertical_parabola_section(self):
        # plane x = 1 section of the cubic graph z = x y (y - x)
        y = np.linspace(-2, 2, 25)
        pts = np.stack([np.ones_like(y), y, y * y - y], axis=-1)
        assert classify_isotropic(pts) is IsotropicClass.VERTICAL_PARABOLA

    def test_unit_circle_projects_to_itself(self):
        th = np.linspace(0, 2 * np.pi, 24, endpoint=False)
        pts = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=-1)
        assert (
            classify_isotropic(pts)
            is IsotropicClass.CIRCULAR_PROJECTION_ELLIPSE
        )

    def test_cubic_curve_is_not_a_conic(self):
        y = np.linspace(-1.5, 1.5, 25)
        pts = np.stack([np.zeros_like(y), y, y**3], axis=-1)
        with pytest.raises(DegenerateConic):
            classify_isotropic(pts)

    def test_tilted_parabola_not_isotropic(self):
        # parabola with horizontal axis in the plane y = 0
        x = np.linspace(-2, 2, 25)
        pts = np.stack([x * x, np.zeros_like(x), x], axis=-1)
        assert classify_isotropic(pts) is IsotropicClass.NOT_ISOTROPIC

    def test_slanted_ellipse_without_circular_shadow(self):
        th = np.linspace(0, 2 * np.pi, 24, endpoint=False)
        u = np.cos(th) * 2.0
        v = np.sin(th)
        pts = np.stack([u, v, v], axis=-1)  # plane y = z, elliptic shadow
        assert classify_isotropic(pts) is IsotropicClass.NOT_ISOTROPIC
