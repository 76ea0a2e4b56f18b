import numpy as np
import pytest

from cyclides.circles import Circle3
from cyclides.errors import DegenerateLine, IdenticalCurves, NonIsolatedFamily
from cyclides.pluecker import (
    CurveSampler,
    PluckerLine,
    curve_intersections,
    line_through,
    lines_meeting_three,
    lines_meeting_two,
    point_line_distance,
    point_on_line,
    projective_distance,
)
from cyclides.polynomial import MultiPoly, hpoint


def hyperboloid_circle(z):
    return Circle3((0, 0, z), np.sqrt(1 + z * z), (0, 0, 1))


class TestLineThrough:
    def test_xy_axis_points(self):
        l = line_through(hpoint(1, 0, 0, 0), hpoint(0, 1, 0, 0))
        np.testing.assert_allclose(l.p, [1, 0, 0, 0, 0, 0])

    def test_zw_axis_points(self):
        l = line_through(hpoint(0, 0, 1, 0), hpoint(0, 0, 0, 1))
        np.testing.assert_allclose(l.p, [0, 0, 0, 0, 0, 1])

    def test_equal_points_rejected(self):
        with pytest.raises(DegenerateLine):
            line_through(hpoint(1, 2, 3, 1), hpoint(2, 4, 6, 2))

    def test_relation_residual_random(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            a = np.append(rng.uniform(-1, 1, 3), 1.0)
            b = np.append(rng.uniform(-1, 1, 3), 1.0)
            l = line_through(a, b)
            assert l.relation_residual() <= 1e-12 * l.norm() ** 2

    def test_swap_negates_coordinates(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = hpoint(*rng.uniform(-1, 1, 4))
            b = hpoint(*rng.uniform(-1, 1, 4))
            lab = line_through(a, b)
            lba = line_through(b, a)
            np.testing.assert_allclose(lab.p, -lba.p, atol=1e-14)
            assert projective_distance(lab, lba) < 1e-12


class TestPointOnLine:
    def test_defining_points_lie_on_line(self):
        a = hpoint(0.3, -1.0, 2.0, 1.0)
        b = hpoint(1.1, 0.4, -0.7, 1.0)
        l = line_through(a, b)
        assert point_on_line(l, a)
        assert point_on_line(l, b)

    def test_off_axis_point(self):
        l = line_through(hpoint(0, 0, 0, 1), hpoint(1, 0, 0, 1))  # the x axis
        assert not point_on_line(l, hpoint(0, 0, 1, 0))

    def test_affine_midpoint(self):
        a = hpoint(0.2, 0.5, -1.0, 1.0)
        b = hpoint(1.0, -0.5, 2.0, 1.0)
        mid = (np.asarray(a) + np.asarray(b)) / 2
        assert point_on_line(line_through(a, b), mid)

    def test_point_direction_roundtrip(self):
        a = np.array([0.3, -1.0, 2.0])
        b = np.array([1.1, 0.4, -0.7])
        l = line_through(np.append(a, 1.0), np.append(b, 1.0))
        pt, d = l.point_direction()
        assert point_line_distance(np.vstack([a, b]), pt, d).max() < 1e-9


class TestLinesMeetingTwo:
    def test_hyperboloid_chords_meet_both_circles(self):
        g1 = CurveSampler.from_circle(hyperboloid_circle(0.0), 12)
        g2 = CurveSampler.from_circle(hyperboloid_circle(1.0), 12)
        lines = lines_meeting_two(g1, g2)
        assert len(lines) == 144
        for l in lines[::13]:
            pt, d = l.point_direction()
            for circ in (hyperboloid_circle(0.0), hyperboloid_circle(1.0)):
                # the chord crosses each circle plane on the circle
                t = (circ.plane().offset - circ.normal @ pt) / (circ.normal @ d)
                x = pt + t * d
                assert circ.distance_to(x[None, :])[0] <= 1e-9

    def test_tangent_circles_exclude_pencil_through_contact(self):
        # coplanar circles touching at the origin
        c1 = Circle3((1.0, 0, 0), 1.0, (0, 0, 1))
        c2 = Circle3((-2.0, 0, 0), 2.0, (0, 0, 1))
        g1 = CurveSampler.from_circle(c1, 24)
        g2 = CurveSampler.from_circle(c2, 24)
        contact = np.zeros(3)
        inter = curve_intersections(g1, g2, 1e-9)
        assert len(inter) == 1
        np.testing.assert_allclose(inter[0], contact, atol=1e-9)
        for l in lines_meeting_two(g1, g2):
            pt, d = l.point_direction()
            assert point_line_distance(contact[None, :], pt, d)[0] > 1e-7

    def test_identical_curves_rejected(self):
        g = CurveSampler.from_circle(hyperboloid_circle(0.0), 16)
        with pytest.raises(IdenticalCurves):
            lines_meeting_two(g, g)


class TestLinesMeetingThree:
    @pytest.fixture(scope="class")
    def ruling_lines(self):
        g1 = CurveSampler.from_circle(hyperboloid_circle(-1.0), 64)
        g2 = CurveSampler.from_circle(hyperboloid_circle(0.0), 64)
        g3 = CurveSampler.from_circle(hyperboloid_circle(1.0), 64)
        return lines_meeting_three(g1, g2, g3, tol=1e-9)

    def test_solutions_exist(self, ruling_lines):
        assert len(ruling_lines) > 100

    def test_rulings_lie_on_quadric(self, ruling_lines):
        quadric = MultiPoly(
            {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): -1.0, (0, 0, 0): -1.0}
        )
        for l in ruling_lines[:: max(1, len(ruling_lines) // 100)]:
            pt, d = l.point_direction()
            coeffs = quadric.restrict_to_line(pt, d)
            assert np.max(np.abs(coeffs)) <= 1e-8

    def test_rulings_meet_every_horizontal_circle(self, ruling_lines):
        # a line in the quadric crosses each z = const circle of it
        for z in (-1.0, -0.25, 0.5, 1.0):
            circ = hyperboloid_circle(z)
            for l in ruling_lines[:: max(1, len(ruling_lines) // 40)]:
                pt, d = l.point_direction()
                t = (z - pt[2]) / d[2]
                x = pt + t * d
                assert circ.distance_to(x[None, :])[0] <= 1e-8

    def test_concentric_coplanar_reports_family(self):
        g1 = CurveSampler.from_circle(Circle3((0, 0, 0), 1.0, (0, 0, 1)), 48)
        g2 = CurveSampler.from_circle(Circle3((0, 0, 0), 2.0, (0, 0, 1)), 48)
        g3 = CurveSampler.from_circle(Circle3((0, 0, 0), 3.0, (0, 0, 1)), 48)
        with pytest.raises(NonIsolatedFamily) as info:
            lines_meeting_three(g1, g2, g3, grid=48)
        assert info.value.occupied_fraction >= 0.25

    def test_pairwise_distinct_precondition(self):
        g1 = CurveSampler.from_circle(hyperboloid_circle(0.0), 16)
        g2 = CurveSampler.from_circle(hyperboloid_circle(1.0), 16)
        with pytest.raises(IdenticalCurves):
            lines_meeting_three(g1, g2, g2)

    def test_cubic_surface_lines_found_among_solutions(self):
        # circles of the cubic in three horizontal planes; all returned
        # lines meet them, and those lying on the cubic are among the
        # four known lines
        from cyclides.gallery import _ex5_poly, _ex5_section_circle
        from cyclides.surfaces import ImplicitSurface, contains_line
        from cyclides.pluecker import line_from_point_direction

        poly = _ex5_poly()
        surface = ImplicitSurface(poly)
        zs = (0.0, 0.4, 1.0)
        samplers = [
            CurveSampler.from_circle(_ex5_section_circle(z), 64) for z in zs
        ]
        lines = lines_meeting_three(*samplers, tol=1e-9, grid=48)
        assert lines
        known = [
            line_from_point_direction((0, 0, 0), (1, 1, 1)),
            line_from_point_direction((0, 0, 0), (-1, 1, 1)),
            line_from_point_direction((0, 1, 0), (1, -1, 2)),
            line_from_point_direction((0, 1, 0), (-1, -1, 2)),
        ]
        on_surface = 0
        for l in lines:
            pt, d = l.point_direction()
            if contains_line(surface, pt, d, 1e-7):
                on_surface += 1
                assert min(projective_distance(l, k) for k in known) < 1e-5
        assert on_surface > 0
