import numpy as np
import pytest

from cyclides.errors import DegreeCap
from cyclides.polynomial import (
    MultiPoly,
    Plane,
    X,
    Y,
    Z,
    sphere_poly,
    torus_poly,
)


def ex5_poly():
    return (X * X - Z * Z) * (3.0 * Z - 2.0) + (Y - Z) * (
        3.0 * Y * Z - 2.0 * Y - 4.0 * Z + 2.0
    )


def random_poly(rng, degree=4, terms=12):
    out = {}
    for _ in range(terms):
        i = rng.integers(0, degree + 1)
        j = rng.integers(0, degree + 1 - i)
        k = rng.integers(0, degree + 1 - i - j)
        out[(int(i), int(j), int(k))] = rng.uniform(-2, 2)
    return MultiPoly(out)


class TestEval:
    def test_unit_sphere_point(self):
        assert sphere_poly().eval((1, 0, 0)) == 0.0

    def test_empty_poly(self):
        p = MultiPoly({})
        assert p.eval((1.4, -2.2, 0.3)) == 0.0
        assert p.degree == 0

    @pytest.mark.parametrize("t", [-1.0, 0.0, 1.0, 2.0])
    def test_cubic_vanishes_on_diagonal_line(self, t):
        assert ex5_poly().eval((t, t, t)) == pytest.approx(0.0, abs=1e-12)

    def test_eval_many_matches_eval(self):
        rng = np.random.default_rng(0)
        p = random_poly(rng)
        pts = rng.uniform(-2, 2, size=(50, 3))
        batch = p.eval_many(pts)
        singles = np.array([p.eval(q) for q in pts])
        np.testing.assert_allclose(batch, singles, rtol=1e-13, atol=1e-13)


class TestGradient:
    def test_sphere_gradient(self):
        np.testing.assert_allclose(
            sphere_poly().gradient((1, 0, 0)), [2.0, 0.0, 0.0]
        )

    def test_constant_gradient(self):
        np.testing.assert_allclose(
            MultiPoly.constant(3.5).gradient((1, 2, 3)), [0.0, 0.0, 0.0]
        )

    def test_torus_gradient_matches_central_difference(self):
        p = torus_poly(2.0, 1.0)
        pt = np.array([np.sqrt(3), 1.0, 1.0])  # on the surface
        h = 1e-5
        fd = np.empty(3)
        for a in range(3):
            e = np.zeros(3)
            e[a] = h
            fd[a] = (p.eval(pt + e) - p.eval(pt - e)) / (2 * h)
        np.testing.assert_allclose(p.gradient(pt), fd, atol=1e-6)

    def test_random_gradients_match_finite_differences(self):
        rng = np.random.default_rng(3)
        h = 1e-5
        for _ in range(50):
            p = random_poly(rng)
            pt = rng.uniform(-1.5, 1.5, size=3)
            g = p.gradient(pt)
            fd = np.empty(3)
            for a in range(3):
                e = np.zeros(3)
                e[a] = h
                fd[a] = (p.eval(pt + e) - p.eval(pt - e)) / (2 * h)
            tol = max(1e-6, 1e-4 * float(np.linalg.norm(g)))
            assert np.max(np.abs(g - fd)) <= tol


class TestRestrictToPlane:
    def test_sphere_to_z0_is_unit_circle(self):
        r = sphere_poly().restrict_to_plane(Plane((0, 0, 1), 0.0))
        want = np.zeros((3, 3))
        want[0, 0] = -1.0
        want[2, 0] = 1.0
        want[0, 2] = 1.0
        np.testing.assert_allclose(r.cmat, want, atol=1e-14)

    def test_plane_poly_restricted_to_itself_vanishes(self):
        r = Z.restrict_to_plane(Plane((0, 0, 1), 0.0))
        assert r.is_zero(1e-15)

    def test_torus_z0_section_is_two_concentric_circles(self):
        r = torus_poly(2.0, 1.0).restrict_to_plane(Plane((0, 0, 1), 0.0))
        assert r.degree(1e-12 * r.coeff_norm()) == 4
        th = np.linspace(0, 2 * np.pi, 9)
        for radius in (1.0, 3.0):
            vals = r.eval(radius * np.cos(th), radius * np.sin(th))
            assert np.max(np.abs(vals)) < 1e-12

    def test_degree_never_grows(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            p = random_poly(rng)
            n = rng.normal(size=3)
            pl = Plane(n, rng.uniform(-1, 1))
            r = p.restrict_to_plane(pl)
            assert r.degree(1e-12 * max(r.coeff_norm(), 1e-300)) <= p.degree

    def test_degree_attained_for_generic_plane_on_corpus(self):
        corpus = [sphere_poly(), torus_poly(2.0, 1.0), X * Y * Z - 1.0]
        pl = Plane((0.3, -0.5, 0.81), 0.37)
        for p in corpus:
            r = p.restrict_to_plane(pl)
            assert r.degree(1e-9 * r.coeff_norm()) == p.degree


class TestHomogenize:
    def test_circle_cylinder(self):
        h = (X * X + Y * Y - 1.0).homogenize()
        assert h.terms == {(2, 0, 0, 0): 1.0, (0, 2, 0, 0): 1.0, (0, 0, 0, 2): -1.0}

    def test_degree_one(self):
        assert X.homogenize().terms == {(1, 0, 0, 0): 1.0}

    def test_quartic_normal_form_instance(self):
        s = X * X + Y * Y + Z * Z
        h = (s * s - 1.0).homogenize()
        assert h.terms[(0, 0, 0, 4)] == -1.0
        assert h.terms[(4, 0, 0, 0)] == 1.0
        assert h.terms[(2, 2, 0, 0)] == 2.0
        assert h.degree == 4

    def test_substitute_w1_roundtrip(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            p = random_poly(rng)
            assert p.homogenize().substitute_w1() == p


class TestArithmetic:
    def test_degree_cap(self):
        with pytest.raises(DegreeCap):
            MultiPoly({(9, 0, 0): 1.0})
        p = MultiPoly({(4, 0, 0): 1.0})
        with pytest.raises(DegreeCap):
            (p * p) * X

    def test_zero_coefficients_dropped(self):
        p = MultiPoly({(1, 0, 0): 1.0, (0, 1, 0): 0.0})
        assert (0, 1, 0) not in p.terms
        assert (p - p).is_zero()

    def test_restrict_to_line_on_ruling(self):
        p = MultiPoly(
            {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): -1.0, (0, 0, 0): -1.0}
        )
        coeffs = p.restrict_to_line((1, 0, 0), np.array([0, 1, 1]) / np.sqrt(2))
        assert np.max(np.abs(coeffs)) < 1e-15
