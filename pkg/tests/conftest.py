import numpy as np
import pytest

from cyclides import Circle3, MultiPoly
from cyclides.families import CurveFamily, SampledCurve
from cyclides.gallery import torus_entry


def line_curve(point, direction, ts, param):
    point = np.asarray(point, dtype=float)
    direction = np.asarray(direction, dtype=float)
    return SampledCurve(param, point + np.outer(ts, direction))


def hyperboloid_families():
    """Rulings and horizontal circles of x^2 + y^2 - z^2 = 1."""
    ts = np.linspace(-2, 2, 9)
    lines = [
        line_curve(
            (np.cos(s), np.sin(s), 0), (-np.sin(s), np.cos(s), 1), ts, float(s)
        )
        for s in np.linspace(0, 2 * np.pi, 12, endpoint=False)
    ]
    circles = [
        SampledCurve(
            c, Circle3((0, 0, c), np.sqrt(1 + c * c), (0, 0, 1)).points(24)
        )
        for c in (-1.0, -0.5, 0.0, 0.5, 1.0)
    ]
    return CurveFamily("Lines", lines), CurveFamily("Circles", circles)


def cone_families():
    tpos = np.linspace(0.2, 2.5, 9)
    lines = [
        line_curve((0, 0, 0), (np.cos(s), np.sin(s), 1.0), tpos, float(s))
        for s in np.linspace(0, 2 * np.pi, 12, endpoint=False)
    ]
    circles = [
        SampledCurve(c, Circle3((0, 0, c), c, (0, 0, 1)).points(24))
        for c in (0.5, 1.0, 1.5, 2.0)
    ]
    return CurveFamily("Lines", lines), CurveFamily("Circles", circles)


def cylinder_families(b=1.0):
    """b = 1 gives the circular cylinder; other b give elliptic sections."""
    ts = np.linspace(-2, 2, 9)
    lines = [
        line_curve((np.cos(s), b * np.sin(s), 0), (0, 0, 1.0), ts, float(s))
        for s in np.linspace(0, 2 * np.pi, 12, endpoint=False)
    ]
    th = np.linspace(0, 2 * np.pi, 24, endpoint=False)
    circles = [
        SampledCurve(
            c,
            np.stack([np.cos(th), b * np.sin(th), np.full_like(th, c)], axis=-1),
        )
        for c in (-1.0, 0.0, 1.0, 2.0)
    ]
    return CurveFamily("Lines", lines), CurveFamily("Circles", circles)


def plane_families():
    ts = np.linspace(-2, 2, 9)
    lines = [
        line_curve((0, c, 0), (1, 0, 0), ts, c) for c in (-1.0, 0.0, 1.0)
    ]
    circles = [
        SampledCurve(c, Circle3((c, 0, 0), c, (0, 0, 1)).points(24))
        for c in (0.5, 1.0, 1.5)
    ]
    return CurveFamily("Lines", lines), CurveFamily("Circles", circles)


def canonical_quadric_polys():
    return {
        "hyperboloid": MultiPoly(
            {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): -1.0, (0, 0, 0): -1.0}
        ),
        "cone": MultiPoly({(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): -1.0}),
        "cylinder": MultiPoly({(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 0): -1.0}),
        "plane": MultiPoly({(0, 0, 1): 1.0}),
    }


def rotation(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    K = np.array(
        [
            [0, -axis[2], axis[1]],
            [axis[2], 0, -axis[0]],
            [-axis[1], axis[0], 0],
        ]
    )
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


def great_circle_families(n_fam=7, n_circ=8, n_pts=24, seed=7):
    """Families of unit-sphere great circles swept about distinct axes."""
    rng = np.random.default_rng(seed)
    fams = []
    for _ in range(n_fam):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        m = np.cross(axis, [1.0, 0.3, 0.2])
        m /= np.linalg.norm(m)
        curves = []
        for t in np.linspace(0, np.pi, n_circ, endpoint=False):
            n = rotation(axis, t) @ m
            curves.append(
                SampledCurve(float(t), Circle3((0, 0, 0), 1.0, n).points(n_pts))
            )
        fams.append(CurveFamily("Circles", curves))
    return fams


@pytest.fixture(scope="session")
def torus21():
    return torus_entry(2.0, 1.0)
