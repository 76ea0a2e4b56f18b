"""Geometry toolkit for surfaces carrying line and circle families."""

from .circles import (
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
from .darboux import (
    DarbouxBranch,
    darboux_inverse,
    darboux_map,
    maps_circle_to_line,
    orthogonal_to_unit_sphere,
    pullback_implicit,
)
from .families import (
    ClassificationReport,
    CurveFamily,
    FourFamiliesResult,
    FourFamiliesVerdict,
    SampledCurve,
    TakeuchiResult,
    TorusClass,
    classify_line_circle_surface,
    cospherical_families,
    four_families_pipeline,
    homology_class_mod2,
    intersection_parity,
    planes_parallel,
    select_even_subfamily,
    standard_torus_chart,
    takeuchi_pipeline,
)
from .gallery import GALLERY, GalleryEntry, list_entries, torus_entry
from .pluecker import (
    CurveSampler,
    PluckerLine,
    line_through,
    lines_meeting_three,
    lines_meeting_two,
    point_on_line,
)
from .polynomial import (
    DEFAULT_TOL,
    MultiPoly,
    Plane,
    Tolerance,
    sphere_poly,
    torus_poly,
)
from .surfaces import (
    CyclideForm,
    ImplicitSurface,
    QuadricClass,
    classify_quadric,
    contains_circle,
    contains_line,
    is_darboux_cyclide,
    is_isotropic_cyclide,
    plane_section_degree,
    section_circles,
    section_is_single_circle,
)

__version__ = "0.1.0"
