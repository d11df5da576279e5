"""
Tests for the projective model of hyperbolic 4-space.

Covers the Lorentz form, point classification, distances, polarity,
perpendicular feet and hyperplane relations.
"""

import math

import numpy as np
import pytest
from scipy.linalg import null_space

from src.core.cell24 import build_cell24, facet_hyperplanes
from src.core.errors import (
    DegenerateLine,
    DegeneratePole,
    IdealPole,
    LorentzError,
    NotProperPoint,
)
from src.core.lorentz_model import (
    MINKOWSKI,
    HyperplaneForm,
    PointKind,
    ProjectivePoint,
    RelationKind,
    apply_isometry,
    bilinear_form,
    canonical_gauge,
    classify_point,
    coxeter_gram,
    distance,
    foot_on_hyperplane,
    foot_on_line,
    hyperboloid_lift,
    hyperplane_through,
    is_lorentz_isometry,
    lorentz,
    pair_relation,
    point_on_line,
    polar_hyperplane,
    pole_of,
    random_isometry,
)

R = 1.0 / math.sqrt(2.0)
ORIGIN = ProjectivePoint([1.0, 0.0, 0.0, 0.0, 0.0])
A1 = ProjectivePoint([1.0, R, R, 0.0, 0.0])
A3 = ProjectivePoint([1.0, R, 0.0, R, 0.0])
A7 = ProjectivePoint([1.0, 0.0, R, R, 0.0])
Q = ProjectivePoint([1.0, 5 * R / 7, 3 * R / 7, 0.0, 2 * R / 7])


def _interior_points(rng, n):
    points = []
    while len(points) < n:
        v = rng.uniform(-0.9, 0.9, 4)
        if v @ v < 0.8:
            points.append(ProjectivePoint(np.concatenate(([1.0], v))))
    return points


@pytest.fixture(scope="module")
def cell():
    return build_cell24()


class TestProjectivePoint:
    """Test ProjectivePoint normalization and equality."""

    def test_normalizes_to_unit_x0(self):
        """Scaled coordinates are normalized to x0 = 1."""
        p = ProjectivePoint([2.0, 1.0, 0.0, 0.0, 0.0])
        assert p.coords[0] == 1.0
        assert p.coords[1] == pytest.approx(0.5)

    def test_projective_equality(self):
        """Nonzero multiples are the same point."""
        assert ProjectivePoint([3.0, 0.0, 0.0, 0.0, 0.0]) == ORIGIN
        assert ProjectivePoint([-1.0, -R, -R, 0.0, 0.0]) == A1
        assert A1 != A3

    def test_coordinates_are_read_only(self):
        """Stored coordinates cannot be modified in place."""
        with pytest.raises(ValueError):
            A1.coords[0] = 2.0

    def test_rejects_zero_and_wrong_length(self):
        """Zero vectors and wrong lengths are rejected."""
        with pytest.raises(LorentzError):
            ProjectivePoint([0.0] * 5)
        with pytest.raises(LorentzError):
            ProjectivePoint([1.0, 0.0, 0.0])


class TestLorentzForm:
    """Test the bilinear form and point classification."""

    def test_origin_has_norm_minus_one(self):
        assert bilinear_form(ORIGIN, ORIGIN) == pytest.approx(-1.0)

    def test_vertices_are_ideal(self):
        """Vertices have zero self-product."""
        assert bilinear_form(A1, A1) == pytest.approx(0.0, abs=1e-15)

    def test_vertex_pair_product(self):
        assert bilinear_form(A1, A3) == pytest.approx(-0.5)

    @pytest.mark.parametrize(
        "coords,expected",
        [
            ([1.0, 0.0, 0.0, 0.0, 0.0], PointKind.INTERIOR),
            ([1.0, 0.0, R, R, 0.0], PointKind.IDEAL),
            ([1.0, 2.0, 0.0, 0.0, 0.0], PointKind.OUTER),
        ],
    )
    def test_classify_point(self, coords, expected):
        """Points are classified by the sign of <x, x>."""
        assert classify_point(ProjectivePoint(coords)) is expected

    def test_lift_is_on_upper_sheet(self):
        """Hyperboloid lift has <x, x> = -1 and x0 > 0."""
        lifted = hyperboloid_lift(Q)
        assert bilinear_form(lifted, lifted) == pytest.approx(-1.0)
        assert lifted[0] > 0

    def test_lift_rejects_ideal(self):
        with pytest.raises(NotProperPoint):
            hyperboloid_lift(A1)


class TestDistance:
    """Test hyperbolic distance."""

    def test_distance_to_self_is_zero(self):
        assert distance(ORIGIN, ORIGIN) == 0.0

    def test_edge_midpoint_to_facet_center(self):
        """Distance T1 to T3 is arcosh(sqrt 2)."""
        t1 = ProjectivePoint((A1.coords + A3.coords) / 2)
        t3 = ProjectivePoint([1.0, R / 2, R / 2, R / 2, R / 2])
        assert distance(t1, t3) == pytest.approx(math.acosh(math.sqrt(2.0)), abs=1e-12)

    def test_distance_q_h(self, cell):
        """Distance from Q to the midpoint of A1A10."""
        h = ProjectivePoint((cell.vertex(1).coords + cell.vertex(10).coords) / 2)
        expected = math.acosh(7 * math.sqrt(2.0) / (4 * math.sqrt(5.0)))
        assert distance(Q, h) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.45815, abs=5e-6)

    def test_distance_is_symmetric(self):
        p = ProjectivePoint([1.0, 0.3, 0.0, -0.2, 0.1])
        assert distance(p, Q) == pytest.approx(distance(Q, p), abs=1e-15)

    def test_triangle_inequality(self):
        points = _interior_points(np.random.default_rng(1), 300)
        for p, q, r in zip(points[::3], points[1::3], points[2::3]):
            assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12

    def test_scale_invariance(self):
        """Nonzero multiples of the coordinates give the same distance."""
        rng = np.random.default_rng(2)
        points = _interior_points(rng, 40)
        for p, q in zip(points[::2], points[1::2]):
            lam, mu = rng.choice([-1.0, 1.0], 2) * rng.uniform(0.01, 100.0, 2)
            scaled = distance(ProjectivePoint(lam * p.coords), ProjectivePoint(mu * q.coords))
            assert scaled == pytest.approx(distance(p, q), abs=1e-12)

    def test_distance_rejects_ideal(self):
        with pytest.raises(NotProperPoint):
            distance(A1, ORIGIN)

    def test_invariant_under_isometry(self):
        """Random isometries preserve distances."""
        rng = np.random.default_rng(7)
        p = ProjectivePoint([1.0, 0.3, 0.0, -0.2, 0.1])
        for _ in range(5):
            m = random_isometry(rng)
            assert is_lorentz_isometry(m)
            moved = distance(apply_isometry(m, p), apply_isometry(m, Q))
            assert moved == pytest.approx(distance(p, Q), abs=1e-9)


class TestPolarity:
    """Test polar hyperplanes and poles."""

    def test_coordinate_hyperplane(self):
        """Pole e1 gives the hyperplane x1 = 0."""
        form = polar_hyperplane(ProjectivePoint([0.0, 1.0, 0.0, 0.0, 0.0]))
        assert form.contains(ORIGIN)
        assert form.contains(ProjectivePoint([1.0, 0.0, 0.5, 0.0, 0.0]))
        assert not form.contains(ProjectivePoint([1.0, 0.5, 0.0, 0.0, 0.0]))

    def test_polar_of_center_is_at_infinity(self):
        """The polar of the center is x0 = 0 and misses the model."""
        form = polar_hyperplane(ORIGIN)
        assert np.allclose(form.covector, [-1.0, 0.0, 0.0, 0.0, 0.0])
        assert not form.meets_model

    def test_ideal_pole_rejected(self):
        with pytest.raises(IdealPole):
            polar_hyperplane(A1)

    def test_degenerate_pole_rejected(self):
        with pytest.raises(DegeneratePole):
            HyperplaneForm.from_pole([1.0, 1.0, 0.0, 0.0, 0.0])

    def test_facet_pole_polar_contains_facet(self, cell):
        """The pole of a facet hyperplane recovers the hyperplane through its six vertices."""
        facet = (3, 4, 7, 8, 11, 24)
        form = hyperplane_through([cell.vertex(i) for i in facet[:4]])
        recovered = polar_hyperplane(pole_of(form))
        for i in facet:
            assert recovered.contains(cell.vertex(i))

    def test_hyperplane_through_rejects_degenerate_points(self):
        with pytest.raises(LorentzError):
            hyperplane_through([A1, A3, A7])


class TestFeet:
    """Test perpendicular feet on hyperplanes and lines."""

    def test_point_on_hyperplane_is_fixed(self):
        form = polar_hyperplane(ProjectivePoint([0.0, 0.0, 0.0, 0.0, 1.0]))
        p = ProjectivePoint([1.0, 0.2, 0.1, 0.0, 0.0])
        assert foot_on_hyperplane(p, form) == p
        assert foot_on_hyperplane(ORIGIN, form) == ORIGIN

    def test_foot_of_vertex_on_adjacent_facet(self, cell):
        """A1 projects onto the midpoint T of A3A7."""
        form = hyperplane_through([cell.vertex(i) for i in (3, 4, 7, 8, 11, 24)])
        expected = ProjectivePoint([1.0, R / 2, R / 2, R, 0.0])
        assert foot_on_hyperplane(cell.vertex(1), form) == expected

    def test_foot_is_orthogonal(self, cell):
        """The geodesic to the foot meets the hyperplane at a right angle."""
        forms = list(facet_hyperplanes(cell).values())[:6]
        for x in _interior_points(np.random.default_rng(5), 10):
            for form in forms:
                foot = foot_on_hyperplane(x, form)
                assert abs(form.evaluate(foot)) < 1e-12
                y = hyperboloid_lift(foot)
                tangents = null_space(np.vstack([MINKOWSKI @ y, form.covector]))
                for w in tangents.T:
                    assert abs(lorentz(hyperboloid_lift(x), w)) < 1e-10

    def test_foot_on_edge(self):
        """T3 projects onto the midpoint of A1A3."""
        t3 = ProjectivePoint([1.0, R / 2, R / 2, R / 2, R / 2])
        expected = ProjectivePoint((A1.coords + A3.coords) / 2)
        assert foot_on_line(t3, A1, A3) == expected

    def test_foot_of_t_on_diagonal(self, cell):
        """T projects onto A1A11 at T3."""
        t = ProjectivePoint([1.0, R / 2, R / 2, R, 0.0])
        t3 = ProjectivePoint([1.0, R / 2, R / 2, R / 2, R / 2])
        assert foot_on_line(t, cell.vertex(1), cell.vertex(11)) == t3

    def test_foot_of_t_on_class3_line(self, cell):
        """T projects onto A1A10 at Q."""
        t = ProjectivePoint([1.0, R / 2, R / 2, R, 0.0])
        assert foot_on_line(t, cell.vertex(1), cell.vertex(10)) == Q

    @pytest.mark.parametrize("eps", [1e-4, 1e-3])
    def test_foot_is_closest_point(self, cell, eps):
        """Shifting the foot along the line either way increases the distance."""
        t = ProjectivePoint([1.0, R / 2, R / 2, R, 0.0])
        targets = [t] + _interior_points(np.random.default_rng(6), 10)
        for i, j in ((1, 3), (1, 10), (1, 11), (1, 13)):
            a, b = cell.vertex(i), cell.vertex(j)
            for x in targets:
                foot = foot_on_line(x, a, b)
                (alpha, beta), *_ = np.linalg.lstsq(
                    np.column_stack([a.coords, b.coords]), foot.coords, rcond=None
                )
                weight = beta / alpha
                for shift in (-eps, eps):
                    other = point_on_line(a, b, weight * math.exp(shift))
                    assert distance(x, other) > distance(x, foot)

    def test_degenerate_line(self):
        with pytest.raises(DegenerateLine):
            foot_on_line(ORIGIN, A1, A1)


class TestPairRelation:
    """Test the mutual position of hyperplanes."""

    def test_coincident(self):
        form = polar_hyperplane(ProjectivePoint([0.0, 1.0, 0.0, 0.0, 0.0]))
        relation = pair_relation(form, form)
        assert relation.kind is RelationKind.INTERSECTING
        assert relation.angle == 0.0
        assert relation.coincident

    def test_facets_sharing_a_face_are_perpendicular(self, cell):
        """Dihedral angle of the cell is pi/2."""
        forms = [f for facet, f in facet_hyperplanes(cell).items() if {1, 3, 7} <= set(facet)]
        assert len(forms) == 2
        relation = pair_relation(*forms)
        assert relation.kind is RelationKind.PERPENDICULAR
        assert relation.angle == pytest.approx(math.pi / 2)

    def test_ultraparallel(self):
        """<u, v> = -cosh(1) gives common perpendicular length 1."""
        u = HyperplaneForm.from_pole([0.0, 1.0, 0.0, 0.0, 0.0])
        v = HyperplaneForm.from_pole([math.sinh(1.0), -math.cosh(1.0), 0.0, 0.0, 0.0])
        relation = pair_relation(u, v)
        assert relation.kind is RelationKind.ULTRAPARALLEL
        assert relation.length == pytest.approx(1.0)

    def test_intersecting_angle(self):
        u = HyperplaneForm.from_pole([0.0, 1.0, 0.0, 0.0, 0.0])
        v = HyperplaneForm.from_pole([0.0, -0.5, math.sqrt(3) / 2, 0.0, 0.0])
        relation = pair_relation(u, v)
        assert relation.kind is RelationKind.INTERSECTING
        assert relation.angle == pytest.approx(math.pi / 3)

    def test_parallel(self):
        """Hyperplanes meeting only at an ideal point."""
        u = HyperplaneForm.from_pole([0.0, 1.0, 0.0, 0.0, 0.0])
        v = HyperplaneForm.from_pole([1.0, -1.0, 1.0, 0.0, 0.0])
        assert pair_relation(u, v).kind is RelationKind.PARALLEL


class TestGauge:
    """Test canonical gauges and Coxeter Gram matrices."""

    def test_gauge_sends_center_to_reference(self, cell):
        for i in (1, 10, 24):
            gauge = canonical_gauge(cell.vertex(i))
            assert is_lorentz_isometry(gauge)
            image = apply_isometry(gauge, cell.vertex(i))
            assert image == ProjectivePoint([1.0, 0.0, 0.0, 0.0, 1.0])

    def test_coxeter_gram(self):
        gram = coxeter_gram((3, 4, 3, 4))
        assert gram.shape == (5, 5)
        assert gram[0, 1] == pytest.approx(-0.5)
        assert gram[1, 2] == pytest.approx(-R)
        assert gram[0, 2] == 0.0
