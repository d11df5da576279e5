"""
Tests for horoballs, their tangency and the sector volume relations.
"""

import math

import numpy as np
import pytest

from src.core.cell24 import (
    build_cell24,
    edge_midpoint,
    facet_center,
    facet_hyperplanes,
    reference_horoball,
    special_points,
)
from src.core.errors import (
    AngleOutOfRange,
    BadDimension,
    CenterNotIdeal,
    CommonCenter,
    EndpointInsideHoroball,
    NegativeChord,
    NonpositiveDistance,
    PointNotInterior,
)
from src.core.horoball_geometry import (
    Membership,
    blow_up,
    facet_clearance,
    geodesic_intersection,
    horoball_at_level,
    horoball_piece_volume,
    horocycle_offset_from_angle,
    horocyclic_arc_length,
    horosphere_contains,
    horosphere_through,
    parallel_angle_from_distance,
    sector_pair_volume,
    signed_distance,
    tangency_offset,
    tangency_point,
)
from src.core.lorentz_model import (
    ProjectivePoint,
    apply_isometry,
    distance,
    point_on_line,
    random_isometry,
)

ORIGIN = ProjectivePoint([1.0, 0.0, 0.0, 0.0, 0.0])
RHO1 = math.log(math.sqrt(2.0))


@pytest.fixture(scope="module")
def cell():
    return build_cell24()


@pytest.fixture(scope="module")
def points(cell):
    return special_points(cell)


class TestHoroball:
    """Test horoball construction and parameters."""

    def test_symmetric_gauge_parameter(self):
        """The horosphere through the origin centered at (1,0,0,0,1) has s = 0."""
        b = horosphere_through(ProjectivePoint([1.0, 0.0, 0.0, 0.0, 1.0]), ORIGIN)
        assert b.s == pytest.approx(0.0, abs=1e-15)
        assert b.level == pytest.approx(1.0)

    def test_reference_horoball_level(self, cell):
        """Reference horoballs pass through the edge midpoints at level 1/2."""
        for i in (1, 7, 13, 24):
            b = reference_horoball(cell, i)
            assert b.level == pytest.approx(0.5)
            for j in cell.neighbors(i, 1):
                assert horosphere_contains(b, edge_midpoint(cell, i, j)) is Membership.ON

    def test_horoball_at_level(self, cell):
        b = horoball_at_level(cell.vertex(1), 0.5)
        assert signed_distance(b, edge_midpoint(cell, 1, 3)) == pytest.approx(0.0, abs=1e-12)

    def test_commutes_with_isometries(self, cell, points):
        """Building a horoball and then moving it equals building it from moved points."""
        rng = np.random.default_rng(11)
        center, through = cell.vertex(1), points["T1"]
        b = horosphere_through(center, through)
        targets = [points[name] for name in ("T3", "T4", "Q", "H")]
        for _ in range(5):
            m = random_isometry(rng, boost_scale=0.3)
            moved = horosphere_through(apply_isometry(m, center), apply_isometry(m, through))
            for q in targets:
                expected = signed_distance(b, q)
                assert signed_distance(moved, apply_isometry(m, q)) == pytest.approx(
                    expected, abs=1e-9
                )

    def test_rejects_interior_center(self):
        with pytest.raises(CenterNotIdeal):
            horosphere_through(ORIGIN, ORIGIN)

    def test_rejects_ideal_through_point(self, cell):
        with pytest.raises(PointNotInterior):
            horosphere_through(cell.vertex(1), cell.vertex(3))


class TestMembership:
    """Test point location relative to a horoball."""

    def test_defining_point_is_on(self, cell, points):
        b = horosphere_through(cell.vertex(1), points["T1"])
        assert horosphere_contains(b, points["T1"]) is Membership.ON

    def test_blown_up_ball_covers_old_tangency(self, cell, points):
        b = horosphere_through(cell.vertex(1), points["T3"])
        assert horosphere_contains(b, points["T1"]) is Membership.INSIDE

    def test_center_of_cell_is_outside(self, cell, points):
        b = horosphere_through(cell.vertex(1), points["T1"])
        assert horosphere_contains(b, points["T4"]) is Membership.OUTSIDE

    def test_ideal_center_counts_as_inside(self, cell):
        b = reference_horoball(cell, 1)
        assert horosphere_contains(b, cell.vertex(1)) is Membership.INSIDE


class TestBlowUp:
    """Test moving a horosphere along its center's geodesics."""

    @pytest.mark.parametrize("t", [-0.3, 0.0, 0.25, RHO1])
    def test_level_scales_exponentially(self, cell, t):
        b = reference_horoball(cell, 1)
        moved = blow_up(b, t)
        assert moved.level == pytest.approx(0.5 * math.exp(t))
        assert signed_distance(moved, b.through) == pytest.approx(-t, abs=1e-12)

    @pytest.mark.parametrize("x,y", [(0.1, 0.2), (0.3, -0.15), (-0.2, -0.1), (RHO1, RHO1)])
    def test_offsets_compose(self, cell, points, x, y):
        b = reference_horoball(cell, 1)
        twice = b.blown_up(x).blown_up(y)
        once = b.blown_up(x + y)
        assert twice.level == pytest.approx(once.level, rel=1e-12)
        assert signed_distance(twice, points["T4"]) == pytest.approx(
            signed_distance(once, points["T4"]), abs=1e-12
        )

    def test_blow_up_through_t3(self, cell, points):
        """Growing the reference ball by log sqrt 2 reaches the facet center T3."""
        moved = reference_horoball(cell, 1).blown_up(RHO1)
        assert horosphere_contains(moved, points["T3"]) is Membership.ON


class TestGeodesicIntersection:
    """Test crossings of horospheres with geodesics from the center."""

    def test_crossing_on_edge_is_midpoint(self, cell, points):
        b = horosphere_through(cell.vertex(1), points["T1"])
        far = point_on_line(cell.vertex(1), cell.vertex(3), 4.0)
        assert geodesic_intersection(b, far) == points["T1"]

    def test_shift_along_edge(self, cell, points):
        """The T3 horosphere crosses A1A3 log sqrt 2 beyond T1."""
        assert distance(points["I0"], points["I1"]) == pytest.approx(RHO1, abs=1e-12)

    def test_i6_is_on_reference_horosphere(self, cell, points):
        b = horosphere_through(cell.vertex(1), points["T1"])
        assert horosphere_contains(b, points["I6"]) is Membership.ON

    def test_endpoint_inside_rejected(self, cell, points):
        b = horosphere_through(cell.vertex(1), points["T3"])
        with pytest.raises(EndpointInsideHoroball):
            geodesic_intersection(b, points["T1"])


class TestTangency:
    """Test signed gaps between horoballs."""

    def test_equal_type_balls_touch_at_edge_midpoints(self, cell):
        b1, b3 = reference_horoball(cell, 1), reference_horoball(cell, 3)
        assert tangency_offset(b1, b3) == pytest.approx(0.0, abs=1e-12)
        assert tangency_point(b1, b3) == edge_midpoint(cell, 1, 3)

    def test_blown_up_diagonal_balls_touch_at_facet_center(self, cell, points):
        b1 = reference_horoball(cell, 1).blown_up(RHO1)
        b11 = reference_horoball(cell, 11).blown_up(RHO1)
        assert tangency_offset(b1, b11) == pytest.approx(0.0, abs=1e-12)
        assert tangency_point(b1, b11) == points["T3"]

    def test_opposite_diagonal_touch(self, cell):
        b13 = reference_horoball(cell, 13).blown_up(RHO1)
        b11 = reference_horoball(cell, 11).blown_up(RHO1)
        assert tangency_point(b13, b11) == facet_center(cell, (4, 6, 8, 10, 11, 13))

    @pytest.mark.parametrize("t", [0.1, 0.3])
    def test_overlap_by_offset(self, cell, t):
        b1 = reference_horoball(cell, 1)
        b3 = reference_horoball(cell, 3).blown_up(t)
        assert tangency_offset(b1, b3) == pytest.approx(-t, abs=1e-12)

    @pytest.mark.parametrize("j", [3, 10, 11, 13])
    @pytest.mark.parametrize("t,u", [(0.1, 0.2), (-0.1, 0.3), (RHO1, -0.05)])
    def test_gap_drops_by_both_offsets(self, cell, j, t, u):
        """Blowing up two balls by t and u lowers their gap by t + u."""
        b1, b2 = reference_horoball(cell, 1), reference_horoball(cell, j)
        gap = tangency_offset(b1, b2)
        moved = tangency_offset(b1.blown_up(t), b2.blown_up(u))
        assert moved == pytest.approx(gap - t - u, abs=1e-10)

    def test_invariant_under_isometry(self, cell):
        rng = np.random.default_rng(3)
        b1 = reference_horoball(cell, 1).blown_up(0.2)
        b10 = reference_horoball(cell, 10)
        m = random_isometry(rng, boost_scale=0.3)
        moved = tangency_offset(b1.transformed(m), b10.transformed(m))
        assert moved == pytest.approx(tangency_offset(b1, b10), abs=1e-9)

    def test_common_center_rejected(self, cell):
        b = reference_horoball(cell, 1)
        with pytest.raises(CommonCenter):
            tangency_offset(b, b.blown_up(0.1))

    def test_reference_balls_clear_far_facets(self, cell):
        """Equal-type balls stay on the inner side of non-incident facets."""
        forms = facet_hyperplanes(cell)
        b = reference_horoball(cell, 1)
        for facet in cell.non_incident_facets(1):
            assert facet_clearance(b, forms[facet]) >= 0.0


class TestVolumeRelations:
    """Test horocyclic arcs, piece volumes and offset laws."""

    @pytest.mark.parametrize(
        "chord,expected",
        [
            (0.0, 0.0),
            (2.0 * math.asinh(1.0), 2.0),
            (math.acosh(11.0 / 8.0), math.sqrt(3.0) / 2.0),
        ],
    )
    def test_horocyclic_arc_length(self, chord, expected):
        assert horocyclic_arc_length(chord) == pytest.approx(expected)

    def test_negative_chord(self):
        with pytest.raises(NegativeChord):
            horocyclic_arc_length(-0.1)

    def test_piece_volume(self):
        assert horoball_piece_volume(0.0, 4) == 0.0
        assert horoball_piece_volume(3.0, 4) == pytest.approx(1.0)
        with pytest.raises(BadDimension):
            horoball_piece_volume(1.0, 1)

    @pytest.mark.parametrize(
        "s,phi",
        [
            (math.acosh(math.sqrt(2.0)), math.pi / 4),
            (math.acosh(2.0), math.pi / 6),
            (1e-9, math.pi / 2),
        ],
    )
    def test_parallel_angle(self, s, phi):
        assert parallel_angle_from_distance(s) == pytest.approx(phi, abs=1e-4)

    def test_parallel_angle_rejects_zero(self):
        with pytest.raises(NonpositiveDistance):
            parallel_angle_from_distance(0.0)

    @pytest.mark.parametrize(
        "phi,rho",
        [(math.pi / 4, RHO1), (math.pi / 2, 0.0), (math.pi / 6, math.log(2.0))],
    )
    def test_offset_from_angle(self, phi, rho):
        assert horocycle_offset_from_angle(phi) == pytest.approx(rho, abs=1e-14)

    @pytest.mark.parametrize("phi", [0.0, 2.0])
    def test_offset_angle_out_of_range(self, phi):
        with pytest.raises(AngleOutOfRange):
            horocycle_offset_from_angle(phi)

    def test_sector_pair_volume(self):
        v0 = 1.0 / 144.0
        assert sector_pair_volume(v0, 0.0, 4) == pytest.approx(v0)
        expected = (2.0 * math.sqrt(2.0) + 1.0 / (2.0 * math.sqrt(2.0))) / 2.0
        assert sector_pair_volume(1.0, RHO1, 4) == pytest.approx(expected)
        assert expected == pytest.approx(1.59099, abs=5e-6)

    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("x", [0.1, 0.25, RHO1])
    def test_sector_pair_volume_slope(self, n, x):
        """Central differences match the derivative of the two-sector law."""
        v0, h, k = 1.0 / 144.0, 1e-6, n - 1
        slope = (sector_pair_volume(v0, x + h, n) - sector_pair_volume(v0, x - h, n)) / (2 * h)
        expected = k * (v0 / 2.0) * (math.exp(k * x) - math.exp(-k * x))
        assert slope == pytest.approx(expected, rel=1e-6)

    def test_sector_pair_volume_grows(self):
        """Opposite offsets never decrease the combined volume."""
        values = [sector_pair_volume(1.0, x, 4) for x in (0.0, 0.1, 0.2, 0.4)]
        assert values == sorted(values)
