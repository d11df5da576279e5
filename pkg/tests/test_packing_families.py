"""
Tests for the horoball packing families and their closed-form densities.

Anchors are the equal-type density 6/pi^2 and the optimum 0.71645 shared by
the end of b01 and the start of b12 and b13.
"""

import math

import numpy as np
import pytest

from src.config.constants import (
    REFERENCE_DELTA_B0,
    REFERENCE_DELTA_B04_XMAX,
    REFERENCE_DELTA_OPTIMUM,
)
from src.core.cell24 import build_cell24, neighbor_class
from src.core.errors import DomainExceeded, MaxVolumeExceeded, PackingError, UnknownFamily
from src.core.geometry_oracle import overlap_audit
from src.core.packing_families import (
    VertexClass,
    VertexClassSchedule,
    all_families,
    arrangement_geometry,
    classify_by_max_horoball,
    density_b01,
    density_b04,
    density_b12,
    density_b13,
    family_density,
    family_from_name,
    get_family,
    named_arrangement,
    optimize_family,
    regime_bounds,
    rho_constants,
    schedule_density,
    v0,
    vertex_offsets,
)
from src.models.density import FamilyName

RHO1 = math.log(math.sqrt(2.0))
DELTA_B0 = 6.0 / math.pi**2


@pytest.fixture(scope="module")
def cell():
    return build_cell24()


@pytest.fixture(scope="module")
def rho():
    return rho_constants()


class TestConstants:
    """Test the offset constants and domains."""

    def test_rho_values(self, rho):
        assert rho.rho1 == pytest.approx(RHO1)
        assert rho.rho2 == rho.rho1
        assert rho.rho3 == pytest.approx(0.5 * math.log(10.0 / 3.0), abs=1e-9)
        assert rho.rho4 == pytest.approx(0.45815, abs=5e-6)

    def test_v0(self):
        assert v0() == pytest.approx(1.0 / 144.0, rel=1e-9)

    @pytest.mark.parametrize(
        "name,x_max",
        [
            ("b01", RHO1),
            ("b12", RHO1),
            ("b13", RHO1),
            ("b04", 0.5 * math.log(3.0)),
        ],
    )
    def test_domains(self, name, x_max):
        assert family_from_name(name).x_max == pytest.approx(x_max, abs=1e-9)

    def test_b04_domain_reference(self):
        assert get_family(FamilyName.B04).x_max == pytest.approx(0.54931, abs=5e-6)


class TestFamilyLookup:
    """Test family lookup and vertex class schedules."""

    def test_case_insensitive(self):
        assert family_from_name(" B01 ").name is FamilyName.B01

    @pytest.mark.parametrize("name", ["b02", "", "B5"])
    def test_unknown_family(self, name):
        with pytest.raises(UnknownFamily):
            family_from_name(name)

    @pytest.mark.parametrize(
        "name,sizes",
        [
            (FamilyName.B01, (8, 16)),
            (FamilyName.B12, (2, 6, 16)),
            (FamilyName.B13, (1, 7, 8, 8)),
            (FamilyName.B04, (3, 21)),
        ],
    )
    def test_schedule_sizes(self, name, sizes):
        assert get_family(name).schedule.sizes == sizes

    def test_all_families(self):
        assert [f.name for f in all_families()] == list(FamilyName)

    def test_schedule_must_partition(self):
        with pytest.raises(PackingError):
            VertexClassSchedule((VertexClass("only", (1, 2), 0.0, 1),))


class TestClosedForms:
    """Test closed-form densities at anchors and gluing points."""

    def test_equal_type_density(self):
        assert density_b01(0.0) == pytest.approx(DELTA_B0, abs=1e-12)
        assert density_b01(0.0) == pytest.approx(REFERENCE_DELTA_B0, abs=5e-6)

    def test_b1_density(self):
        assert density_b01(RHO1) == pytest.approx(REFERENCE_DELTA_OPTIMUM, abs=5e-6)

    def test_b01_midpoint(self):
        assert density_b01(RHO1 / 2) == pytest.approx(0.58178, abs=5e-5)

    def test_gluing(self):
        """Consecutive families agree where they meet."""
        assert density_b12(0.0) == pytest.approx(density_b01(RHO1), abs=1e-12)
        assert density_b12(RHO1) == pytest.approx(density_b04(0.0), abs=1e-12)
        assert density_b04(0.0) == pytest.approx(DELTA_B0, abs=1e-12)

    @pytest.mark.parametrize("x", np.linspace(0.0, RHO1, 7))
    def test_b13_equals_b12(self, x):
        assert density_b13(x) == pytest.approx(density_b12(x), abs=1e-12)

    def test_b04_endpoint(self):
        x_max = get_family(FamilyName.B04).x_max
        assert density_b04(x_max) == pytest.approx(REFERENCE_DELTA_B04_XMAX, abs=1e-3)

    @pytest.mark.parametrize(
        "name,x_min",
        [
            (FamilyName.B01, math.log(2.0) / 6),
            (FamilyName.B12, math.log(4.0) / 6),
            (FamilyName.B04, math.log(7.0) / 6),
        ],
    )
    def test_curves_dip_before_rising(self, name, x_min):
        """Each curve has an interior minimum."""
        f = get_family(name)
        h = 1e-3
        center = family_density(f, x_min)
        assert family_density(f, x_min - h) > center
        assert family_density(f, x_min + h) > center

    @pytest.mark.parametrize("name", list(FamilyName))
    def test_schedule_matches_closed_form(self, name):
        f = get_family(name)
        for x in np.linspace(0.0, f.x_max, 9):
            assert schedule_density(f, x) == pytest.approx(family_density(f, x), abs=1e-12)

    def test_v0_override_scales(self):
        assert density_b01(0.1, v0_value=2.0 / 144.0) == pytest.approx(2.0 * density_b01(0.1))

    @pytest.mark.parametrize("x", [-0.01, RHO1 + 1e-6])
    def test_domain_exceeded(self, x):
        with pytest.raises(DomainExceeded):
            density_b01(x)

    def test_endpoint_rounding_is_accepted(self):
        density_b12(RHO1 + 1e-14)


class TestArrangements:
    """Test offsets and geometric validity of family members."""

    def test_tangent_edges_have_opposite_offsets(self, cell):
        f = get_family(FamilyName.B01)
        offsets = vertex_offsets(f, 0.2)
        for i, j in cell.edges:
            assert offsets[i] == pytest.approx(-offsets[j])

    def test_b04_triple_grows(self, cell):
        offsets = vertex_offsets(get_family(FamilyName.B04), 0.3)
        for i in (1, 10, 17):
            assert offsets[i] == pytest.approx(0.3)
        assert sum(1 for o in offsets.values() if o < 0) == 21

    def test_b01_large_class_has_no_edges(self, cell):
        large = get_family(FamilyName.B01).schedule.classes[0].members
        for i in large:
            for j in large:
                if i < j:
                    assert neighbor_class(cell, i, j) != 1

    @pytest.mark.parametrize("name", list(FamilyName))
    def test_members_are_packings(self, cell, name):
        """No two horoballs overlap and none crosses a non-incident facet."""
        f = get_family(name)
        for x in np.linspace(0.0, f.x_max, 5):
            audit = overlap_audit(arrangement_geometry(f, x, cell), cell)
            assert audit.valid, f"{name.value} at x={x}"

    def test_equal_type_tangencies(self, cell):
        f, x = named_arrangement(0)
        audit = overlap_audit(arrangement_geometry(f, x, cell), cell)
        assert audit.tangent_pairs == 96
        assert audit.min_pair_offset == pytest.approx(0.0, abs=1e-12)

    def test_b04_endpoint_triple_touches(self, cell):
        f, x = named_arrangement(4)
        balls = arrangement_geometry(f, x, cell)
        audit = overlap_audit(balls, cell)
        assert audit.valid
        assert audit.min_pair_offset == pytest.approx(0.0, abs=1e-9)

    def test_named_arrangements(self):
        assert named_arrangement(1)[0].name is FamilyName.B01
        assert named_arrangement(2)[1] == pytest.approx(RHO1)
        assert named_arrangement(3)[0].name is FamilyName.B13
        with pytest.raises(PackingError):
            named_arrangement(5)


class TestOptimization:
    """Test the family maximization."""

    def test_b01_maximum_at_right_end(self):
        report = optimize_family(get_family(FamilyName.B01), grid=21)
        assert report.argmax_x == pytest.approx(RHO1, abs=1e-9)
        assert report.max_density == pytest.approx(REFERENCE_DELTA_OPTIMUM, abs=5e-6)
        assert len(report.samples) == 21
        assert report.oracle_residual < 1e-5

    def test_b12_maximum_at_left_end(self):
        report = optimize_family(get_family(FamilyName.B12), grid=11, workers=2)
        assert report.argmax_x == 0.0
        assert report.max_density == pytest.approx(density_b01(RHO1), abs=1e-12)

    def test_b04_maximum_is_equal_type(self):
        report = optimize_family(get_family(FamilyName.B04), grid=11)
        assert report.argmax_x == 0.0
        assert report.max_density == pytest.approx(DELTA_B0, abs=1e-12)

    def test_grid_too_small(self):
        with pytest.raises(PackingError):
            optimize_family(get_family(FamilyName.B01), grid=1)


class TestRegimes:
    """Test classification by the largest horoball's sector volume."""

    def test_bounds(self):
        first, second, ceiling = regime_bounds()
        assert second == pytest.approx(first * 2.0 * math.sqrt(2.0))
        assert ceiling == pytest.approx(first * 8.0)

    def test_regime_one(self):
        result = classify_by_max_horoball(0.5 * v0())
        assert result.regime == 1
        assert result.optimal_density == pytest.approx(DELTA_B0)

    def test_boundary_belongs_to_lower_regime(self):
        assert classify_by_max_horoball(v0()).regime == 1

    def test_regime_two(self):
        result = classify_by_max_horoball(2.0 * v0())
        assert result.regime == 2
        assert result.optimal_density == pytest.approx(REFERENCE_DELTA_OPTIMUM, abs=5e-6)

    def test_regime_three(self):
        result = classify_by_max_horoball(5.0 * v0())
        assert result.regime == 3
        assert result.optimal_density == pytest.approx(density_b12(RHO1))

    def test_ceiling(self):
        with pytest.raises(MaxVolumeExceeded):
            classify_by_max_horoball(9.0 * v0())

    def test_nonpositive_volume(self):
        with pytest.raises(PackingError):
            classify_by_max_horoball(0.0)
