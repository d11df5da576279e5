"""
Independent verification path for volumes and constants.

Sector volumes are computed in an upper half-space chart with the horoball
center at infinity: the horoball becomes {z >= t}, a cone with apex at the
center becomes a vertical prism over a Euclidean simplex, and the piece of
the horoball in the cone has volume area/3 with area the intrinsic volume
of the cross-section at height t. No closed-form density is used here.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from src.config.constants import (
    DEFAULT_SEED,
    IDEAL_TOLERANCE,
    INCIDENCE_TOLERANCE,
    MC_CHUNKS,
    MC_LOWER_HEIGHT_FACTOR,
    MIN_MC_SAMPLES,
    PACKING_TOLERANCE,
)
from src.core.cell24 import (
    Cell24,
    build_cell24,
    cell_volume_constants,
    characteristic_flags,
    edge_midpoint,
    face_center,
    facet_center,
    facet_hyperplanes,
    reference_horoball,
)
from src.core.errors import CenterMismatch, CenterNotIdeal, ConeDegenerate, OracleError
from src.core.horoball_geometry import (
    Horoball,
    HoroballSector,
    facet_clearance,
    geodesic_intersection,
    horoball_piece_volume,
    horosphere_through,
    sector_pair_volume,
    tangency_offset,
)
from src.core.lorentz_model import (
    MINKOWSKI,
    PointKind,
    ProjectivePoint,
    canonical_gauge,
    classify_point,
    distance,
    foot_on_line,
    hyperboloid_lift,
    lorentz_many,
    point_on_line,
)
from src.models.audit import OverlapAudit
from src.utils.logger import get_logger

if TYPE_CHECKING:
    from src.core.packing_families import PackingFamily

logger = get_logger(__name__)

CELL_CENTER = ProjectivePoint([1.0, 0.0, 0.0, 0.0, 0.0])

Generators = Tuple[ProjectivePoint, ...]


@dataclass(frozen=True, eq=False)
class HalfspaceChart:
    """
    Upper half-space chart (u1, u2, u3, z) with an ideal center at infinity.

    The canonical gauge sends the center to (1, 0, 0, 0, 1); a hyperboloid
    point y then has z = 1/(y0 - y4) and u_i = y_i/(y0 - y4).
    """

    center: ProjectivePoint
    gauge: np.ndarray
    inverse: np.ndarray

    def project(self, p: ProjectivePoint) -> np.ndarray:
        """Horizontal coordinates u of a point (interior or ideal, not the center)."""
        y = self.gauge @ p.coords
        v = y[0] - y[4]
        if abs(v) <= IDEAL_TOLERANCE:
            raise OracleError(f"{p!r} is the chart center")
        return y[1:4] / v

    def forward(self, p: ProjectivePoint) -> np.ndarray:
        """Chart coordinates (u1, u2, u3, z) of an interior point."""
        y = self.gauge @ hyperboloid_lift(p)
        v = y[0] - y[4]
        return np.array([y[1] / v, y[2] / v, y[3] / v, 1.0 / v])

    def backward(self, coords: Sequence[float]) -> ProjectivePoint:
        """Model point of chart coordinates (u1, u2, u3, z), z > 0."""
        arr = np.asarray(coords, dtype=float)
        return ProjectivePoint(self.backward_many(arr[None, :3], arr[None, 3])[:, 0])

    def backward_many(self, u: np.ndarray, z: np.ndarray) -> np.ndarray:
        """
        Hyperboloid points of many chart coordinates.

        Args:
            u: (n, 3) horizontal coordinates
            z: (n,) heights

        Returns:
            (5, n) array of model coordinates on the unit hyperboloid
        """
        r2 = np.sum(u * u, axis=1) + z * z
        y = np.empty((5, len(z)))
        y[0] = (1.0 + r2) / (2.0 * z)
        y[1:4] = (u / z[:, None]).T
        y[4] = (r2 - 1.0) / (2.0 * z)
        return self.inverse @ y

    def height(self, b: Horoball) -> float:
        """Height t of the horizontal plane carrying the horosphere of b."""
        if not b.center.same_point(self.center):
            raise CenterMismatch("Horoball is not centered at the chart center")
        return float(self.forward(b.through)[3])

    def distance(self, p: ProjectivePoint, q: ProjectivePoint) -> float:
        """Hyperbolic distance computed from chart coordinates."""
        a, b = self.forward(p), self.forward(q)
        chord2 = float(np.sum((a - b) ** 2))
        return 2.0 * math.asinh(math.sqrt(chord2 / (4.0 * a[3] * b[3])))


@dataclass(frozen=True, eq=False)
class ConeSection:
    """Cross-section of a cone with a horosphere, in intrinsic Euclidean coordinates."""

    vertices: np.ndarray

    def volume(self) -> float:
        """
        Euclidean 3-volume by fan triangulation from the first hull vertex.

        Raises:
            ConeDegenerate: If the section does not span three dimensions
        """
        pts = self.vertices
        spread = pts[1:] - pts[0]
        scale = max(float(np.max(np.abs(spread))), 1e-300)
        if len(pts) < 4 or np.linalg.matrix_rank(spread / scale, tol=1e-10) < 3:
            raise ConeDegenerate("Cone section is degenerate")
        if len(pts) == 4:
            return abs(float(np.linalg.det(spread))) / 6.0
        hull = ConvexHull(pts)
        apex = pts[hull.vertices[0]]
        total = 0.0
        for simplex in hull.simplices:
            tri = pts[simplex] - apex
            total += abs(float(np.linalg.det(tri))) / 6.0
        return total


def build_chart(center: ProjectivePoint) -> HalfspaceChart:
    """
    Half-space chart sending an ideal point to infinity.

    Raises:
        CenterNotIdeal: If center is not ideal
    """
    if classify_point(center) is not PointKind.IDEAL:
        raise CenterNotIdeal(f"{center!r} is not an ideal point")
    gauge = canonical_gauge(center)
    inverse = MINKOWSKI @ gauge.T @ MINKOWSKI
    return HalfspaceChart(center=center, gauge=gauge, inverse=inverse)


def cone_section(chart: HalfspaceChart, generators: Sequence[ProjectivePoint], height: float) -> ConeSection:
    """Section of the cone over the generators at height t, scaled to intrinsic units."""
    projected = np.array([chart.project(g) for g in generators])
    return ConeSection(vertices=projected / height)


def _check_apex(c: Cell24, vertex: int, b: Horoball) -> ProjectivePoint:
    apex = c.vertex(vertex)
    if not b.center.same_point(apex):
        raise CenterMismatch(f"Horoball is not centered at A{vertex}")
    return apex


def sector_volume_exact(
    vertex: int,
    cone_generators: Sequence[ProjectivePoint],
    b: Horoball,
    cell: Optional[Cell24] = None,
    chart: Optional[HalfspaceChart] = None,
) -> float:
    """
    Exact volume of a horoball piece in a cone with apex at its center.

    Args:
        vertex: Index of the apex vertex
        cone_generators: Points spanning the cone together with the apex
        b: Horoball centered at the apex
        cell: 24-cell providing the apex; defaults to the canonical cell
        chart: Chart of the apex, reused across calls when given

    Returns:
        area/3 with area the intrinsic volume of the horospheric section

    Raises:
        CenterMismatch: If b is not centered at the apex
        ConeDegenerate: If the generators do not span a proper cone
    """
    c = cell or build_cell24()
    _check_apex(c, vertex, b)
    return sector_volume(HoroballSector(b, tuple(cone_generators)), chart)


def sector_volume(sector: HoroballSector, chart: Optional[HalfspaceChart] = None) -> float:
    """
    Exact volume of a horoball sector.

    Raises:
        CenterMismatch: If the chart is not centered at the sector apex
        ConeDegenerate: If the generators do not span a proper cone
    """
    chart = chart or build_chart(sector.apex)
    section = cone_section(chart, sector.generators, chart.height(sector.horoball))
    return horoball_piece_volume(section.volume(), 4)


def sector_volume_mc(
    vertex: int,
    cone_generators: Sequence[ProjectivePoint],
    b: Horoball,
    samples: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    chunks: int = MC_CHUNKS,
    cell: Optional[Cell24] = None,
) -> Tuple[float, float]:
    """
    Monte Carlo estimate of a simplicial sector volume.

    Samples u uniformly in the bounding box of the projected cone and z from
    the density 3 t0^3 / z^4 on [t0, inf) with t0 below the horosphere, then
    weights the hits of horoball and cone, both tested in model coordinates.
    The sample budget is split into a fixed number of chunks seeded from one
    SeedSequence, so the estimate does not depend on the worker count.

    Args:
        vertex: Index of the apex vertex
        cone_generators: Four points spanning a simplicial cone with the apex
        b: Horoball centered at the apex
        samples: Total sample count, at least 10^4
        seed: Root seed
        workers: Thread count
        chunks: Number of independently seeded chunks

    Returns:
        (estimate, standard error); (0, 0) for a cone of zero measure
    """
    if samples < MIN_MC_SAMPLES:
        raise OracleError(f"At least {MIN_MC_SAMPLES} samples are required, got {samples}")
    if len(cone_generators) != 4:
        raise OracleError("Monte Carlo integration supports simplicial cones only")
    c = cell or build_cell24()
    apex = _check_apex(c, vertex, b)
    chart = build_chart(apex)

    projected = np.array([chart.project(g) for g in cone_generators])
    spread = projected[1:] - projected[0]
    if abs(float(np.linalg.det(spread))) <= 1e-12 * max(float(np.max(np.abs(spread))), 1.0) ** 3:
        return 0.0, 0.0

    basis = np.column_stack([apex.coords] + [g.coords for g in cone_generators])
    low, high = projected.min(axis=0), projected.max(axis=0)
    box = float(np.prod(high - low))
    t_low = MC_LOWER_HEIGHT_FACTOR * chart.height(b)
    level = b.level
    apex_vector = apex.coords

    sizes = [samples // chunks + (1 if k < samples % chunks else 0) for k in range(chunks)]
    seeds = np.random.SeedSequence(seed).spawn(chunks)

    def run_chunk(job: Tuple[np.random.SeedSequence, int]) -> int:
        seed_seq, n = job
        if n == 0:
            return 0
        rng = np.random.default_rng(seed_seq)
        u = low + (high - low) * rng.random((n, 3))
        z = t_low * (1.0 - rng.random(n)) ** (-1.0 / 3.0)
        points = chart.backward_many(u, z)
        in_ball = -lorentz_many(points, apex_vector) <= level
        beta = np.linalg.solve(basis, points)
        in_cone = np.all(beta[1:] >= 0.0, axis=0)
        return int(np.count_nonzero(in_ball & in_cone))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        hits = sum(executor.map(run_chunk, zip(seeds, sizes)))

    weight = box / (3.0 * t_low**3)
    p = hits / samples
    estimate = weight * p
    std_error = weight * math.sqrt(p * (1.0 - p) / samples)
    logger.debug(f"MC sector at A{vertex}: {estimate:.8g} +- {std_error:.2g} ({samples} samples)")
    return estimate, std_error


@lru_cache(maxsize=48)
def characteristic_cones(c: Cell24, vertex: int) -> Tuple[Generators, ...]:
    """
    Generators (T1, T2, T3, T4) of the 48 characteristic-simplex cones at a vertex.

    One cone per (edge, face, facet) flag: edge midpoint, face center, facet
    center and the cell center.
    """
    cones = []
    for flag in characteristic_flags(c, vertex):
        cones.append(
            (
                edge_midpoint(c, *flag.edge),
                face_center(c, flag.face),
                facet_center(c, flag.facet),
                CELL_CENTER,
            )
        )
    return tuple(cones)


def characteristic_sectors(c: Cell24, vertex: int, b: Horoball) -> Tuple[HoroballSector, ...]:
    """
    The 48 sectors of a horoball over the characteristic cones at its vertex.

    Raises:
        CenterMismatch: If b is not centered at the vertex
    """
    _check_apex(c, vertex, b)
    return tuple(HoroballSector(b, cone) for cone in characteristic_cones(c, vertex))


def ball_volume_in_cell(
    vertex: int, b: Horoball, cell: Optional[Cell24] = None
) -> float:
    """Volume of a horoball inside the cell, summed over the 48 cones at its vertex."""
    c = cell or build_cell24()
    chart = build_chart(c.vertex(vertex))
    return sum(sector_volume(sector, chart) for sector in characteristic_sectors(c, vertex, b))


@lru_cache(maxsize=1)
def derive_v0() -> float:
    """Sector volume of the equal-type arrangement in one characteristic simplex."""
    c = build_cell24()
    cone = (
        edge_midpoint(c, 1, 3),
        face_center(c, (1, 3, 7)),
        facet_center(c, (1, 3, 5, 7, 9, 11)),
        CELL_CENTER,
    )
    value = sector_volume_exact(1, cone, reference_horoball(c, 1), cell=c)
    logger.debug(f"Derived V0 = {value:.15g}")
    return value


def _rho1(c: Cell24) -> float:
    # Blow the edge-tangent horoball at A1 up until it reaches the facet center T3.
    a1 = c.vertex(1)
    t3 = facet_center(c, (1, 3, 5, 7, 9, 11))
    i0 = foot_on_line(t3, a1, c.vertex(3))
    i1 = geodesic_intersection(horosphere_through(a1, t3), point_on_line(a1, c.vertex(3), 4.0))
    return distance(i0, i1)


def _rho2(c: Cell24) -> float:
    # Continue from the horosphere through T3 until it reaches T, the midpoint of A3A7.
    a1 = c.vertex(1)
    t = edge_midpoint(c, 3, 7)
    i2 = geodesic_intersection(horosphere_through(a1, facet_center(c, (1, 3, 5, 7, 9, 11))), t)
    return distance(i2, t)


def _rho3(c: Cell24) -> float:
    # Foot Q of T on A1A10 against the crossing K of the horosphere through T with A1A10.
    a1, a10 = c.vertex(1), c.vertex(10)
    t = edge_midpoint(c, 3, 7)
    q = foot_on_line(t, a1, a10)
    k = geodesic_intersection(horosphere_through(a1, t), point_on_line(a1, a10, 4.0))
    return distance(q, k)


def _rho4(c: Cell24) -> float:
    a1, a10 = c.vertex(1), c.vertex(10)
    q = foot_on_line(edge_midpoint(c, 3, 7), a1, a10)
    h = ProjectivePoint((a1.coords + a10.coords) / 2.0)
    return distance(q, h)


def _s1(c: Cell24) -> float:
    return distance(edge_midpoint(c, 1, 3), facet_center(c, (1, 3, 5, 7, 9, 11)))


def _s2(c: Cell24) -> float:
    return distance(edge_midpoint(c, 3, 7), facet_center(c, (1, 3, 5, 7, 9, 11)))


_RHO_DERIVATIONS = {
    "rho1": _rho1,
    "rho2": _rho2,
    "rho3": _rho3,
    "rho4": _rho4,
    "s1": _s1,
    "s2": _s2,
}


@lru_cache(maxsize=None)
def derive_rho_numeric(target: str) -> float:
    """
    Re-derive a distance constant from the geometry of the cell.

    Args:
        target: One of rho1, rho2, rho3, rho4, s1, s2

    Returns:
        The hyperbolic length

    Raises:
        OracleError: For an unknown target
    """
    try:
        derivation = _RHO_DERIVATIONS[target]
    except KeyError:
        raise OracleError(f"Unknown constant '{target}'") from None
    value = derivation(build_cell24())
    logger.debug(f"Derived {target} = {value:.15g}")
    return value


def density_from_scratch(f: "PackingFamily", x: float, cell: Optional[Cell24] = None) -> float:
    """
    Density of a family member from its horoballs.

    Sums the exact sector volumes over all 1152 characteristic cones of the
    arrangement and divides by the cell volume.

    Raises:
        DomainExceeded: If x is outside the family's domain
    """
    from src.core.packing_families import arrangement_geometry

    c = cell or build_cell24()
    balls = arrangement_geometry(f, x, cell=c)
    total = sum(ball_volume_in_cell(i, balls[i - 1], cell=c) for i in range(1, 25))
    return total / cell_volume_constants().vol_p24


def sector_pair_check(f: "PackingFamily", x: float, cell: Optional[Cell24] = None) -> float:
    """
    Largest deviation of tangent edge pairs from the two-sector volume law.

    For every edge whose horoballs touch, the sectors of the two endpoints in
    mirror-image characteristic cones must add up to
    sector_pair_volume(2 V0, offset, 4).
    """
    from src.core.packing_families import arrangement_geometry, vertex_offsets

    c = cell or build_cell24()
    balls = arrangement_geometry(f, x, cell=c)
    offsets = vertex_offsets(f, x)
    v0 = derive_v0()
    worst = 0.0
    for i, j in sorted(c.edges):
        if abs(tangency_offset(balls[i - 1], balls[j - 1])) > INCIDENCE_TOLERANCE:
            continue
        flag = next(fl for fl in characteristic_flags(c, i) if fl.edge == (i, j))
        cone = (
            edge_midpoint(c, i, j),
            face_center(c, flag.face),
            facet_center(c, flag.facet),
            CELL_CENTER,
        )
        pair = sector_volume_exact(i, cone, balls[i - 1], cell=c) + sector_volume_exact(
            j, cone, balls[j - 1], cell=c
        )
        expected = sector_pair_volume(2.0 * v0, offsets[i], 4)
        worst = max(worst, abs(pair - expected))
    return worst


def overlap_audit(
    balls: Sequence[Horoball],
    cell: Optional[Cell24] = None,
    tol: float = PACKING_TOLERANCE,
) -> OverlapAudit:
    """
    Pairwise gaps and facet clearances of 24 horoballs at the cell's vertices.

    Args:
        balls: Horoballs at A1..A24, in order
        cell: 24-cell; defaults to the canonical cell
        tol: Lower bound for a valid gap or clearance

    Returns:
        OverlapAudit; valid iff every gap and clearance is at least tol
    """
    c = cell or build_cell24()
    if len(balls) != 24:
        raise OracleError(f"Expected 24 horoballs, got {len(balls)}")

    min_gap, min_pair, tangent = math.inf, (0, 0), 0
    for i, j in itertools.combinations(range(1, 25), 2):
        gap = tangency_offset(balls[i - 1], balls[j - 1])
        if abs(gap) <= INCIDENCE_TOLERANCE:
            tangent += 1
        if gap < min_gap:
            min_gap, min_pair = gap, (i, j)

    planes = facet_hyperplanes(c)
    table: List[List[float]] = []
    for i in range(1, 25):
        table.append(
            [facet_clearance(balls[i - 1], planes[facet]) for facet in c.non_incident_facets(i)]
        )
    per_ball = [min(row) for row in table]
    worst_ball = int(np.argmin(per_ball)) + 1

    audit = OverlapAudit(
        min_pair_offset=min_gap,
        min_pair=min_pair,
        tangent_pairs=tangent,
        min_facet_clearance=per_ball[worst_ball - 1],
        min_clearance_ball=worst_ball,
        ball_clearances=per_ball,
        facet_clearances=table,
        valid=min_gap >= tol and per_ball[worst_ball - 1] >= tol,
    )
    logger.debug(
        f"Overlap audit: min gap {min_gap:.3e} at {min_pair}, "
        f"min clearance {audit.min_facet_clearance:.3e} at A{worst_ball}"
    )
    return audit


def vertex_cone_generators(c: Cell24, vertex: int) -> Generators:
    """Edge midpoints at a vertex; they span the full cubical vertex cone."""
    return tuple(edge_midpoint(c, *edge) for edge in c.edges_of(vertex))


def sector_table(c: Cell24, vertex: int, b: Horoball) -> Dict[int, float]:
    """Exact sector volumes of a horoball over the 48 cones at its vertex, keyed by flag index."""
    chart = build_chart(c.vertex(vertex))
    return {k: sector_volume(s, chart) for k, s in enumerate(characteristic_sectors(c, vertex, b))}
