"""
Horoball arrangements at the vertices of the ideal 24-cell.

Every family assigns each vertex an offset o(x) = base + slope * x relative
to the equal-type arrangement B0, whose horoballs pass through the edge
midpoints. A horoball with offset o fills V0 * e^{3o} in each of the 48
characteristic simplices at its vertex, so a family's density is
48 V0 sum(size * e^{3 o(x)}) / vol(P24).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config.constants import CLOSED_FORM_TOLERANCE, GOLDEN_SECTION_TOLERANCE, RELATION_TOLERANCE
from src.core import geometry_oracle
from src.core.cell24 import Cell24, build_cell24, cell_volume_constants, reference_horoball
from src.core.errors import DomainExceeded, MaxVolumeExceeded, PackingError, UnknownFamily
from src.core.horoball_geometry import Horoball
from src.models.density import DensityReport, DensitySample, FamilyName, RegimeResult
from src.utils.logger import get_logger
from src.utils.optimize import golden_section_max

logger = get_logger(__name__)

SEED_VERTEX = 1
B04_SEED_TRIPLE = (1, 10, 17)
SECTORS_PER_VERTEX = 48


@dataclass(frozen=True)
class VertexClass:
    """Vertices sharing the offset base + slope * x."""

    label: str
    members: Tuple[int, ...]
    base: float
    slope: int

    @property
    def size(self) -> int:
        return len(self.members)

    def offset(self, x: float) -> float:
        return self.base + self.slope * x


@dataclass(frozen=True)
class VertexClassSchedule:
    """Partition of the 24 vertices into offset classes."""

    classes: Tuple[VertexClass, ...]

    def __post_init__(self) -> None:
        members = sorted(i for cls in self.classes for i in cls.members)
        if members != list(range(1, 25)):
            raise PackingError("Vertex classes must partition A1..A24")

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(cls.size for cls in self.classes)

    def exponent_sum(self, x: float) -> float:
        """sum(size * e^{3 o(x)}) over the classes."""
        return sum(cls.size * math.exp(3.0 * cls.offset(x)) for cls in self.classes)


@dataclass(frozen=True)
class PackingFamily:
    """One-parameter family of arrangements on the domain [0, x_max]."""

    name: FamilyName
    x_max: float
    schedule: VertexClassSchedule
    endpoints: Tuple[str, str]
    sectors_per_vertex: int = SECTORS_PER_VERTEX

    def check_domain(self, x: float) -> None:
        """
        Raises:
            DomainExceeded: If x lies outside [0, x_max] beyond rounding
        """
        slack = CLOSED_FORM_TOLERANCE * max(1.0, self.x_max)
        if not -slack <= x <= self.x_max + slack:
            raise DomainExceeded(
                f"x={x} outside the domain [0, {self.x_max}] of {self.name.value}"
            )


@dataclass(frozen=True)
class RhoConstants:
    """Offset constants of the constructions."""

    rho1: float
    rho2: float
    rho3: float
    rho4: float


@lru_cache(maxsize=1)
def rho_constants() -> RhoConstants:
    """
    rho1 = rho2 = log sqrt(2) and rho4 = arcosh(7 sqrt(2) / (4 sqrt(5))) in closed form;
    rho3 comes from the geometric construction.
    """
    rho1 = math.log(math.sqrt(2.0))
    rho4 = math.acosh(7.0 * math.sqrt(2.0) / (4.0 * math.sqrt(5.0)))
    rho3 = geometry_oracle.derive_rho_numeric("rho3")
    return RhoConstants(rho1=rho1, rho2=rho1, rho3=rho3, rho4=rho4)


def v0() -> float:
    """Horoball volume per characteristic simplex in the equal-type arrangement."""
    return geometry_oracle.derive_v0()


def _b01(c: Cell24, rho: RhoConstants) -> PackingFamily:
    large = tuple(sorted((SEED_VERTEX, 13) + c.neighbors(SEED_VERTEX, 2)))
    small = tuple(i for i in range(1, 25) if i not in large)
    schedule = VertexClassSchedule(
        (
            VertexClass("large", large, 0.0, +1),
            VertexClass("small", small, 0.0, -1),
        )
    )
    return PackingFamily(FamilyName.B01, rho.rho1, schedule, ("B0", "B1"))


def _b12(c: Cell24, rho: RhoConstants) -> PackingFamily:
    axis = (SEED_VERTEX, 13)
    diagonal = c.neighbors(SEED_VERTEX, 2)
    rest = tuple(i for i in range(1, 25) if i not in axis + diagonal)
    schedule = VertexClassSchedule(
        (
            VertexClass("axis", axis, rho.rho1, +1),
            VertexClass("diagonal", diagonal, rho.rho1, -1),
            VertexClass("small", rest, -rho.rho1, -1),
        )
    )
    return PackingFamily(FamilyName.B12, rho.rho2, schedule, ("B1", "B2"))


def _b13(c: Cell24, rho: RhoConstants) -> PackingFamily:
    seed = (SEED_VERTEX,)
    shrinking = tuple(sorted((13,) + c.neighbors(SEED_VERTEX, 2)))
    edge = c.neighbors(SEED_VERTEX, 1)
    opposite = c.neighbors(SEED_VERTEX, 3)
    schedule = VertexClassSchedule(
        (
            VertexClass("seed", seed, rho.rho1, +1),
            VertexClass("large", shrinking, rho.rho1, -1),
            VertexClass("edge", edge, -rho.rho1, -1),
            VertexClass("opposite", opposite, -rho.rho1, +1),
        )
    )
    return PackingFamily(FamilyName.B13, rho.rho2, schedule, ("B1", "B3"))


def _b04(c: Cell24, rho: RhoConstants) -> PackingFamily:
    triple = B04_SEED_TRIPLE
    rest = tuple(i for i in range(1, 25) if i not in triple)
    schedule = VertexClassSchedule(
        (
            VertexClass("triple", triple, 0.0, +1),
            VertexClass("rest", rest, 0.0, -1),
        )
    )
    x_max = 2.0 * rho.rho1 + rho.rho4 - rho.rho3
    return PackingFamily(FamilyName.B04, x_max, schedule, ("B0", "B4"))


_BUILDERS = {
    FamilyName.B01: _b01,
    FamilyName.B12: _b12,
    FamilyName.B13: _b13,
    FamilyName.B04: _b04,
}


@lru_cache(maxsize=None)
def build_family(name: FamilyName) -> PackingFamily:
    """Family with its vertex classes derived from the neighbor classes of A1."""
    family = _BUILDERS[name](build_cell24(), rho_constants())
    logger.debug(f"Built family {name.value}: sizes {family.schedule.sizes}, x_max {family.x_max:.12g}")
    return family


def family_from_name(name: str) -> PackingFamily:
    """
    Look up a family by name (case-insensitive).

    Raises:
        UnknownFamily: If the name is not b01, b12, b13 or b04
    """
    try:
        key = FamilyName(str(name).strip().lower())
    except ValueError:
        raise UnknownFamily(f"Unknown family '{name}'") from None
    return build_family(key)


def get_family(name: FamilyName) -> PackingFamily:
    return build_family(FamilyName(name))


def all_families() -> List[PackingFamily]:
    return [build_family(name) for name in FamilyName]


def _vol_p24() -> float:
    return cell_volume_constants().vol_p24


def _v0(value: Optional[float]) -> float:
    return v0() if value is None else value


def density_b01(x: float, v0_value: Optional[float] = None) -> float:
    """384 V0 (e^{3x} + 2 e^{-3x}) / vol(P24) on [0, rho1]."""
    build_family(FamilyName.B01).check_domain(x)
    return 384.0 * _v0(v0_value) * (math.exp(3 * x) + 2.0 * math.exp(-3 * x)) / _vol_p24()


def density_b12(x: float, v0_value: Optional[float] = None) -> float:
    """48 V0 (2 e^{3(rho1+x)} + 6 e^{-3(-rho1+x)} + 16 e^{-3(rho1+x)}) / vol(P24) on [0, rho2]."""
    build_family(FamilyName.B12).check_domain(x)
    r = rho_constants().rho1
    total = 2.0 * math.exp(3 * (r + x)) + 6.0 * math.exp(-3 * (-r + x)) + 16.0 * math.exp(-3 * (r + x))
    return 48.0 * _v0(v0_value) * total / _vol_p24()


def density_b13(x: float, v0_value: Optional[float] = None) -> float:
    """48 V0 (e^{3(rho1+x)} + 7 e^{-3(-rho1+x)} + 8 e^{-3(rho1+x)} + 8 e^{-3(rho1-x)}) / vol(P24)."""
    build_family(FamilyName.B13).check_domain(x)
    r = rho_constants().rho1
    total = (
        math.exp(3 * (r + x))
        + 7.0 * math.exp(-3 * (-r + x))
        + 8.0 * math.exp(-3 * (r + x))
        + 8.0 * math.exp(-3 * (r - x))
    )
    return 48.0 * _v0(v0_value) * total / _vol_p24()


def density_b04(x: float, v0_value: Optional[float] = None) -> float:
    """48 V0 (3 e^{3x} + 21 e^{-3x}) / vol(P24) on [0, 2 rho1 + rho4 - rho3]."""
    build_family(FamilyName.B04).check_domain(x)
    return 48.0 * _v0(v0_value) * (3.0 * math.exp(3 * x) + 21.0 * math.exp(-3 * x)) / _vol_p24()


_CLOSED_FORMS = {
    FamilyName.B01: density_b01,
    FamilyName.B12: density_b12,
    FamilyName.B13: density_b13,
    FamilyName.B04: density_b04,
}


def family_density(f: PackingFamily, x: float, v0_value: Optional[float] = None) -> float:
    """Closed-form density of a family member."""
    return _CLOSED_FORMS[f.name](x, v0_value)


def schedule_density(f: PackingFamily, x: float, v0_value: Optional[float] = None) -> float:
    """Density assembled from the vertex classes: 48 V0 sum(size e^{3 o(x)}) / vol(P24)."""
    f.check_domain(x)
    return f.sectors_per_vertex * _v0(v0_value) * f.schedule.exponent_sum(x) / _vol_p24()


def vertex_offsets(f: PackingFamily, x: float) -> Dict[int, float]:
    """Offset of every vertex A1..A24 at parameter x."""
    f.check_domain(x)
    return {i: cls.offset(x) for cls in f.schedule.classes for i in cls.members}


def arrangement_geometry(f: PackingFamily, x: float, cell: Optional[Cell24] = None) -> List[Horoball]:
    """
    The 24 horoballs of a family member, in vertex order.

    Each is the equal-type horoball at its vertex blown up by the vertex offset.

    Raises:
        DomainExceeded: If x is outside the family's domain
    """
    c = cell or build_cell24()
    offsets = vertex_offsets(f, x)
    return [reference_horoball(c, i).blown_up(offsets[i]) for i in range(1, 25)]


def named_arrangement(k: int) -> Tuple[PackingFamily, float]:
    """
    Family member realizing the named arrangement B_k.

    Raises:
        PackingError: If k is not in 0..4
    """
    if k == 0:
        return build_family(FamilyName.B01), 0.0
    if k == 1:
        f = build_family(FamilyName.B01)
        return f, f.x_max
    if k == 2:
        f = build_family(FamilyName.B12)
        return f, f.x_max
    if k == 3:
        f = build_family(FamilyName.B13)
        return f, f.x_max
    if k == 4:
        f = build_family(FamilyName.B04)
        return f, f.x_max
    raise PackingError(f"No named arrangement B{k}")


def optimize_family(
    f: PackingFamily,
    grid: int,
    workers: int = 1,
    v0_value: Optional[float] = None,
) -> DensityReport:
    """
    Maximize a family's density over its domain.

    Scans a uniform grid, then refines around the best grid point by
    golden-section search; the refined point replaces the grid point only
    if it is strictly better.

    Args:
        f: Packing family
        grid: Number of grid points, at least 2
        workers: Threads for the grid scan
        v0_value: V0 override for the closed form

    Returns:
        DensityReport with the grid samples, argmax, max and oracle residual
    """
    if grid < 2:
        raise PackingError(f"Grid must have at least 2 points, got {grid}")
    xs = np.linspace(0.0, f.x_max, grid)

    def evaluate(x: float) -> float:
        return family_density(f, float(x), v0_value)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        values = list(executor.map(evaluate, xs))

    best = int(np.argmax(values))
    argmax_x, max_density = float(xs[best]), values[best]
    lo, hi = float(xs[max(best - 1, 0)]), float(xs[min(best + 1, grid - 1)])
    refined_x, refined_value = golden_section_max(evaluate, lo, hi, GOLDEN_SECTION_TOLERANCE)
    if refined_value > max_density:
        argmax_x, max_density = refined_x, refined_value

    residual = abs(geometry_oracle.density_from_scratch(f, argmax_x) - max_density)
    logger.info(
        f"Optimized {f.name.value}: argmax {argmax_x:.12g}, max {max_density:.12g}, "
        f"oracle residual {residual:.2e}"
    )
    return DensityReport(
        family=f.name,
        x_max=f.x_max,
        samples=[DensitySample(x=float(x), delta=v) for x, v in zip(xs, values)],
        argmax_x=argmax_x,
        max_density=max_density,
        oracle_residual=residual,
    )


def regime_bounds(v0_value: Optional[float] = None) -> Tuple[float, float, float]:
    """Breakpoints V0, V0 e^{3 rho1} and the ceiling V0 e^{6 rho1}."""
    base = _v0(v0_value)
    rho1 = rho_constants().rho1
    return base, base * math.exp(3 * rho1), base * math.exp(6 * rho1)


def classify_by_max_horoball(v_max_per_sector: float, v0_value: Optional[float] = None) -> RegimeResult:
    """
    Optimal density given the largest horoball's volume per characteristic simplex.

    Raises:
        PackingError: If the volume is not positive
        MaxVolumeExceeded: If the volume exceeds V0 e^{6 rho1}
    """
    v = v_max_per_sector
    if v <= 0:
        raise PackingError(f"Sector volume must be positive, got {v}")
    first, second, ceiling = regime_bounds(v0_value)
    rel = 1.0 + RELATION_TOLERANCE
    if v > ceiling * rel:
        raise MaxVolumeExceeded(f"Sector volume {v} exceeds the ceiling {ceiling}")
    rho = rho_constants()
    if v <= first * rel:
        return RegimeResult(
            regime=1, optimal_density=density_b01(0.0, v0_value), lower_bound=0.0, upper_bound=first
        )
    if v <= second * rel:
        return RegimeResult(
            regime=2,
            optimal_density=density_b01(rho.rho1, v0_value),
            lower_bound=first,
            upper_bound=second,
        )
    return RegimeResult(
        regime=3,
        optimal_density=density_b12(rho.rho2, v0_value),
        lower_bound=second,
        upper_bound=ceiling,
    )
