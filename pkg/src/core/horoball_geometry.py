"""
Horospheres and horoballs in the projective model.

A horoball with ideal center a (normalized to a0 = 1) is described by its
level c > 0: a point q belongs to it iff -<q^, a> <= c, where q^ is the
lift of q to the unit hyperboloid. Moving the horosphere by t away from the
center multiplies the level by e^t. In the gauge sending a to (1,0,0,0,1)
the horosphere passes through (1,0,0,0,s) with s = (1 - c^2)/(1 + c^2).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from src.config.constants import INCIDENCE_TOLERANCE
from src.core.errors import (
    AngleOutOfRange,
    BadDimension,
    CenterNotIdeal,
    CommonCenter,
    DegenerateHoroball,
    EndpointInsideHoroball,
    HoroballError,
    NegativeChord,
    NonpositiveDistance,
    NotProperPoint,
    PointNotInterior,
)
from src.core.lorentz_model import (
    HyperplaneForm,
    PointKind,
    ProjectivePoint,
    apply_isometry,
    canonical_gauge,
    classify_point,
    foot_on_hyperplane,
    hyperboloid_lift,
    lorentz,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

GAUGE_CENTER = np.array([1.0, 0.0, 0.0, 0.0, 1.0])


class Membership(str, Enum):
    """Position of a point relative to a horoball."""

    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


def point_level(center: ProjectivePoint, q: ProjectivePoint) -> float:
    """
    Horospherical level -<q^, a> of an interior point with respect to an ideal center.

    Raises:
        PointNotInterior: If q is not interior
    """
    if classify_point(q) is not PointKind.INTERIOR:
        raise PointNotInterior(f"{q!r} is not an interior point")
    return -lorentz(hyperboloid_lift(q), center.coords)


def _point_at_level(center: np.ndarray, lifted: np.ndarray, level: float) -> ProjectivePoint:
    """Point of the geodesic from center through lifted whose level is the given value."""
    beta = -lorentz(lifted, center)
    mu = ((beta / level) ** 2 - 1.0) / (2.0 * beta)
    return ProjectivePoint(lifted + mu * center)


@dataclass(frozen=True, eq=False)
class Horoball:
    """
    Horoball given by its ideal center and a point of its horosphere.

    Raises:
        CenterNotIdeal: If center is not ideal
        PointNotInterior: If through is not interior
        DegenerateHoroball: If the horosphere parameter leaves (-1, 1)
    """

    center: ProjectivePoint
    through: ProjectivePoint

    def __post_init__(self) -> None:
        if classify_point(self.center) is not PointKind.IDEAL:
            raise CenterNotIdeal(f"{self.center!r} is not an ideal point")
        if classify_point(self.through) is not PointKind.INTERIOR:
            raise PointNotInterior(f"{self.through!r} is not an interior point")
        s = self.s
        if not -1.0 < s < 1.0:
            raise DegenerateHoroball(f"Horosphere parameter s={s} outside (-1, 1)")

    @property
    def level(self) -> float:
        """Level c of the horosphere."""
        return point_level(self.center, self.through)

    @property
    def s(self) -> float:
        """Parameter s of the horosphere in the canonical gauge."""
        y = canonical_gauge(self.center) @ hyperboloid_lift(self.through)
        q = lorentz(y, y)
        w = (y[0] - y[4]) ** 2
        return (q + w) / (q - w)

    def blown_up(self, t: float) -> "Horoball":
        """Horoball with the same center, horosphere moved by t away from the center."""
        moved = _point_at_level(
            self.center.coords, hyperboloid_lift(self.through), self.level * math.exp(t)
        )
        return Horoball(self.center, moved)

    def transformed(self, matrix: np.ndarray) -> "Horoball":
        """Image under a Lorentz isometry."""
        return Horoball(apply_isometry(matrix, self.center), apply_isometry(matrix, self.through))

    def __repr__(self) -> str:
        return f"Horoball(center={self.center!r}, level={self.level:.12g})"


@dataclass(frozen=True, eq=False)
class HoroballSector:
    """Piece of a horoball inside a cone with apex at its center."""

    horoball: Horoball
    generators: Tuple[ProjectivePoint, ...]

    @property
    def apex(self) -> ProjectivePoint:
        return self.horoball.center


def horosphere_through(center: ProjectivePoint, p: ProjectivePoint) -> Horoball:
    """
    Horoball centered at an ideal point whose horosphere passes through p.

    Args:
        center: Ideal center
        p: Interior point of the horosphere

    Returns:
        The unique such horoball

    Raises:
        CenterNotIdeal: If center is not ideal
        PointNotInterior: If p is not interior
    """
    return Horoball(center, p)


def horoball_at_level(center: ProjectivePoint, level: float) -> Horoball:
    """Horoball of the given level, constructed on the geodesic from center through the model center."""
    if level <= 0:
        raise HoroballError(f"Horoball level must be positive, got {level}")
    if classify_point(center) is not PointKind.IDEAL:
        raise CenterNotIdeal(f"{center!r} is not an ideal point")
    origin = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
    return Horoball(center, _point_at_level(center.coords, origin, level))


def blow_up(b: Horoball, t: float) -> Horoball:
    """Functional form of Horoball.blown_up."""
    return b.blown_up(t)


def horosphere_form(b: Horoball, q: ProjectivePoint) -> float:
    """
    Horosphere quadratic form evaluated in the canonical gauge.

    (s - 1)<y, y> - (1 + s)(y0 - y4)^2 with y the gauge image of q; positive
    inside, zero on the horosphere, negative outside. Interior points are
    lifted to the hyperboloid first so the value is scale free.
    """
    vector = hyperboloid_lift(q) if classify_point(q) is PointKind.INTERIOR else q.coords
    y = canonical_gauge(b.center) @ vector
    s = b.s
    return (s - 1.0) * lorentz(y, y) - (1.0 + s) * (y[0] - y[4]) ** 2


def horosphere_contains(
    b: Horoball, q: ProjectivePoint, tol: float = INCIDENCE_TOLERANCE
) -> Membership:
    """
    Locate a point relative to a horoball.

    The center itself counts as inside.

    Raises:
        NotProperPoint: If q is outer
    """
    if classify_point(q) is PointKind.OUTER:
        raise NotProperPoint(f"{q!r} is outside the model")
    if q.same_point(b.center):
        return Membership.INSIDE
    value = horosphere_form(b, q)
    if abs(value) <= tol:
        return Membership.ON
    return Membership.INSIDE if value > 0 else Membership.OUTSIDE


def signed_distance(b: Horoball, q: ProjectivePoint) -> float:
    """Signed distance of an interior point to the horosphere, negative inside."""
    return math.log(point_level(b.center, q) / b.level)


def geodesic_intersection(
    b: Horoball, endpoint: ProjectivePoint, tol: float = INCIDENCE_TOLERANCE
) -> ProjectivePoint:
    """
    Crossing of the geodesic segment center-endpoint with the horosphere.

    Raises:
        PointNotInterior: If endpoint is not interior
        EndpointInsideHoroball: If endpoint lies strictly inside b
    """
    beta = point_level(b.center, endpoint)
    level = b.level
    if beta < level * (1.0 - tol):
        raise EndpointInsideHoroball(f"{endpoint!r} lies inside the horoball")
    return _point_at_level(b.center.coords, hyperboloid_lift(endpoint), level)


def axis_crossings(b1: Horoball, b2: Horoball) -> Tuple[ProjectivePoint, ProjectivePoint, float]:
    """
    Crossings of two horospheres with the geodesic joining their centers.

    The axis is parametrized as a1 + mu * a2; horoball 1 covers mu <= mu1 and
    horoball 2 covers mu >= mu2.

    Returns:
        (crossing of b1, crossing of b2, signed gap between them)

    Raises:
        CommonCenter: If the centers coincide
    """
    if b1.center.same_point(b2.center):
        raise CommonCenter("Horoballs share their ideal center")
    a1, a2 = b1.center.coords, b2.center.coords
    g = lorentz(a1, a2)
    c1, c2 = b1.level, b2.level
    mu1 = 2.0 * c1 * c1 / -g
    mu2 = -g / (2.0 * c2 * c2)
    gap = 0.5 * math.log(mu2 / mu1)
    return ProjectivePoint(a1 + mu1 * a2), ProjectivePoint(a1 + mu2 * a2), gap


def tangency_offset(b1: Horoball, b2: Horoball) -> float:
    """
    Signed gap between two horoballs along their common axis.

    Positive when disjoint, zero when tangent, negative when overlapping.

    Raises:
        CommonCenter: If the centers coincide
    """
    return axis_crossings(b1, b2)[2]


def tangency_point(b1: Horoball, b2: Horoball) -> ProjectivePoint:
    """Midpoint of the two axis crossings; the contact point for tangent horoballs."""
    a1, a2 = b1.center.coords, b2.center.coords
    g = lorentz(a1, a2)
    mu1 = 2.0 * b1.level**2 / -g
    mu2 = -g / (2.0 * b2.level**2)
    return ProjectivePoint(a1 + math.sqrt(mu1 * mu2) * a2)


def facet_clearance(b: Horoball, form: HyperplaneForm) -> float:
    """
    Signed distance from a horoball to a hyperplane not through its center.

    Measured at the foot of the center on the hyperplane, where the level
    function restricted to the hyperplane is smallest.
    """
    foot = foot_on_hyperplane(b.center, form)
    return signed_distance(b, foot)


def horocyclic_arc_length(x: float) -> float:
    """
    Length of a horocyclic arc over a geodesic chord.

    Args:
        x: Chord length

    Returns:
        2 sinh(x/2)

    Raises:
        NegativeChord: If x < 0
    """
    if x < 0:
        raise NegativeChord(f"Chord length must be non-negative, got {x}")
    return 2.0 * math.sinh(x / 2.0)


def horoball_piece_volume(area: float, n: int) -> float:
    """
    Volume of a horoball piece over a horospheric region.

    Args:
        area: Intrinsic (n-1)-volume of the region on the horosphere
        n: Dimension of the space

    Returns:
        area / (n - 1)

    Raises:
        BadDimension: If n < 2
    """
    if n < 2:
        raise BadDimension(f"Dimension must be at least 2, got {n}")
    if area < 0:
        raise HoroballError(f"Area must be non-negative, got {area}")
    return area / (n - 1)


def parallel_angle_from_distance(s: float) -> float:
    """
    Angle of parallelism for a perpendicular distance.

    Raises:
        NonpositiveDistance: If s <= 0
    """
    if s <= 0:
        raise NonpositiveDistance(f"Distance must be positive, got {s}")
    return math.asin(1.0 / math.cosh(s))


def horocycle_offset_from_angle(phi: float) -> float:
    """
    Offset whose horocycle-arc ratio equals 1/sin(phi).

    Raises:
        AngleOutOfRange: If phi is not in (0, pi/2]
    """
    if not 0.0 < phi <= math.pi / 2:
        raise AngleOutOfRange(f"Angle must lie in (0, pi/2], got {phi}")
    return math.log(1.0 / math.sin(phi))


def sector_pair_volume(v0: float, x: float, n: int) -> float:
    """
    Combined volume of two congruent sectors after opposite offsets.

    Args:
        v0: Combined volume at x = 0
        x: Offset; one horoball grows by x, the other shrinks by x
        n: Dimension of the space

    Returns:
        (v0/2)(e^{(n-1)x} + e^{-(n-1)x})

    Raises:
        BadDimension: If n < 2
    """
    if n < 2:
        raise BadDimension(f"Dimension must be at least 2, got {n}")
    if v0 <= 0:
        raise HoroballError(f"Reference volume must be positive, got {v0}")
    k = n - 1
    return 0.5 * v0 * (math.exp(k * x) + math.exp(-k * x))
