"""
Projective (Lorentzian) model of hyperbolic 4-space.

Points are homogeneous 5-vectors (x0, x1, x2, x3, x4) compared through the
signature (1, 4) form <x, y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3 + x4*y4.
Interior points have <x, x> < 0, ideal points <x, x> = 0.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from src.config.constants import IDEAL_TOLERANCE, RELATION_TOLERANCE
from src.core.errors import (
    CenterNotIdeal,
    DegenerateLine,
    DegeneratePole,
    IdealPole,
    LineOutsideModel,
    LorentzError,
    NotProperPoint,
)

DIMENSION = 4
MINKOWSKI = np.diag([-1.0, 1.0, 1.0, 1.0, 1.0])

VectorLike = Union["ProjectivePoint", Sequence[float], np.ndarray]


class PointKind(str, Enum):
    """Classification of a projective point by the sign of <x, x>."""

    INTERIOR = "interior"
    IDEAL = "ideal"
    OUTER = "outer"


class ProjectivePoint:
    """
    Homogeneous point of the projective model.

    Coordinates are normalized to x0 = 1 whenever x0 is nonzero and are
    stored read-only. Equality is projective equality.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords: VectorLike):
        """
        Initialize a projective point.

        Args:
            coords: Five homogeneous coordinates, not all zero

        Raises:
            LorentzError: If the vector has the wrong shape or is zero
        """
        arr = np.array(_as_vector(coords), dtype=float).reshape(-1)
        if arr.shape != (DIMENSION + 1,):
            raise LorentzError(f"Expected {DIMENSION + 1} coordinates, got {arr.shape[0]}")
        scale = float(np.max(np.abs(arr)))
        if scale == 0.0 or not np.all(np.isfinite(arr)):
            raise LorentzError("Homogeneous coordinates must be finite and nonzero")
        if abs(arr[0]) > 1e-14 * scale:
            arr = arr / arr[0]
        arr.setflags(write=False)
        self._coords = arr

    @property
    def coords(self) -> np.ndarray:
        """Read-only coordinate vector."""
        return self._coords

    def self_product(self) -> float:
        """Return <x, x>."""
        return lorentz(self._coords, self._coords)

    def kind(self, tol: float = IDEAL_TOLERANCE) -> PointKind:
        """Classify the point; see classify_point."""
        return classify_point(self, tol)

    @property
    def is_interior(self) -> bool:
        return self.kind() is PointKind.INTERIOR

    @property
    def is_ideal(self) -> bool:
        return self.kind() is PointKind.IDEAL

    def same_point(self, other: "ProjectivePoint", tol: float = 1e-10) -> bool:
        """
        Check projective equality.

        Args:
            other: Point to compare with
            tol: Tolerance on the Euclidean-normalized coordinate vectors

        Returns:
            True if the coordinate vectors are nonzero multiples of each other
        """
        u = self._coords / np.linalg.norm(self._coords)
        v = other.coords / np.linalg.norm(other.coords)
        return bool(min(np.linalg.norm(u - v), np.linalg.norm(u + v)) <= tol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.same_point(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = ", ".join(f"{c:.12g}" for c in self._coords)
        return f"ProjectivePoint({body})"


def _as_vector(x: VectorLike) -> np.ndarray:
    if isinstance(x, ProjectivePoint):
        return x.coords
    return np.asarray(x, dtype=float)


def lorentz(u: np.ndarray, v: np.ndarray) -> float:
    """Lorentz product of two raw 5-vectors."""
    return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3] + u[4] * v[4])


def lorentz_many(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Lorentz products along the first axis of (5, n) arrays (or a 5-vector and a (5, n) array)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim == 1:
        u = u[:, None]
    if v.ndim == 1:
        v = v[:, None]
    return -u[0] * v[0] + np.sum(u[1:] * v[1:], axis=0)


def bilinear_form(x: VectorLike, y: VectorLike) -> float:
    """
    Evaluate the signature (1, 4) bilinear form.

    Args:
        x: First point or raw coordinate vector
        y: Second point or raw coordinate vector

    Returns:
        -x0*y0 + x1*y1 + x2*y2 + x3*y3 + x4*y4
    """
    return lorentz(_as_vector(x), _as_vector(y))


def classify_point(x: ProjectivePoint, tol: float = IDEAL_TOLERANCE) -> PointKind:
    """
    Classify a point as interior, ideal or outer.

    Args:
        x: Point to classify
        tol: Ideal-point tolerance on <x, x>

    Returns:
        PointKind of the point
    """
    q = x.self_product()
    if q < -tol:
        return PointKind.INTERIOR
    if abs(q) <= tol:
        return PointKind.IDEAL
    return PointKind.OUTER


def hyperboloid_lift(x: ProjectivePoint) -> np.ndarray:
    """
    Representative of an interior point on the upper unit hyperboloid.

    Raises:
        NotProperPoint: If x is not interior
    """
    if classify_point(x) is not PointKind.INTERIOR:
        raise NotProperPoint(f"{x!r} is not an interior point")
    v = x.coords / math.sqrt(-x.self_product())
    return v if v[0] > 0 else -v


def distance(x: ProjectivePoint, y: ProjectivePoint) -> float:
    """
    Hyperbolic distance of two interior points.

    Uses d = 2 asinh(|x - y| / 2) on hyperboloid lifts, which equals
    arcosh(-<x,y> / sqrt(<x,x><y,y>)) and stays accurate for close points.

    Raises:
        NotProperPoint: If either point is ideal or outer
    """
    diff = hyperboloid_lift(x) - hyperboloid_lift(y)
    chord = max(lorentz(diff, diff), 0.0)
    return 2.0 * math.asinh(math.sqrt(chord) / 2.0)


@dataclass(frozen=True, eq=False)
class HyperplaneForm:
    """
    Hyperplane given by its pole vector b.

    A point X is incident iff <b, X> = 0, i.e. the covector J b annihilates
    X. Hyperplanes meeting the model carry a unit pole, <b, b> = 1.
    """

    pole: np.ndarray

    @classmethod
    def from_pole(cls, vector: VectorLike, tol: float = IDEAL_TOLERANCE) -> "HyperplaneForm":
        """Build a normalized form (self-product +1 or -1) from a pole vector."""
        b = np.array(_as_vector(vector), dtype=float)
        q = lorentz(b, b)
        if abs(q) <= tol * max(1.0, float(np.dot(b, b))):
            raise DegeneratePole("Pole vector has zero self-product")
        b = b / math.sqrt(abs(q))
        b.setflags(write=False)
        return cls(pole=b)

    @property
    def covector(self) -> np.ndarray:
        """Coefficients (b^0, ..., b^4) of the linear form X -> <b, X>."""
        return MINKOWSKI @ self.pole

    def self_product(self) -> float:
        return lorentz(self.pole, self.pole)

    @property
    def meets_model(self) -> bool:
        return self.self_product() > 0.0

    def evaluate(self, x: VectorLike) -> float:
        """Evaluate the form on a point."""
        return lorentz(self.pole, _as_vector(x))

    def contains(self, x: ProjectivePoint, tol: float = 1e-10) -> bool:
        return abs(self.evaluate(x)) <= tol

    def flipped(self) -> "HyperplaneForm":
        """Same hyperplane with the opposite orientation."""
        return HyperplaneForm.from_pole(-self.pole)

    def __repr__(self) -> str:
        body = ", ".join(f"{c:.12g}" for c in self.pole)
        return f"HyperplaneForm(pole=({body}))"


class RelationKind(str, Enum):
    """Mutual position of two hyperplanes."""

    PERPENDICULAR = "perpendicular"
    INTERSECTING = "intersecting"
    PARALLEL = "parallel"
    ULTRAPARALLEL = "ultraparallel"


@dataclass(frozen=True)
class PairRelation:
    """Relation of two hyperplanes with its dihedral angle or common-perpendicular length."""

    kind: RelationKind
    angle: Optional[float] = None
    length: Optional[float] = None
    coincident: bool = False


def polar_hyperplane(x: ProjectivePoint, tol: float = IDEAL_TOLERANCE) -> HyperplaneForm:
    """
    Polar hyperplane of a non-ideal point.

    Args:
        x: Pole
        tol: Ideal-point tolerance

    Returns:
        Form y -> <x, y>, unit-normalized for outer poles

    Raises:
        IdealPole: If x is ideal
    """
    if abs(x.self_product()) <= tol:
        raise IdealPole(f"{x!r} is ideal and has no polar hyperplane in the model")
    return HyperplaneForm.from_pole(x.coords, tol)


def pole_of(u: HyperplaneForm) -> ProjectivePoint:
    """Pole of a hyperplane as a projective point."""
    return ProjectivePoint(u.pole)


def foot_on_hyperplane(x: ProjectivePoint, u: HyperplaneForm) -> ProjectivePoint:
    """
    Perpendicular foot of a point on a hyperplane.

    Ideal points are accepted: the geodesic from an ideal point orthogonal to
    the hyperplane still has a well-defined foot.

    Args:
        x: Interior or ideal point
        u: Hyperplane meeting the model

    Returns:
        y = x - (<x,u>/<u,u>) u

    Raises:
        NotProperPoint: If x is outer
        DegeneratePole: If <u, u> = 0
    """
    if classify_point(x) is PointKind.OUTER:
        raise NotProperPoint(f"{x!r} is outside the model")
    uu = u.self_product()
    if abs(uu) <= IDEAL_TOLERANCE:
        raise DegeneratePole("Hyperplane pole has zero self-product")
    y = x.coords - (lorentz(x.coords, u.pole) / uu) * u.pole
    return ProjectivePoint(y)


def foot_on_line(x: ProjectivePoint, a: ProjectivePoint, b: ProjectivePoint) -> ProjectivePoint:
    """
    Point of the line a-b closest to x.

    Solves the 2x2 Gram system of {a, b} for the Lorentz-orthogonal
    projection of x onto span{a, b}.

    Raises:
        NotProperPoint: If x is not interior
        DegenerateLine: If a and b are the same projective point
        LineOutsideModel: If the line does not meet the interior
    """
    if classify_point(x) is not PointKind.INTERIOR:
        raise NotProperPoint(f"{x!r} is not an interior point")
    if a.same_point(b):
        raise DegenerateLine("Line endpoints coincide")
    av, bv, xv = a.coords, b.coords, x.coords
    gram = np.array([[lorentz(av, av), lorentz(av, bv)], [lorentz(av, bv), lorentz(bv, bv)]])
    det = float(np.linalg.det(gram))
    if det >= -IDEAL_TOLERANCE:
        raise LineOutsideModel("Line does not meet the interior of the model")
    alpha, beta = np.linalg.solve(gram, [lorentz(xv, av), lorentz(xv, bv)])
    return ProjectivePoint(alpha * av + beta * bv)


def point_on_line(a: ProjectivePoint, b: ProjectivePoint, weight: float) -> ProjectivePoint:
    """Point a + weight * b of the line a-b (coordinates as normalized)."""
    return ProjectivePoint(a.coords + weight * b.coords)


def pair_relation(
    u: HyperplaneForm, v: HyperplaneForm, tol: float = RELATION_TOLERANCE
) -> PairRelation:
    """
    Classify two unit hyperplane forms by g = <u, v>.

    Normals are taken as directed toward the interior, so g <= 0 for
    distinct facets of a convex polytope.
    """
    if pole_of(u).same_point(pole_of(v)):
        return PairRelation(RelationKind.INTERSECTING, angle=0.0, coincident=True)
    g = lorentz(u.pole, v.pole)
    if abs(g) <= tol:
        return PairRelation(RelationKind.PERPENDICULAR, angle=math.pi / 2)
    if abs(abs(g) - 1.0) <= tol:
        return PairRelation(RelationKind.PARALLEL)
    if abs(g) < 1.0:
        return PairRelation(RelationKind.INTERSECTING, angle=math.acos(-g))
    return PairRelation(RelationKind.ULTRAPARALLEL, length=math.acosh(abs(g)))


def hyperplane_through(
    points: Iterable[ProjectivePoint], interior: Optional[ProjectivePoint] = None
) -> HyperplaneForm:
    """
    Hyperplane containing the given points.

    Args:
        points: At least four points in general position on a common hyperplane
        interior: Reference point on the positive side; defaults to the model center

    Returns:
        Unit form with <b, interior> > 0

    Raises:
        LorentzError: If the points do not determine a unique hyperplane
    """
    rows = np.array([MINKOWSKI @ p.coords for p in points])
    if rows.shape[0] < DIMENSION:
        raise LorentzError("At least four points are needed to span a hyperplane")
    _, singular, vt = np.linalg.svd(rows)
    if singular[DIMENSION - 1] <= 1e-9 * singular[0]:
        raise LorentzError("Points do not span a hyperplane")
    if len(singular) > DIMENSION and singular[DIMENSION] > 1e-9 * singular[0]:
        raise LorentzError("Points are not on a common hyperplane")
    b = vt[-1]
    reference = interior.coords if interior is not None else np.array([1.0, 0, 0, 0, 0])
    if lorentz(b, reference) < 0:
        b = -b
    return HyperplaneForm.from_pole(b)


def gram_matrix(forms: Sequence[HyperplaneForm]) -> np.ndarray:
    """Matrix of Lorentz products of hyperplane poles."""
    poles = np.array([f.pole for f in forms])
    return poles @ MINKOWSKI @ poles.T


def coxeter_gram(weights: Sequence[int]) -> np.ndarray:
    """
    Gram matrix of a linear Coxeter scheme.

    Args:
        weights: Consecutive branch weights, e.g. (3, 4, 3, 4)

    Returns:
        Matrix with unit diagonal, -cos(pi/n) on branches and 0 elsewhere
    """
    size = len(weights) + 1
    gram = np.eye(size)
    for i, n in enumerate(weights):
        gram[i, i + 1] = gram[i + 1, i] = -math.cos(math.pi / n)
    return gram


def canonical_gauge(center: ProjectivePoint) -> np.ndarray:
    """
    Deterministic Lorentz isometry sending an ideal point to (1, 0, 0, 0, 1).

    The spatial part is the Householder reflection exchanging the unit
    spatial direction of the center with e4; the time axis is fixed.

    Raises:
        CenterNotIdeal: If center is not ideal
    """
    if classify_point(center) is not PointKind.IDEAL:
        raise CenterNotIdeal(f"{center!r} is not an ideal point")
    direction = center.coords[1:] / np.linalg.norm(center.coords[1:])
    target = np.array([0.0, 0.0, 0.0, 1.0])
    v = direction - target
    reflection = np.eye(DIMENSION)
    if np.linalg.norm(v) > 1e-14:
        reflection -= 2.0 * np.outer(v, v) / float(np.dot(v, v))
    gauge = np.eye(DIMENSION + 1)
    gauge[1:, 1:] = reflection
    return gauge


def random_isometry(rng: np.random.Generator, boost_scale: float = 0.5) -> np.ndarray:
    """
    Random Lorentz isometry preserving the upper sheet.

    Columns are built by Gram-Schmidt in the Lorentz metric, starting from a
    future timelike vector.
    """
    w = rng.normal(scale=boost_scale, size=DIMENSION)
    columns = [np.concatenate(([math.sqrt(1.0 + float(np.dot(w, w)))], w))]
    while len(columns) <= DIMENSION:
        r = rng.normal(size=DIMENSION + 1)
        for e in columns:
            r = r - lorentz(r, e) / lorentz(e, e) * e
        q = lorentz(r, r)
        if q > 1e-8:
            columns.append(r / math.sqrt(q))
    return np.column_stack(columns)


def apply_isometry(matrix: np.ndarray, x: ProjectivePoint) -> ProjectivePoint:
    """Image of a point under a Lorentz matrix."""
    return ProjectivePoint(matrix @ x.coords)


def is_lorentz_isometry(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    """Check M^T J M = J."""
    return bool(np.allclose(matrix.T @ MINKOWSKI @ matrix, MINKOWSKI, atol=tol))
