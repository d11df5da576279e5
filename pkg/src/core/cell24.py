"""
The ideal regular 24-cell.

Vertices A1..A24 are (1, v/sqrt(2)) with v running over the 24 integer
vectors with two nonzero entries +-1; A13..A24 are the antipodes of
A1..A12. All combinatorics (edges, faces, octahedral facets, neighbor
classes) is derived from the spatial dot products 1/2, 0, -1/2, -1.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple

import numpy as np

from src.config.constants import COMBINATORIAL_TOLERANCE
from src.core.errors import CellError, NotAFacet, NotAnEdge, SameIndex
from src.core.horoball_geometry import Horoball, geodesic_intersection, horosphere_through
from src.core.lorentz_model import (
    HyperplaneForm,
    ProjectivePoint,
    foot_on_line,
    gram_matrix,
    hyperplane_through,
    point_on_line,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

VERTEX_COUNT = 24

# Spatial parts of A1..A12 (times sqrt(2)); A(12+k) = -A(k).
_BASE_VERTICES = (
    (1, 1, 0, 0),
    (1, -1, 0, 0),
    (1, 0, 1, 0),
    (-1, 0, 1, 0),
    (1, 0, 0, 1),
    (-1, 0, 0, 1),
    (0, 1, 1, 0),
    (0, -1, 1, 0),
    (0, 1, 0, 1),
    (0, -1, 0, 1),
    (0, 0, 1, 1),
    (0, 0, -1, 1),
)

_CLASS_BY_DOT = ((0.5, 1), (0.0, 2), (-0.5, 3), (-1.0, 4))

# Far point weight on a line A_i + w A_j, outside every horoball used for special points
_FAR_WEIGHT = 4.0

Edge = Tuple[int, int]
Face = Tuple[int, int, int]
Facet = Tuple[int, int, int, int, int, int]


@dataclass(frozen=True)
class Flag:
    """Edge, face and facet incident to a vertex; one characteristic simplex per flag."""

    vertex: int
    edge: Edge
    face: Face
    facet: Facet


@dataclass(frozen=True)
class CellVolumes:
    """Volumes of the characteristic simplex and of the cell."""

    vol_f24: float
    vol_p24: float
    simplex_count: int


@dataclass(frozen=True, eq=False)
class CharacteristicSimplex:
    """Orthoscheme T0..T4 at A1 plus the foot T of A1 on its adjacent facet."""

    t0: ProjectivePoint
    t1: ProjectivePoint
    t2: ProjectivePoint
    t3: ProjectivePoint
    t4: ProjectivePoint
    t: ProjectivePoint

    @property
    def vertices(self) -> Tuple[ProjectivePoint, ...]:
        return (self.t0, self.t1, self.t2, self.t3, self.t4)


@dataclass(frozen=True, eq=False)
class Cell24:
    """
    Vertices and derived combinatorics of the ideal 24-cell.

    Indices are 1-based throughout.
    """

    vertices: Tuple[ProjectivePoint, ...]
    edges: FrozenSet[Edge]
    faces: FrozenSet[Face]
    facets: FrozenSet[Facet]
    neighbor_classes: Mapping[Edge, int]

    def vertex(self, i: int) -> ProjectivePoint:
        """Vertex A_i."""
        _check_index(i)
        return self.vertices[i - 1]

    def spatial(self, i: int) -> np.ndarray:
        """Spatial part of A_i (a unit vector)."""
        return self.vertex(i).coords[1:]

    def neighbors(self, i: int, k: int) -> Tuple[int, ...]:
        """Sorted indices of the k-neighbors of A_i."""
        return tuple(
            j for j in range(1, VERTEX_COUNT + 1) if j != i and neighbor_class(self, i, j) == k
        )

    def facets_of(self, i: int) -> List[Facet]:
        return sorted(f for f in self.facets if i in f)

    def faces_of(self, i: int) -> List[Face]:
        return sorted(f for f in self.faces if i in f)

    def edges_of(self, i: int) -> List[Edge]:
        return sorted(e for e in self.edges if i in e)

    def non_incident_facets(self, i: int) -> List[Facet]:
        """Facets not containing A_i."""
        return sorted(f for f in self.facets if i not in f)


def _check_index(i: int) -> None:
    if not 1 <= i <= VERTEX_COUNT:
        raise CellError(f"Vertex index must lie in 1..{VERTEX_COUNT}, got {i}")


def _pair(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


def _vertex_table() -> List[np.ndarray]:
    base = [np.array(v, dtype=float) / math.sqrt(2.0) for v in _BASE_VERTICES]
    return base + [-v for v in base]


def _classify_dot(dot: float) -> int:
    for value, k in _CLASS_BY_DOT:
        if abs(dot - value) <= COMBINATORIAL_TOLERANCE:
            return k
    raise CellError(f"Spatial dot product {dot} matches no neighbor class")


@lru_cache(maxsize=1)
def build_cell24() -> Cell24:
    """
    Build the canonical ideal 24-cell.

    Returns:
        Cell24 with 96 edges, 96 faces and 24 facets

    Raises:
        CellError: If the derived combinatorics is inconsistent
    """
    spatial = _vertex_table()
    vertices = tuple(ProjectivePoint(np.concatenate(([1.0], v))) for v in spatial)

    classes: Dict[Edge, int] = {}
    for i, j in itertools.combinations(range(1, VERTEX_COUNT + 1), 2):
        classes[(i, j)] = _classify_dot(float(np.dot(spatial[i - 1], spatial[j - 1])))

    def cls(i: int, j: int) -> int:
        return classes[_pair(i, j)]

    edges = frozenset(pair for pair, k in classes.items() if k == 1)
    faces = frozenset(
        (i, j, k)
        for i, j, k in itertools.combinations(range(1, VERTEX_COUNT + 1), 3)
        if cls(i, j) == cls(i, k) == cls(j, k) == 1
    )

    facets = set()
    for (i, j), k in classes.items():
        if k != 2:
            continue
        common = [m for m in range(1, VERTEX_COUNT + 1) if m not in (i, j)]
        common = [m for m in common if cls(i, m) == 1 and cls(j, m) == 1]
        diagonals = [p for p in itertools.combinations(common, 2) if cls(*p) == 2]
        if len(common) != 4 or len(diagonals) != 2:
            raise CellError(f"Diagonal ({i}, {j}) does not span an octahedron")
        facets.add(tuple(sorted((i, j, *common))))

    for facet in facets:
        if any(cls(p, q) not in (1, 2) for p, q in itertools.combinations(facet, 2)):
            raise CellError(f"Facet {facet} contains a pair of class 3 or 4")

    cell = Cell24(
        vertices=vertices,
        edges=edges,
        faces=faces,
        facets=frozenset(facets),  # type: ignore[arg-type]
        neighbor_classes=MappingProxyType(classes),
    )
    logger.debug(
        f"Built 24-cell: {len(edges)} edges, {len(faces)} faces, {len(cell.facets)} facets"
    )
    return cell


def neighbor_class(c: Cell24, i: int, j: int) -> int:
    """
    Neighbor class of two vertices.

    Returns:
        1 edge, 2 octahedral diagonal, 3 remainder, 4 antipode

    Raises:
        SameIndex: If i == j
    """
    if i == j:
        raise SameIndex(f"Vertex {i} has no neighbor class with itself")
    _check_index(i)
    _check_index(j)
    return c.neighbor_classes[_pair(i, j)]


def _average(c: Cell24, indices: Sequence[int]) -> ProjectivePoint:
    return ProjectivePoint(np.mean([c.vertex(i).coords for i in indices], axis=0))


def edge_midpoint(c: Cell24, i: int, j: int) -> ProjectivePoint:
    """
    Midpoint of an edge.

    Raises:
        NotAnEdge: If (i, j) is not an edge
    """
    if i == j or _pair(i, j) not in c.edges:
        raise NotAnEdge(f"(A{i}, A{j}) is not an edge")
    return _average(c, (i, j))


def face_center(c: Cell24, face: Sequence[int]) -> ProjectivePoint:
    """Center of a triangular face."""
    key = tuple(sorted(face))
    if key not in c.faces:
        raise CellError(f"{key} is not a face")
    return _average(c, key)


def facet_center(c: Cell24, facet: Sequence[int]) -> ProjectivePoint:
    """
    Center of an octahedral facet.

    Raises:
        NotAFacet: If the vertex set is not a facet
    """
    key = tuple(sorted(facet))
    if key not in c.facets:
        raise NotAFacet(f"{key} is not a facet")
    return _average(c, key)


def midpoint(c: Cell24, i: int, j: int) -> ProjectivePoint:
    """Euclidean midpoint of the segment A_i A_j in the model."""
    if i == j:
        raise SameIndex(f"Segment A{i}A{j} is degenerate")
    return _average(c, (i, j))


@lru_cache(maxsize=4)
def facet_hyperplanes(c: Cell24) -> Dict[Facet, HyperplaneForm]:
    """Unit facet hyperplanes, oriented toward the cell center."""
    return {facet: hyperplane_through([c.vertex(i) for i in facet]) for facet in sorted(c.facets)}


def characteristic_flags(c: Cell24, vertex: int) -> List[Flag]:
    """
    The 48 (edge, face, facet) flags at a vertex.

    Each edge at a vertex lies in 3 faces and each face in 2 facets, so the
    8 edges of the cubical vertex figure give 48 flags.
    """
    _check_index(vertex)
    flags = []
    for edge in c.edges_of(vertex):
        for face in c.faces:
            if not set(edge) <= set(face):
                continue
            for facet in c.facets:
                if set(face) <= set(facet):
                    flags.append(Flag(vertex, edge, face, facet))
    return sorted(flags, key=lambda f: (f.edge, f.face, f.facet))


def characteristic_simplex(c: Cell24) -> CharacteristicSimplex:
    """The orthoscheme at A1 along edge A1A3, face A1A3A7 and facet A1A3A5A7A9A11."""
    return CharacteristicSimplex(
        t0=c.vertex(1),
        t1=edge_midpoint(c, 1, 3),
        t2=face_center(c, (1, 3, 7)),
        t3=facet_center(c, (1, 3, 5, 7, 9, 11)),
        t4=ProjectivePoint([1.0, 0.0, 0.0, 0.0, 0.0]),
        t=edge_midpoint(c, 3, 7),
    )


def characteristic_simplex_gram(c: Cell24) -> np.ndarray:
    """
    Gram matrix of the walls of the characteristic simplex.

    Wall k is opposite T_k and oriented toward it.
    """
    points = characteristic_simplex(c).vertices
    walls = [
        hyperplane_through([p for m, p in enumerate(points) if m != k], interior=points[k])
        for k in range(len(points))
    ]
    return gram_matrix(walls)


def symmetry_permutations(c: Cell24) -> List[Tuple[int, ...]]:
    """
    Vertex permutations induced by coordinate permutations and sign changes.

    Returns:
        384 tuples p with p[i-1] the image index of A_i

    Raises:
        CellError: If some signed permutation does not preserve the vertex set
    """
    lookup = {tuple(np.round(c.spatial(i) * math.sqrt(2.0)).astype(int)): i for i in range(1, 25)}
    maps = []
    for perm in itertools.permutations(range(4)):
        for signs in itertools.product((1, -1), repeat=4):
            image = []
            for i in range(1, VERTEX_COUNT + 1):
                v = np.round(c.spatial(i) * math.sqrt(2.0)).astype(int)
                w = tuple(int(signs[k] * v[perm[k]]) for k in range(4))
                if w not in lookup:
                    raise CellError(f"Signed permutation {perm}, {signs} leaves the vertex set")
                image.append(lookup[w])
            maps.append(tuple(image))
    return maps


def special_points(c: Cell24) -> Dict[str, ProjectivePoint]:
    """
    Named points of the characteristic simplex and of the packing constructions.

    T0..T4 and T form the orthoscheme table; H is the midpoint of A1A10 and Q
    the foot of T on the line A1A10. The I-points are horosphere crossings
    centered at A1: I0 = T1, I1 = C on A1A3 and I2 = D on A1T for the
    horoball touching at T3, I3 = E on A1A11 and I5 = K on A1A10 for the
    horosphere through T, and I6 on A1T for the horoball through T1.
    """
    simplex = characteristic_simplex(c)
    a1 = c.vertex(1)
    points = {
        "T0": simplex.t0,
        "T1": simplex.t1,
        "T2": simplex.t2,
        "T3": simplex.t3,
        "T4": simplex.t4,
        "T": simplex.t,
        "H": midpoint(c, 1, 10),
        "Q": foot_on_line(simplex.t, a1, c.vertex(10)),
    }

    edge_ball = horosphere_through(a1, simplex.t1)
    facet_ball = horosphere_through(a1, simplex.t3)
    through_t = horosphere_through(a1, simplex.t)
    points["I0"] = simplex.t1
    points["I1"] = geodesic_intersection(facet_ball, point_on_line(a1, c.vertex(3), _FAR_WEIGHT))
    points["I2"] = geodesic_intersection(facet_ball, simplex.t)
    points["I3"] = geodesic_intersection(
        through_t, point_on_line(a1, c.vertex(11), _FAR_WEIGHT)
    )
    points["I5"] = geodesic_intersection(
        through_t, point_on_line(a1, c.vertex(10), _FAR_WEIGHT)
    )
    points["I6"] = geodesic_intersection(edge_ball, simplex.t)
    points["C"] = points["I1"]
    points["D"] = points["I2"]
    points["E"] = points["I3"]
    points["K"] = points["I5"]
    return points


def cell_volume_constants() -> CellVolumes:
    """Volumes of the characteristic simplex (pi^2/864) and of the cell (1152 copies)."""
    vol_f24 = math.pi**2 / 864.0
    simplex_count = VERTEX_COUNT * 48
    return CellVolumes(vol_f24=vol_f24, vol_p24=simplex_count * vol_f24, simplex_count=simplex_count)


def reference_horoball(c: Cell24, i: int) -> Horoball:
    """
    Horoball of the equal-type arrangement at A_i.

    It passes through the midpoint of the edge to the lowest-index
    1-neighbor, and hence through all 8 edge midpoints at A_i (level 1/2).
    """
    nearest = c.neighbors(i, 1)[0]
    return horosphere_through(c.vertex(i), edge_midpoint(c, i, nearest))
