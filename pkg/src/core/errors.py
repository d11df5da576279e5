"""
Exception hierarchy for violated geometric preconditions.

Expected, reportable outcomes (failed checks, invalid packings) are returned
as result objects instead; these exceptions signal misuse of an operation.
"""


class Horoball24Error(ValueError):
    """Base class for all domain errors."""


# ============ Lorentz model ============


class LorentzError(Horoball24Error):
    """Invalid input to a projective-model operation."""


class NotProperPoint(LorentzError):
    """A point that must be interior is ideal or outer."""


class IdealPole(LorentzError):
    """An ideal point has no polar hyperplane meeting the model."""


class DegeneratePole(LorentzError):
    """A hyperplane pole has zero self-product."""


class DegenerateLine(LorentzError):
    """Two points do not span a line."""


class LineOutsideModel(LorentzError):
    """A line does not meet the interior of the model."""


# ============ Horoballs ============


class HoroballError(Horoball24Error):
    """Invalid input to a horoball operation."""


class CenterNotIdeal(HoroballError):
    """A horoball center is not an ideal point."""


class PointNotInterior(HoroballError):
    """A point that must be interior is not."""


class DegenerateHoroball(HoroballError):
    """The horosphere parameter s lies outside (-1, 1)."""


class EndpointInsideHoroball(HoroballError):
    """A geodesic endpoint lies strictly inside the horoball."""


class CommonCenter(HoroballError):
    """Two horoballs share their ideal center."""


class NegativeChord(HoroballError):
    """A horospheric chord length is negative."""


class BadDimension(HoroballError):
    """A dimension argument is smaller than 2."""


class NonpositiveDistance(HoroballError):
    """A distance argument is not positive."""


class AngleOutOfRange(HoroballError):
    """An angle lies outside the open interval (0, pi/2]."""


# ============ 24-cell ============


class CellError(Horoball24Error):
    """Invalid reference into the 24-cell."""


class SameIndex(CellError):
    """A vertex is paired with itself."""


class NotAFacet(CellError):
    """A vertex set is not an octahedral facet."""


class NotAnEdge(CellError):
    """A vertex pair is not an edge."""


# ============ Packings ============


class PackingError(Horoball24Error):
    """Invalid input to a packing-family operation."""


class DomainExceeded(PackingError):
    """A family parameter lies outside the family's domain."""


class MaxVolumeExceeded(PackingError):
    """A sector volume exceeds the facet-contact ceiling."""


class UnknownFamily(PackingError):
    """A family name is not one of b01, b12, b13, b04."""


# ============ Oracle ============


class OracleError(Horoball24Error):
    """Invalid input to a verification-oracle operation."""


class ConeDegenerate(OracleError):
    """Cone generators do not span a proper cone section."""


class CenterMismatch(OracleError):
    """A horoball is not centered at the cone's apex."""
