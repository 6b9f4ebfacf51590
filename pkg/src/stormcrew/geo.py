"""Geodetic-to-planar conversion and exact 2-D segment predicates.

All geometric reasoning downstream happens in a single UTM zone so that
metric vector arithmetic applies directly to coordinates that arrive as
WGS84 latitude/longitude. The intersection verdict is a three-way result:
a conservative ``TOUCHING`` band around the strict sign test absorbs
endpoint contact and collinear grazing, which callers treat as contact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

# WGS84 ellipsoid, UTM scale factor at the central meridian
_A = 6378137.0
_F = 1.0 / 298.257223563
_E2 = _F * (2.0 - _F)
_EP2 = _E2 / (1.0 - _E2)
_K0 = 0.9996

_FALSE_EASTING = 500000.0
_FALSE_NORTHING_SOUTH = 10000000.0

#: Poleward latitude limit of the UTM grid, degrees.
UTM_MAX_LAT = 84.0

#: Default tolerance band for the intersection sign products, in the units
#: of a product of two planar cross products. Coordinates are differenced
#: before any cross product, so magnitudes stay near segment scale and a
#: fixed band is usable across a whole UTM zone.
DEFAULT_EPS = 1e-6


class GeodesyError(ValueError):
    """Coordinate outside the domain of the projection."""


class DegenerateSegmentError(ValueError):
    """A zero-length segment was given where a direction is required."""


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 geodetic coordinate in degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise GeodesyError(f"non-finite coordinate ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise GeodesyError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon < 180.0:
            raise GeodesyError(f"longitude {self.lon} outside [-180, 180)")


@dataclass(frozen=True)
class PlanarPoint:
    """Projected coordinate in meters within one UTM zone."""

    easting: float
    northing: float
    zone: int
    hemisphere: str = "north"

    def __post_init__(self) -> None:
        if not 1 <= self.zone <= 60:
            raise GeodesyError(f"UTM zone {self.zone} outside [1, 60]")
        if self.hemisphere not in ("north", "south"):
            raise GeodesyError(f"bad hemisphere {self.hemisphere!r}")
        if not 0.0 < self.easting < 1000000.0:
            raise GeodesyError(f"easting {self.easting} outside (0, 1e6)")

    def offset(self, de: float, dn: float) -> "PlanarPoint":
        return PlanarPoint(self.easting + de, self.northing + dn, self.zone, self.hemisphere)


@dataclass(frozen=True)
class Segment:
    """Directed planar segment; both ends must share a UTM zone."""

    a: PlanarPoint
    b: PlanarPoint

    def __post_init__(self) -> None:
        if self.a.zone != self.b.zone:
            raise GeodesyError(
                f"cross-zone segment (zones {self.a.zone} and {self.b.zone})"
            )

    @property
    def delta(self) -> tuple[float, float]:
        return (self.b.easting - self.a.easting, self.b.northing - self.a.northing)

    @property
    def length(self) -> float:
        de, dn = self.delta
        return math.hypot(de, dn)


class Verdict(Enum):
    CROSSING = "crossing"
    TOUCHING = "touching"
    DISJOINT = "disjoint"


def zone_for(lon: float) -> int:
    """Standard 6-degree UTM zone of a longitude in [-180, 180)."""
    return int(math.floor((lon + 180.0) / 6.0)) + 1


def central_meridian(zone: int) -> float:
    return zone * 6.0 - 183.0


def latlon_to_utm(p: GeoPoint, force_zone: int | None = None) -> PlanarPoint:
    """Project a WGS84 point to UTM.

    ``force_zone`` projects into a caller-chosen zone so that points
    straddling a zone boundary share one plane; otherwise the standard
    zone of the longitude is used.
    """
    if abs(p.lat) > UTM_MAX_LAT:
        raise GeodesyError(f"latitude {p.lat} outside UTM domain (|lat| <= 84)")
    zone = force_zone if force_zone is not None else zone_for(p.lon)
    if not 1 <= zone <= 60:
        raise GeodesyError(f"UTM zone {zone} outside [1, 60]")

    lat = math.radians(p.lat)
    lon = math.radians(p.lon)
    lon0 = math.radians(central_meridian(zone))

    sin_lat = math.sin(lat)
    cos_lat = math.cos(lat)
    tan_lat = math.tan(lat)

    n = _A / math.sqrt(1.0 - _E2 * sin_lat * sin_lat)
    t = tan_lat * tan_lat
    c = _EP2 * cos_lat * cos_lat
    a = (lon - lon0) * cos_lat

    m = _A * (
        (1.0 - _E2 / 4.0 - 3.0 * _E2**2 / 64.0 - 5.0 * _E2**3 / 256.0) * lat
        - (3.0 * _E2 / 8.0 + 3.0 * _E2**2 / 32.0 + 45.0 * _E2**3 / 1024.0) * math.sin(2.0 * lat)
        + (15.0 * _E2**2 / 256.0 + 45.0 * _E2**3 / 1024.0) * math.sin(4.0 * lat)
        - (35.0 * _E2**3 / 3072.0) * math.sin(6.0 * lat)
    )

    easting = (
        _K0
        * n
        * (
            a
            + (1.0 - t + c) * a**3 / 6.0
            + (5.0 - 18.0 * t + t * t + 72.0 * c - 58.0 * _EP2) * a**5 / 120.0
        )
        + _FALSE_EASTING
    )
    northing = _K0 * (
        m
        + n
        * tan_lat
        * (
            a * a / 2.0
            + (5.0 - t + 9.0 * c + 4.0 * c * c) * a**4 / 24.0
            + (61.0 - 58.0 * t + t * t + 600.0 * c - 330.0 * _EP2) * a**6 / 720.0
        )
    )
    hemisphere = "north" if p.lat >= 0.0 else "south"
    if hemisphere == "south":
        northing += _FALSE_NORTHING_SOUTH
    return PlanarPoint(easting, northing, zone, hemisphere)


def utm_to_latlon(p: PlanarPoint) -> GeoPoint:
    """Invert the projection; round-trips to well under 1e-7 degrees."""
    x = p.easting - _FALSE_EASTING
    y = p.northing
    if p.hemisphere == "south":
        y -= _FALSE_NORTHING_SOUTH

    m = y / _K0
    mu = m / (_A * (1.0 - _E2 / 4.0 - 3.0 * _E2**2 / 64.0 - 5.0 * _E2**3 / 256.0))
    e1 = (1.0 - math.sqrt(1.0 - _E2)) / (1.0 + math.sqrt(1.0 - _E2))

    phi1 = (
        mu
        + (3.0 * e1 / 2.0 - 27.0 * e1**3 / 32.0) * math.sin(2.0 * mu)
        + (21.0 * e1**2 / 16.0 - 55.0 * e1**4 / 32.0) * math.sin(4.0 * mu)
        + (151.0 * e1**3 / 96.0) * math.sin(6.0 * mu)
        + (1097.0 * e1**4 / 512.0) * math.sin(8.0 * mu)
    )

    sin1 = math.sin(phi1)
    cos1 = math.cos(phi1)
    tan1 = math.tan(phi1)
    c1 = _EP2 * cos1 * cos1
    t1 = tan1 * tan1
    n1 = _A / math.sqrt(1.0 - _E2 * sin1 * sin1)
    r1 = _A * (1.0 - _E2) / (1.0 - _E2 * sin1 * sin1) ** 1.5
    d = x / (n1 * _K0)

    lat = phi1 - (n1 * tan1 / r1) * (
        d * d / 2.0
        - (5.0 + 3.0 * t1 + 10.0 * c1 - 4.0 * c1 * c1 - 9.0 * _EP2) * d**4 / 24.0
        + (61.0 + 90.0 * t1 + 298.0 * c1 + 45.0 * t1 * t1 - 252.0 * _EP2 - 3.0 * c1 * c1)
        * d**6
        / 720.0
    )
    lon = math.radians(central_meridian(p.zone)) + (
        d
        - (1.0 + 2.0 * t1 + c1) * d**3 / 6.0
        + (5.0 - 2.0 * c1 + 28.0 * t1 - 3.0 * c1 * c1 + 8.0 * _EP2 + 24.0 * t1 * t1)
        * d**5
        / 120.0
    ) / cos1
    return GeoPoint(math.degrees(lat), math.degrees(lon))


def cross2(u: tuple[float, float], v: tuple[float, float]) -> float:
    """Signed planar cross product u.x*v.y - u.y*v.x."""
    return u[0] * v[1] - u[1] * v[0]


def segments_intersect(road: Segment, pole: Segment, eps: float = DEFAULT_EPS) -> Verdict:
    """Three-way intersection verdict between a road segment and an
    obstacle segment.

    ``CROSSING`` means both opposite-side sign products are strictly
    negative beyond the tolerance band; ``TOUCHING`` means at least one
    product sits inside the band while the other does not refute contact.
    A zero-length obstacle never intersects anything; a zero-length road
    is a caller error.
    """
    if road.a.zone != pole.a.zone:
        raise GeodesyError("segments lie in different UTM zones")
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")

    rd = road.delta
    if rd == (0.0, 0.0):
        raise DegenerateSegmentError("zero-length road segment")
    pd = pole.delta
    if pd == (0.0, 0.0):
        return Verdict.DISJOINT

    r1 = (pole.a.easting - road.a.easting, pole.a.northing - road.a.northing)
    r2 = (pole.b.easting - road.a.easting, pole.b.northing - road.a.northing)
    p1 = (road.a.easting - pole.a.easting, road.a.northing - pole.a.northing)
    p2 = (road.b.easting - pole.a.easting, road.b.northing - pole.a.northing)

    s_road = cross2(rd, r1) * cross2(rd, r2)
    s_pole = cross2(pd, p1) * cross2(pd, p2)

    if s_road < -eps and s_pole < -eps:
        return Verdict.CROSSING
    if (abs(s_road) <= eps and s_pole <= eps) or (abs(s_pole) <= eps and s_road <= eps):
        return Verdict.TOUCHING
    return Verdict.DISJOINT


def planar_distance(p: PlanarPoint, q: PlanarPoint) -> float:
    if p.zone != q.zone:
        raise GeodesyError("distance across UTM zones is undefined")
    return math.hypot(p.easting - q.easting, p.northing - q.northing)
