"""Fallen-pole footprints and the road edges they render impassable.

A tilted pole is reduced to its horizontal projection: the ground segment
from the base to the tip, of length height*sin(tilt), pointing along the
reported azimuth. An edge is blocked when the projection reaches the
centerline (crossing or touching) or when it covers more than half of the
road's width corridor from one side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .geo import (
    DEFAULT_EPS,
    GeoPoint,
    Segment,
    Verdict,
    cross2,
    latlon_to_utm,
    segments_intersect,
)
from .osm import RoadGraph, find_nearby_edges

#: Height assumed when a sensor reading omits it (typical distribution pole).
DEFAULT_POLE_HEIGHT_M = 12.0

#: Poles tilted less than this are treated as standing; sensor jitter on an
#: upright pole must not fabricate obstacles.
DEFAULT_MIN_TILT_DEG = 10.0

#: An edge is impassable when the projection covers more than this fraction
#: of the road width.
BLOCK_COVERAGE_THRESHOLD = 0.5


@dataclass(frozen=True)
class PoleState:
    """One pole-sensor reading: base position plus tilt geometry."""

    pole_id: str
    base: GeoPoint
    height: float  # meters
    tilt_deg: float  # degrees from vertical, 0 = standing
    azimuth_deg: float  # degrees clockwise from true north

    def __post_init__(self) -> None:
        if not self.height > 0:
            raise ValueError(f"pole {self.pole_id}: height must be > 0")
        if not 0.0 <= self.tilt_deg <= 90.0:
            raise ValueError(f"pole {self.pole_id}: tilt {self.tilt_deg} outside [0, 90]")
        object.__setattr__(self, "azimuth_deg", self.azimuth_deg % 360.0)


@dataclass(frozen=True)
class EdgeAssessment:
    edge_id: int
    verdict: Verdict
    coverage_fraction: float


@dataclass
class BlockageReport:
    pole_id: str
    projected: Segment
    affected: list[EdgeAssessment]
    blocked_edge_ids: list[int]


def pole_projection(pole: PoleState, zone: int) -> Segment:
    """Ground-plane segment from the pole base to the fallen tip."""
    base = latlon_to_utm(pole.base, force_zone=zone)
    reach = pole.height * math.sin(math.radians(pole.tilt_deg))
    az = math.radians(pole.azimuth_deg)
    tip = base.offset(reach * math.sin(az), reach * math.cos(az))
    return Segment(base, tip)


def coverage_fraction(road: Segment, width: float, projection: Segment) -> float:
    """Fraction of the road's width corridor covered by the projection.

    The road is modeled as a rectangle of the given width centered on the
    centerline. The covered amount is the perpendicular extent of the
    projection chord clipped to that rectangle, so a pole lying along the
    road covers little even if it is long.
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    de, dn = road.delta
    axis_len = math.hypot(de, dn)
    if axis_len == 0.0:
        raise ValueError("degenerate road segment")
    ux, uy = de / axis_len, dn / axis_len

    def frame(px: float, py: float) -> tuple[float, float]:
        rx, ry = px - road.a.easting, py - road.a.northing
        return (rx * ux + ry * uy, cross2((ux, uy), (rx, ry)))

    t1, n1 = frame(projection.a.easting, projection.a.northing)
    t2, n2 = frame(projection.b.easting, projection.b.northing)

    half = width / 2.0
    lo, hi = 0.0, 1.0
    for p, q in (  # Liang-Barsky: clip parameter range against each slab
        (-(t2 - t1), t1 - 0.0),
        (t2 - t1, axis_len - t1),
        (-(n2 - n1), n1 + half),
        (n2 - n1, half - n1),
    ):
        if p == 0.0:
            if q < 0.0:
                return 0.0
            continue
        r = q / p
        if p < 0.0:
            if r > hi:
                return 0.0
            lo = max(lo, r)
        else:
            if r < lo:
                return 0.0
            hi = min(hi, r)
    if lo > hi:
        return 0.0
    n_in = n1 + lo * (n2 - n1)
    n_out = n1 + hi * (n2 - n1)
    return max(0.0, min(1.0, abs(n_out - n_in) / width))


def assess(
    pole: PoleState,
    graph: RoadGraph,
    search_radius: float | None = None,
    eps: float = DEFAULT_EPS,
    min_tilt_deg: float = DEFAULT_MIN_TILT_DEG,
) -> BlockageReport:
    """Assess every nearby edge against one pole's horizontal projection.

    ``search_radius`` defaults to the pole height, the smallest radius that
    cannot miss a blockable edge; anything smaller is rejected as unsound.
    """
    if not graph.edges:
        raise ValueError("cannot assess blockage against an empty road graph")
    if search_radius is None:
        search_radius = pole.height
    if search_radius < pole.height:
        raise ValueError(
            f"search_radius {search_radius} < pole height {pole.height}: "
            "assessment would be unsound"
        )

    projection = pole_projection(pole, graph.zone)
    if pole.tilt_deg < min_tilt_deg:
        return BlockageReport(pole.pole_id, projection, [], [])

    affected: list[EdgeAssessment] = []
    blocked: list[int] = []
    for eid in find_nearby_edges(graph, projection.a, search_radius):
        edge = graph.edges[eid]
        verdict = segments_intersect(edge.geometry, projection, eps)
        covered = coverage_fraction(edge.geometry, edge.width, projection)
        affected.append(EdgeAssessment(eid, verdict, covered))
        if verdict is not Verdict.DISJOINT or covered > BLOCK_COVERAGE_THRESHOLD:
            blocked.append(eid)
    return BlockageReport(pole.pole_id, projection, affected, blocked)


def apply_blockages(graph: RoadGraph, reports: list[BlockageReport]) -> RoadGraph:
    """New graph with the union of all reported blocked edges impassable."""
    blocked: set[int] = set()
    for report in reports:
        blocked.update(report.blocked_edge_ids)
    return graph.with_impassable(blocked)


def load_poles(path: str | Path, default_height: float = DEFAULT_POLE_HEIGHT_M) -> list[PoleState]:
    """Read pole readings from a JSON array of
    {pole_id, lat, lon, height_m?, tilt_deg, azimuth_deg}."""
    with open(path, encoding="utf-8") as fh:
        rows = json.load(fh)
    if not isinstance(rows, list):
        raise ValueError("poles file must contain a JSON array")
    poles = []
    for row in rows:
        poles.append(
            PoleState(
                pole_id=str(row["pole_id"]),
                base=GeoPoint(float(row["lat"]), float(row["lon"])),
                height=float(row.get("height_m", default_height)),
                tilt_deg=float(row["tilt_deg"]),
                azimuth_deg=float(row["azimuth_deg"]),
            )
        )
    return poles


def reports_to_dict(reports: list[BlockageReport]) -> list[dict]:
    return [
        {
            "pole_id": r.pole_id,
            "projected": {
                "zone": r.projected.a.zone,
                "a": {"easting": r.projected.a.easting, "northing": r.projected.a.northing},
                "b": {"easting": r.projected.b.easting, "northing": r.projected.b.northing},
            },
            "affected": [
                {
                    "edge_id": a.edge_id,
                    "verdict": a.verdict.value,
                    "coverage_fraction": a.coverage_fraction,
                }
                for a in r.affected
            ],
            "blocked_edge_ids": sorted(r.blocked_edge_ids),
        }
        for r in reports
    ]


def save_reports(reports: list[BlockageReport], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(reports_to_dict(reports), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
