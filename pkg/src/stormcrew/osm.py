"""OpenStreetMap XML ingestion into a planar, travel-time-weighted road graph.

Only the OSM v0.6 XML dialect is supported (node elements with id/lat/lon,
way elements with nd refs and tags). Ways carrying a ``highway`` tag become
chains of road edges; everything else is retained for inspection but never
enters the graph.
"""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable

from .geo import GeoPoint, PlanarPoint, Segment, latlon_to_utm, planar_distance, zone_for


class OsmParseError(ValueError):
    """Malformed OSM XML; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class NoRoadsError(ValueError):
    """The document contains no usable highway way."""


class UnknownEdgeError(KeyError):
    """An edge id that does not exist in the graph."""


@dataclass(frozen=True)
class OsmNode:
    id: int
    location: GeoPoint


@dataclass(frozen=True)
class OsmWay:
    id: int
    node_ids: tuple[int, ...]
    tags: dict[str, str]

    @property
    def is_road(self) -> bool:
        return "highway" in self.tags


@dataclass
class ParseResult:
    nodes: dict[int, OsmNode]
    ways: list[OsmWay]
    warnings: list[str]

    @property
    def road_ways(self) -> list[OsmWay]:
        return [w for w in self.ways if w.is_road]


@dataclass(frozen=True)
class RoadEdge:
    edge_id: int
    way_id: int
    endpoints: tuple[int, int]
    geometry: Segment
    length: float  # meters
    width: float  # meters
    travel_time: float  # minutes
    impassable: bool = False
    oneway: bool = False


@dataclass(frozen=True)
class RoadGraph:
    """Immutable road graph; nodes carry both geodetic and planar coordinates."""

    nodes: dict[int, tuple[GeoPoint, PlanarPoint]]
    edges: tuple[RoadEdge, ...]
    adjacency: dict[int, tuple[int, ...]]
    zone: int
    hemisphere: str

    def edge(self, edge_id: int) -> RoadEdge:
        if not 0 <= edge_id < len(self.edges):
            raise UnknownEdgeError(f"edge {edge_id} not in graph")
        return self.edges[edge_id]

    def node_planar(self, node_id: int) -> PlanarPoint:
        return self.nodes[node_id][1]

    def with_impassable(self, edge_ids: Iterable[int]) -> "RoadGraph":
        wanted = set(edge_ids)
        for eid in wanted:
            if not 0 <= eid < len(self.edges):
                raise UnknownEdgeError(f"edge {eid} not in graph")
        edges = tuple(
            replace(e, impassable=True) if e.edge_id in wanted and not e.impassable else e
            for e in self.edges
        )
        return RoadGraph(self.nodes, edges, self.adjacency, self.zone, self.hemisphere)


def parse_osm(source: str | Path | bytes | IO[bytes]) -> ParseResult:
    """Parse an OSM document into nodes, ways, and resolution warnings.

    Ways referencing nodes absent from the document are kept in the result
    (with a warning) but are ignored by road extraction. Consecutive
    duplicate nd refs are collapsed, again with a warning.
    """
    try:
        if isinstance(source, bytes):
            root = ET.fromstring(source)
        elif isinstance(source, (str, Path)) and Path(source).exists():
            root = ET.parse(str(source)).getroot()
        elif isinstance(source, str):
            root = ET.fromstring(source)
        else:
            root = ET.parse(source).getroot()
    except ET.ParseError as exc:
        raise OsmParseError(exc.msg.split(":")[0], exc.position[0]) from exc

    nodes: dict[int, OsmNode] = {}
    ways: list[OsmWay] = []
    warnings: list[str] = []

    for el in root:
        if el.tag == "node":
            try:
                nid = int(el.attrib["id"])
                loc = GeoPoint(float(el.attrib["lat"]), float(el.attrib["lon"]))
            except (KeyError, ValueError) as exc:
                raise OsmParseError(f"bad node element: {exc}") from exc
            if nid in nodes:
                warnings.append(f"duplicate node id {nid}; keeping first occurrence")
                continue
            nodes[nid] = OsmNode(nid, loc)
        elif el.tag == "way":
            try:
                wid = int(el.attrib["id"])
            except (KeyError, ValueError) as exc:
                raise OsmParseError(f"way without usable id: {exc}") from exc
            refs: list[int] = []
            tags: dict[str, str] = {}
            for child in el:
                if child.tag == "nd":
                    ref = int(child.attrib["ref"])
                    if refs and refs[-1] == ref:
                        warnings.append(f"way {wid}: collapsed repeated node {ref}")
                        continue
                    refs.append(ref)
                elif child.tag == "tag":
                    tags[child.attrib["k"]] = child.attrib["v"]
            if len(refs) < 2:
                warnings.append(f"way {wid}: fewer than 2 distinct nodes, skipped")
                continue
            ways.append(OsmWay(wid, tuple(refs), tags))

    for way in ways:
        missing = [r for r in way.node_ids if r not in nodes]
        if missing:
            warnings.append(
                f"way {way.id}: unresolved node refs {missing}; dropped from road extraction"
            )
    return ParseResult(nodes, ways, warnings)


def load_defaults(path: str | Path) -> dict[str, tuple[float, float]]:
    """Read the highway-class defaults table: class -> (width_m, speed_kmh).

    The table must contain a ``default`` fallback row.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    table: dict[str, tuple[float, float]] = {}
    for cls, row in raw.items():
        width = float(row["width_m"])
        speed = float(row["speed_kmh"])
        if width <= 0 or speed <= 0:
            raise ValueError(f"defaults for {cls!r}: width and speed must be positive")
        table[cls] = (width, speed)
    if "default" not in table:
        raise ValueError("defaults table missing the 'default' fallback class")
    return table


def _parse_width_tag(value: str) -> float | None:
    text = value.strip().lower().removesuffix("m").strip()
    try:
        width = float(text)
    except ValueError:
        return None
    return width if width > 0 else None


def build_road_graph(
    parsed: ParseResult,
    defaults: dict[str, tuple[float, float]],
    force_zone: int | None = None,
    honor_oneway: bool = False,
) -> RoadGraph:
    """Assemble the road graph: one edge per consecutive node pair of every
    highway way, projected into a single UTM zone.

    The zone is that of the node bounding-box centroid unless forced. Edge
    ids are dense integers in (way_id, segment position) order.
    """
    resolvable = [
        w for w in parsed.road_ways if all(r in parsed.nodes for r in w.node_ids)
    ]
    if not resolvable:
        raise NoRoadsError("no roads: document has no resolvable highway way")

    used_ids = sorted({r for w in resolvable for r in w.node_ids})
    if force_zone is None:
        lats = [parsed.nodes[i].location.lat for i in used_ids]
        lons = [parsed.nodes[i].location.lon for i in used_ids]
        centroid_lon = (min(lons) + max(lons)) / 2.0
        zone = zone_for(centroid_lon)
    else:
        zone = force_zone

    nodes: dict[int, tuple[GeoPoint, PlanarPoint]] = {}
    for nid in used_ids:
        loc = parsed.nodes[nid].location
        nodes[nid] = (loc, latlon_to_utm(loc, force_zone=zone))
    hemisphere = nodes[used_ids[0]][1].hemisphere

    edges: list[RoadEdge] = []
    adjacency: dict[int, list[int]] = {nid: [] for nid in used_ids}
    for way in sorted(resolvable, key=lambda w: w.id):
        cls = way.tags["highway"]
        def_width, speed = defaults.get(cls, defaults["default"])
        width = def_width
        if "width" in way.tags:
            tagged = _parse_width_tag(way.tags["width"])
            if tagged is not None:
                width = tagged
        oneway = honor_oneway and way.tags.get("oneway", "no") in ("yes", "true", "1")
        for a, b in zip(way.node_ids, way.node_ids[1:]):
            geometry = Segment(nodes[a][1], nodes[b][1])
            length = geometry.length
            if length <= 0.0:
                continue  # coincident nodes with distinct ids
            travel_time = (length / 1000.0) / speed * 60.0
            eid = len(edges)
            edges.append(
                RoadEdge(eid, way.id, (a, b), geometry, length, width, travel_time, False, oneway)
            )
            adjacency[a].append(eid)
            adjacency[b].append(eid)

    if not edges:
        raise NoRoadsError("no roads: every highway way degenerated to zero length")
    return RoadGraph(
        nodes=nodes,
        edges=tuple(edges),
        adjacency={nid: tuple(eids) for nid, eids in adjacency.items()},
        zone=zone,
        hemisphere=hemisphere,
    )


def point_segment_distance(p: PlanarPoint, s: Segment) -> float:
    dx, dy = s.delta
    denom = dx * dx + dy * dy
    px = p.easting - s.a.easting
    py = p.northing - s.a.northing
    if denom == 0.0:
        return math.hypot(px, py)
    t = max(0.0, min(1.0, (px * dx + py * dy) / denom))
    return math.hypot(px - t * dx, py - t * dy)


def find_nearby_edges(graph: RoadGraph, p: PlanarPoint, radius: float) -> list[int]:
    """Edges whose minimum distance to ``p`` is within ``radius``,
    nearest first, ties broken by edge id."""
    if radius <= 0.0 and not math.isinf(radius):
        raise ValueError(f"radius must be positive, got {radius}")
    hits = []
    for e in graph.edges:
        d = point_segment_distance(p, e.geometry)
        if d <= radius:
            hits.append((d, e.edge_id))
    hits.sort()
    return [eid for _, eid in hits]


def graph_to_dict(graph: RoadGraph) -> dict:
    return {
        "zone": graph.zone,
        "hemisphere": graph.hemisphere,
        "nodes": {
            str(nid): {
                "lat": loc.lat,
                "lon": loc.lon,
                "easting": pp.easting,
                "northing": pp.northing,
            }
            for nid, (loc, pp) in sorted(graph.nodes.items())
        },
        "edges": [
            {
                "edge_id": e.edge_id,
                "way_id": e.way_id,
                "from": e.endpoints[0],
                "to": e.endpoints[1],
                "length_m": e.length,
                "width_m": e.width,
                "travel_time_min": e.travel_time,
                "impassable": e.impassable,
                "oneway": e.oneway,
            }
            for e in graph.edges
        ],
    }


def graph_from_dict(data: dict) -> RoadGraph:
    zone = int(data["zone"])
    hemisphere = data["hemisphere"]
    nodes: dict[int, tuple[GeoPoint, PlanarPoint]] = {}
    for nid, row in data["nodes"].items():
        nodes[int(nid)] = (
            GeoPoint(row["lat"], row["lon"]),
            PlanarPoint(row["easting"], row["northing"], zone, hemisphere),
        )
    edges = []
    adjacency: dict[int, list[int]] = {nid: [] for nid in nodes}
    for row in data["edges"]:
        a, b = int(row["from"]), int(row["to"])
        e = RoadEdge(
            edge_id=int(row["edge_id"]),
            way_id=int(row["way_id"]),
            endpoints=(a, b),
            geometry=Segment(nodes[a][1], nodes[b][1]),
            length=float(row["length_m"]),
            width=float(row["width_m"]),
            travel_time=float(row["travel_time_min"]),
            impassable=bool(row["impassable"]),
            oneway=bool(row.get("oneway", False)),
        )
        edges.append(e)
        adjacency[a].append(e.edge_id)
        adjacency[b].append(e.edge_id)
    edges.sort(key=lambda e: e.edge_id)
    if [e.edge_id for e in edges] != list(range(len(edges))):
        raise ValueError("edge ids in graph document are not dense")
    return RoadGraph(
        nodes=nodes,
        edges=tuple(edges),
        adjacency={nid: tuple(eids) for nid, eids in adjacency.items()},
        zone=zone,
        hemisphere=hemisphere,
    )


def save_graph(graph: RoadGraph, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(graph_to_dict(graph), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_graph(path: str | Path) -> RoadGraph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_dict(json.load(fh))
