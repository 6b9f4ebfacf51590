"""Shortest-path travel times over the road graph and the movement cost
matrix between depots and fault points.

Matrix entries are integer minutes; pairs that cannot be reached (or that
exceed a caller-set direct-travel cap) carry a large sentinel value that
strictly exceeds every finite entry. Computed matrices use 0 on the
diagonal; hand-authored fixture files may instead carry the sentinel there,
which the loader preserves verbatim.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path

from .geo import GeoPoint, latlon_to_utm, planar_distance
from .osm import RoadGraph

DEFAULT_SENTINEL = 1000

SITE_KINDS = ("start_depot", "fault_pole", "fault_wire", "end_depot")


class MatrixFormatError(ValueError):
    """Malformed cost-matrix CSV; message carries cell coordinates."""


class UnknownNodeError(KeyError):
    """A node id absent from the road graph."""


@dataclass(frozen=True)
class SitePoint:
    """A depot or fault location, attached to its nearest road-graph node."""

    site_id: int
    kind: str
    location: GeoPoint
    attach_node: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in SITE_KINDS:
            raise ValueError(f"site {self.site_id}: unknown kind {self.kind!r}")


@dataclass
class CostMatrix:
    """Square table of travel minutes between sites, labels 0..n-1."""

    entries: list[list[int]]
    sentinel: int = DEFAULT_SENTINEL
    labels: list[int] = field(default_factory=list)
    raw: list[list[float]] | None = None  # unrounded minutes, when computed

    def __post_init__(self) -> None:
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise MatrixFormatError("matrix is not square")
        if not self.labels:
            self.labels = list(range(n))
        if self.labels != list(range(n)):
            raise MatrixFormatError(f"labels must be 0..{n - 1}, got {self.labels}")
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if v > self.sentinel:
                    raise MatrixFormatError(
                        f"cell ({i},{j}) = {v} exceeds sentinel {self.sentinel}"
                    )

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def is_unreachable(self, i: int, j: int) -> bool:
        return self.entries[i][j] >= self.sentinel


def shortest_travel_time(graph: RoadGraph, src: int, dst: int) -> float:
    """Minimum travel minutes between two graph nodes over passable edges;
    ``math.inf`` when no admissible path exists."""
    if dst not in graph.nodes:
        raise UnknownNodeError(f"node {dst} not in graph")
    if src == dst:
        return 0.0
    return _dijkstra(graph, src).get(dst, math.inf)


def _dijkstra(graph: RoadGraph, src: int) -> dict[int, float]:
    if src not in graph.nodes:
        raise UnknownNodeError(f"node {src} not in graph")
    dist: dict[int, float] = {src: 0.0}
    heap: list[tuple[float, int]] = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        for eid in graph.adjacency[u]:
            e = graph.edges[eid]
            if e.impassable:
                continue
            if e.oneway and u != e.endpoints[0]:
                continue
            v = e.endpoints[1] if u == e.endpoints[0] else e.endpoints[0]
            nd = d + e.travel_time
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def attach_sites(
    sites: list[tuple[int, str, GeoPoint]], graph: RoadGraph
) -> list[SitePoint]:
    """Attach each (site_id, kind, location) to its nearest graph node."""
    attached = []
    for site_id, kind, location in sites:
        p = latlon_to_utm(location, force_zone=graph.zone)
        best = min(
            graph.nodes.items(),
            key=lambda item: (planar_distance(p, item[1][1]), item[0]),
        )
        attached.append(SitePoint(site_id, kind, location, best[0]))
    _validate_sites(attached)
    return attached


def _validate_sites(sites: list[SitePoint]) -> None:
    ids = [s.site_id for s in sites]
    if ids != list(range(len(sites))):
        raise ValueError(f"site ids must be dense 0..{len(sites) - 1}, got {ids}")
    kinds = {s.kind for s in sites}
    if "start_depot" not in kinds or "end_depot" not in kinds:
        raise ValueError("need at least one start_depot and one end_depot site")


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def build_matrix(
    sites: list[SitePoint],
    graph: RoadGraph,
    sentinel: int = DEFAULT_SENTINEL,
    max_direct: float | None = None,
    sentinel_diagonal: bool = False,
) -> CostMatrix:
    """Movement cost matrix over all site pairs.

    Entries are shortest-path minutes rounded half-up (floored at 1 minute
    off-diagonal so no finite entry collapses to zero); unreachable pairs,
    and pairs beyond ``max_direct``, carry the sentinel. The diagonal is 0
    unless fixture-compatibility mode asks for the sentinel.
    """
    _validate_sites(sites)
    for s in sites:
        if s.attach_node is None:
            raise ValueError(f"site {s.site_id} has no attach_node")
        if s.attach_node not in graph.nodes:
            raise UnknownNodeError(f"site {s.site_id}: node {s.attach_node} not in graph")

    n = len(sites)
    by_source: dict[int, dict[int, float]] = {}
    for s in sites:
        if s.attach_node not in by_source:
            by_source[s.attach_node] = _dijkstra(graph, s.attach_node)

    entries = [[0] * n for _ in range(n)]
    raw = [[0.0] * n for _ in range(n)]
    for i, si in enumerate(sites):
        dist = by_source[si.attach_node]
        for j, sj in enumerate(sites):
            if i == j:
                entries[i][j] = sentinel if sentinel_diagonal else 0
                raw[i][j] = 0.0
                continue
            minutes = dist.get(sj.attach_node, math.inf)
            raw[i][j] = minutes
            if not math.isfinite(minutes) or (max_direct is not None and minutes > max_direct):
                entries[i][j] = sentinel
            else:
                entries[i][j] = min(max(1, round_half_up(minutes)), sentinel)
    return CostMatrix(entries, sentinel, list(range(n)), raw)


def save_matrix(m: CostMatrix, path: str | Path) -> None:
    """CSV with site labels as both header row and leading column."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([""] + [str(l) for l in m.labels])
        for label, row in zip(m.labels, m.entries):
            writer.writerow([str(label)] + [str(v) for v in row])


def load_matrix(path: str | Path, sentinel: int = DEFAULT_SENTINEL) -> CostMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise MatrixFormatError("empty matrix file")
    header = rows[0]
    n = len(header) - 1
    if n < 1:
        raise MatrixFormatError("header row has no site labels")
    if len(rows) - 1 != n:
        raise MatrixFormatError(f"expected {n} data rows for {n} labels, got {len(rows) - 1}")
    try:
        labels = [int(x) for x in header[1:]]
    except ValueError as exc:
        raise MatrixFormatError(f"non-integer header label: {exc}") from exc

    entries: list[list[int]] = []
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise MatrixFormatError(f"row {i}: expected {n + 1} cells, got {len(row)}")
        if row[0] != str(labels[i]):
            raise MatrixFormatError(f"row {i}: leading label {row[0]!r} != {labels[i]}")
        parsed = []
        for j, cell in enumerate(row[1:]):
            try:
                parsed.append(int(cell))
            except ValueError as exc:
                raise MatrixFormatError(f"cell ({i},{j}): non-numeric {cell!r}") from exc
        entries.append(parsed)
    return CostMatrix(entries, sentinel, labels)


def diff_matrices(a: CostMatrix, b: CostMatrix) -> list[tuple[int, int, int, int]]:
    """All cells where the two matrices differ, as (i, j, a_val, b_val)."""
    if a.size != b.size:
        raise ValueError(f"matrix size mismatch: {a.size} vs {b.size}")
    return [
        (i, j, a.entries[i][j], b.entries[i][j])
        for i in range(a.size)
        for j in range(a.size)
        if a.entries[i][j] != b.entries[i][j]
    ]
