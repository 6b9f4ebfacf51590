import math
import random
from pathlib import Path

import pytest

from stormcrew.blockage import (
    BlockageReport,
    PoleState,
    apply_blockages,
    assess,
    coverage_fraction,
    load_poles,
    pole_projection,
)
from stormcrew.geo import GeoPoint, PlanarPoint, Segment, Verdict, zone_for
from stormcrew.osm import UnknownEdgeError, build_road_graph, load_defaults, parse_osm

DATA = Path(__file__).resolve().parents[1] / "src" / "stormcrew" / "data"

FIG4_EDGE_ID = 11  # the 110->111 segment of the diagonal lane


@pytest.fixture(scope="module")
def graph():
    return build_road_graph(
        parse_osm(DATA / "vicinity.osm"), load_defaults(DATA / "highway_defaults.json")
    )


@pytest.fixture(scope="module")
def poles():
    return load_poles(DATA / "demo_poles.json")


def P(x, y):
    return PlanarPoint(200000.0 + x, 1000000.0 + y, 54)


def pole(lat, lon, height=12.0, tilt=45.0, azimuth=0.0, pid="t"):
    return PoleState(pid, GeoPoint(lat, lon), height, tilt, azimuth)


class TestPoleProjection:
    def test_upright_pole_zero_length(self):
        proj = pole_projection(pole(35.6149, 139.5146, tilt=0.0), 54)
        assert proj.length == 0.0

    def test_flat_pole_due_east(self):
        proj = pole_projection(pole(35.6149, 139.5146, height=12, tilt=90, azimuth=90), 54)
        de, dn = proj.delta
        assert de == pytest.approx(12.0, abs=1e-9)
        assert dn == pytest.approx(0.0, abs=1e-9)

    def test_half_reach_due_north(self):
        proj = pole_projection(pole(35.6149, 139.5146, height=10, tilt=30, azimuth=0), 54)
        de, dn = proj.delta
        assert dn == pytest.approx(5.0, abs=1e-9)
        assert de == pytest.approx(0.0, abs=1e-9)

    def test_length_equals_height_sin_tilt(self):
        rng = random.Random(404)
        for _ in range(10000):
            p = pole(
                rng.uniform(-80, 80),
                rng.uniform(-179, 179),
                height=rng.uniform(0.5, 30.0),
                tilt=rng.uniform(0.0, 90.0),
                azimuth=rng.uniform(0.0, 360.0),
            )
            proj = pole_projection(p, zone_for(p.base.lon))
            expected = p.height * math.sin(math.radians(p.tilt_deg))
            assert abs(proj.length - expected) <= 1e-9 * max(expected, 1.0)

    def test_azimuth_wraps_at_360(self):
        a = pole_projection(pole(35.6149, 139.5146, azimuth=47.5), 54)
        b = pole_projection(pole(35.6149, 139.5146, azimuth=47.5 + 360.0), 54)
        assert a == b

    def test_validation(self):
        with pytest.raises(ValueError):
            pole(35.0, 139.0, height=0.0)
        with pytest.raises(ValueError):
            pole(35.0, 139.0, tilt=90.5)


class TestCoverageFraction:
    ROAD = Segment(P(0, 0), P(100, 0))

    def test_projection_short_of_corridor(self):
        assert coverage_fraction(self.ROAD, 6.0, Segment(P(50, -13), P(50, -4))) == 0.0

    def test_partial_penetration_from_one_side(self):
        covered = coverage_fraction(self.ROAD, 6.0, Segment(P(50, -10), P(50, -1)))
        assert covered == pytest.approx(2.0 / 6.0)

    def test_full_crossing_caps_at_one(self):
        covered = coverage_fraction(self.ROAD, 6.0, Segment(P(50, -10), P(50, 10)))
        assert covered == 1.0

    def test_lying_along_the_road_covers_little(self):
        covered = coverage_fraction(self.ROAD, 6.0, Segment(P(10, -2), P(90, -1)))
        assert covered == pytest.approx(1.0 / 6.0)

    def test_outside_axial_extent(self):
        assert coverage_fraction(self.ROAD, 6.0, Segment(P(120, -5), P(120, 5))) == 0.0


class TestAssess:
    def test_fig4_pole_blocks_printed_edge(self, graph, poles):
        report = assess(poles[0], graph)
        assert report.blocked_edge_ids == [FIG4_EDGE_ID]
        verdicts = {a.edge_id: a.verdict for a in report.affected}
        assert verdicts[FIG4_EDGE_ID] is Verdict.CROSSING

    def test_upright_pole_blocks_nothing(self, graph, poles):
        report = assess(poles[1], graph)
        assert report.blocked_edge_ids == []
        assert report.affected == []

    def test_fallen_pole_away_from_roads(self, graph, poles):
        assert assess(poles[2], graph).blocked_edge_ids == []

    def test_search_radius_below_height_rejected(self, graph, poles):
        with pytest.raises(ValueError):
            assess(poles[0], graph, search_radius=2.0)

    def test_crossing_verdict_always_blocks(self, graph):
        # random poles dropped near the diagonal lane: every crossing verdict
        # must appear in the blocked set
        rng = random.Random(808)
        crossings = 0
        for _ in range(100):
            p = pole(
                rng.uniform(35.6148, 35.6152),
                rng.uniform(139.5144, 139.5150),
                tilt=rng.uniform(15.0, 90.0),
                azimuth=rng.uniform(0.0, 360.0),
                pid=f"r{_}",
            )
            report = assess(p, graph)
            for a in report.affected:
                if a.verdict is Verdict.CROSSING:
                    crossings += 1
                    assert a.edge_id in report.blocked_edge_ids
        assert crossings > 0

    def test_monotone_in_pole_set(self, graph):
        rng = random.Random(909)
        for _ in range(100):
            ps = [
                pole(
                    rng.uniform(35.6142, 35.6155),
                    rng.uniform(139.5138, 139.5162),
                    tilt=rng.uniform(0.0, 90.0),
                    azimuth=rng.uniform(0.0, 360.0),
                    pid=f"m{i}",
                )
                for i in range(rng.randint(1, 5))
            ]
            reports = [assess(p, graph) for p in ps]
            blocked_all = {

                eid for r in reports for eid in r.blocked_edge_ids
            }
            for k in range(len(reports)):
                subset = {eid for r in reports[:k] for eid in r.blocked_edge_ids}
                assert subset <= blocked_all


class TestApplyBlockages:
    def test_empty_reports_identity(self, graph):
        assert apply_blockages(graph, []) == graph

    def test_double_block_idempotent(self, graph, poles):
        report = assess(poles[0], graph)
        g2 = apply_blockages(graph, [report, report])
        assert [e.edge_id for e in g2.edges if e.impassable] == [FIG4_EDGE_ID]

    def test_union_semantics(self, graph):
        r1 = BlockageReport("a", graph.edges[0].geometry, [], [0])
        r2 = BlockageReport("b", graph.edges[3].geometry, [], [3])
        g2 = apply_blockages(graph, [r1, r2])
        assert {e.edge_id for e in g2.edges if e.impassable} == {0, 3}

    def test_input_graph_unmodified(self, graph, poles):
        apply_blockages(graph, [assess(poles[0], graph)])
        assert not any(e.impassable for e in graph.edges)

    def test_unknown_edge_named(self, graph):
        bad = BlockageReport("x", graph.edges[0].geometry, [], [999])
        with pytest.raises(UnknownEdgeError, match="999"):
            apply_blockages(graph, [bad])


def test_load_poles_defaults_height(tmp_path):
    path = tmp_path / "poles.json"
    path.write_text('[{"pole_id": "p1", "lat": 35.6, "lon": 139.5, "tilt_deg": 30, "azimuth_deg": 10}]')
    (p,) = load_poles(path)
    assert p.height == 12.0
