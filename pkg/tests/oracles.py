"""Independent reference implementations used only to check the package.

Nothing here imports stormcrew. The transverse-Mercator series is a
different published formulation than the one shipped in the package, the
segment classifier solves the parametric system in exact rational
arithmetic, and the all-pairs oracle is a plain Floyd-Warshall relaxation.
"""

from __future__ import annotations

import math
from fractions import Fraction

# WGS84 semi-axes (the package uses a/f; agreement is part of the check)
_SM_A = 6378137.0
_SM_B = 6356752.314245179
_SCALE = 0.9996


def _arc_length_of_meridian(phi: float) -> float:
    n = (_SM_A - _SM_B) / (_SM_A + _SM_B)
    alpha = ((_SM_A + _SM_B) / 2.0) * (1.0 + n**2 / 4.0 + n**4 / 64.0)
    beta = -3.0 * n / 2.0 + 9.0 * n**3 / 16.0 - 3.0 * n**5 / 32.0
    gamma = 15.0 * n**2 / 16.0 - 15.0 * n**4 / 32.0
    delta = -35.0 * n**3 / 48.0 + 105.0 * n**5 / 256.0
    epsilon = 315.0 * n**4 / 512.0
    return alpha * (
        phi
        + beta * math.sin(2.0 * phi)
        + gamma * math.sin(4.0 * phi)
        + delta * math.sin(6.0 * phi)
        + epsilon * math.sin(8.0 * phi)
    )


def tm_forward(lat_deg: float, lon_deg: float, zone: int) -> tuple[float, float]:
    """WGS84 lat/lon -> UTM (easting, northing) by the Hoffmann-Wellenhof
    series in generating parameter n, as opposed to the e^2 power series."""
    phi = math.radians(lat_deg)
    lam = math.radians(lon_deg)
    lam0 = math.radians(zone * 6.0 - 183.0)

    ep2 = (_SM_A**2 - _SM_B**2) / _SM_B**2
    nu2 = ep2 * math.cos(phi) ** 2
    big_n = _SM_A**2 / (_SM_B * math.sqrt(1.0 + nu2))
    t = math.tan(phi)
    t2 = t * t
    l = lam - lam0

    l3 = 1.0 - t2 + nu2
    l4 = 5.0 - t2 + 9.0 * nu2 + 4.0 * nu2 * nu2
    l5 = 5.0 - 18.0 * t2 + t2 * t2 + 14.0 * nu2 - 58.0 * t2 * nu2
    l6 = 61.0 - 58.0 * t2 + t2 * t2 + 270.0 * nu2 - 330.0 * t2 * nu2
    l7 = 61.0 - 479.0 * t2 + 179.0 * t2 * t2 - t2 * t2 * t2
    l8 = 1385.0 - 3111.0 * t2 + 543.0 * t2 * t2 - t2 * t2 * t2

    c = math.cos(phi)
    x = (
        big_n * c * l
        + big_n / 6.0 * c**3 * l3 * l**3
        + big_n / 120.0 * c**5 * l5 * l**5
        + big_n / 5040.0 * c**7 * l7 * l**7
    )
    y = (
        _arc_length_of_meridian(phi)
        + t / 2.0 * big_n * c**2 * l**2
        + t / 24.0 * big_n * c**4 * l4 * l**4
        + t / 720.0 * big_n * c**6 * l6 * l**6
        + t / 40320.0 * big_n * c**8 * l8 * l**8
    )

    easting = x * _SCALE + 500000.0
    northing = y * _SCALE
    if northing < 0.0:
        northing += 10000000.0
    return easting, northing


# Exact classification of a segment pair. Values returned:
#   "proper"             interiors cross at a single point
#   "touch"              single contact point on a boundary (endpoint on the
#                        other segment, shared endpoint, T-junction)
#   "overlap"            collinear with a positive-length common piece
#   "collinear_disjoint" on one line but no common point
#   "none"               no common point, not collinear
def segment_relation(a, b, c, d) -> str:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    dx, dy = Fraction(d[0]), Fraction(d[1])

    rx, ry = bx - ax, by - ay
    sx, sy = dx - cx, dy - cy
    denom = rx * sy - ry * sx
    qpx, qpy = cx - ax, cy - ay
    cross_qp_r = qpx * ry - qpy * rx

    if denom == 0:
        if cross_qp_r != 0:
            return "none"  # parallel, offset lines
        # Collinear: compare 1-D intervals along the dominant axis of r.
        if rx != 0:
            t0, t1 = sorted((Fraction(0), (dx - ax) / rx if rx else 0))
            tc = (cx - ax) / rx
            td = (dx - ax) / rx
        elif ry != 0:
            tc = (cy - ay) / ry
            td = (dy - ay) / ry
        else:
            raise ValueError("degenerate first segment")
        lo, hi = min(tc, td), max(tc, td)
        if hi < 0 or lo > 1:
            return "collinear_disjoint"
        if hi == 0 or lo == 1 or tc == td:
            return "touch"
        return "overlap"

    t = (qpx * sy - qpy * sx) / denom
    u = cross_qp_r / denom
    if 0 < t < 1 and 0 < u < 1:
        return "proper"
    if 0 <= t <= 1 and 0 <= u <= 1:
        return "touch"
    return "none"


def floyd_warshall(n: int, direct: dict[tuple[int, int], float]) -> list[list[float]]:
    """All-pairs shortest costs from a dict of direct edge costs."""
    inf = math.inf
    dist = [[inf] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0.0
    for (u, v), w in direct.items():
        if w < dist[u][v]:
            dist[u][v] = w
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                nd = dik + dk[j]
                if nd < di[j]:
                    di[j] = nd
    return dist


def point_segment_distance(p, a, b) -> float:
    px, py = p
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / denom
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))
