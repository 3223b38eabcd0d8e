"""Spherical-Earth distance primitives.

Everything here treats the Earth as a sphere of radius ``EARTH_RADIUS_KM``
(configurable per call). Segments between consecutive route nodes are
great-circle arcs; point-to-segment distance is the cross-track distance
when the perpendicular foot falls inside the arc, and the distance to the
nearer endpoint otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyPath

EARTH_RADIUS_KM = 6371.0

# Below this, the two segment endpoints are treated as coincident/antipodal
# and the great circle through them is undefined.
_DEGENERATE_NORM = 1e-12


def _normalize_lon(lon: float) -> float:
    if -180.0 <= lon < 180.0:
        return lon
    return ((lon + 180.0) % 360.0) - 180.0


@dataclass(frozen=True, order=True)
class Coordinate:
    """Geographic position in decimal degrees, lon normalized to [-180, 180)."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lat) or not (-90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude must be in [-90, 90], got {self.lat}")
        if not math.isfinite(self.lon):
            raise ValueError(f"longitude must be finite, got {self.lon}")
        object.__setattr__(self, "lon", _normalize_lon(self.lon))


@dataclass(frozen=True)
class GeoSegment:
    """Great-circle arc between two coordinates; zero length is allowed."""

    start: Coordinate
    end: Coordinate


def great_circle_distance(a: Coordinate, b: Coordinate, radius_km: float = EARTH_RADIUS_KM) -> float:
    """Haversine distance in kilometers; exactly 0 iff ``a == b``."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlon = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * radius_km * math.asin(min(1.0, math.sqrt(h)))


def _unit_vector(c: Coordinate) -> tuple[float, float, float]:
    phi = math.radians(c.lat)
    lam = math.radians(c.lon)
    cos_phi = math.cos(phi)
    return (cos_phi * math.cos(lam), cos_phi * math.sin(lam), math.sin(phi))


def _cross(u: tuple[float, float, float], v: tuple[float, float, float]) -> tuple[float, float, float]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u: tuple[float, float, float], v: tuple[float, float, float]) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _norm(u: tuple[float, float, float]) -> float:
    return math.sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2])


def _point_to_arc_distance(p: Coordinate, a: Coordinate, b: Coordinate, radius_km: float) -> float:
    if p == a or p == b:
        return 0.0
    d_pa = great_circle_distance(p, a, radius_km)
    if a == b:
        return d_pa
    d_pb = great_circle_distance(p, b, radius_km)

    va = _unit_vector(a)
    vb = _unit_vector(b)
    vp = _unit_vector(p)

    n = _cross(va, vb)
    nn = _norm(n)
    if nn < _DEGENERATE_NORM:
        # Coincident or antipodal endpoints: no unique great circle.
        return min(d_pa, d_pb)
    n_hat = (n[0] / nn, n[1] / nn, n[2] / nn)

    # Signed sine of the cross-track angle.
    s = _dot(vp, n_hat)
    proj = (vp[0] - s * n_hat[0], vp[1] - s * n_hat[1], vp[2] - s * n_hat[2])
    pn = _norm(proj)
    if pn < _DEGENERATE_NORM:
        # p sits at a pole of the great circle: equidistant from the whole arc.
        return min(d_pa, d_pb)
    foot = (proj[0] / pn, proj[1] / pn, proj[2] / pn)

    within = (
        _dot(_cross(va, foot), n_hat) >= -_DEGENERATE_NORM
        and _dot(_cross(foot, vb), n_hat) >= -_DEGENERATE_NORM
    )
    if within:
        return radius_km * math.asin(min(1.0, abs(s)))
    return min(d_pa, d_pb)


def point_to_segment_distance(p: Coordinate, s: GeoSegment, radius_km: float = EARTH_RADIUS_KM) -> float:
    """Distance from ``p`` to the closest point (not necessarily a node) of the arc."""
    return _point_to_arc_distance(p, s.start, s.end, radius_km)


def point_to_path_distance(
    p: Coordinate, nodes: Sequence[Coordinate], radius_km: float = EARTH_RADIUS_KM
) -> float:
    """Minimum distance from ``p`` to the polyline through ``nodes``.

    A single-node path degenerates to point-to-point distance.
    """
    if len(nodes) == 0:
        raise EmptyPath("path has no nodes")
    if len(nodes) == 1:
        return great_circle_distance(p, nodes[0], radius_km)
    return min(
        _point_to_arc_distance(p, nodes[i], nodes[i + 1], radius_km)
        for i in range(len(nodes) - 1)
    )


def path_length(nodes: Sequence[Coordinate], radius_km: float = EARTH_RADIUS_KM) -> float:
    """Total great-circle length of the polyline through ``nodes``."""
    if len(nodes) == 0:
        raise EmptyPath("path has no nodes")
    return math.fsum(
        great_circle_distance(nodes[i], nodes[i + 1], radius_km) for i in range(len(nodes) - 1)
    )
