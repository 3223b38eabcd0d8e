"""Geographic equality between geo-paths and per-pair route clustering.

Two geo-paths are geographically equal at a threshold when no node of
either path lies farther than the threshold from the other path's
polyline. Clustering is first-fit with complete linkage: a path joins the
lowest-id cluster whose every member it equals, otherwise it founds a new
cluster.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .geodesy import EARTH_RADIUS_KM, point_to_path_distance
from .geolocate import GeoPath


@dataclass(frozen=True)
class DeltaVector:
    """All node-to-opposite-path distances between two geo-paths, in km.

    Ordered as: each node of the first path against the second path's
    polyline, then each node of the second path against the first's.
    """

    values: tuple[float, ...]


@dataclass(frozen=True)
class Cluster:
    """Set of pairwise geographically equal geo-paths; ids follow creation order."""

    id: int
    members: tuple[GeoPath, ...]

    @property
    def representative(self) -> GeoPath:
        return min(self.members, key=GeoPath.sort_key)


def delta_vector(p: GeoPath, l: GeoPath, radius_km: float = EARTH_RADIUS_KM) -> DeltaVector:
    values = [point_to_path_distance(u, l.nodes, radius_km) for u in p.nodes]
    values += [point_to_path_distance(u, p.nodes, radius_km) for u in l.nodes]
    return DeltaVector(values=tuple(values))


def geo_equal(p: GeoPath, l: GeoPath, threshold_km: float, radius_km: float = EARTH_RADIUS_KM) -> bool:
    """True iff max(delta_vector(p, l)) <= threshold_km (inclusive)."""
    if threshold_km <= 0:
        raise ValueError(f"threshold_km must be positive, got {threshold_km}")
    for u in p.nodes:
        if point_to_path_distance(u, l.nodes, radius_km) > threshold_km:
            return False
    for u in l.nodes:
        if point_to_path_distance(u, p.nodes, radius_km) > threshold_km:
            return False
    return True


def cluster_pair_routes(
    paths: Iterable[GeoPath], threshold_km: float, radius_km: float = EARTH_RADIUS_KM
) -> tuple[Cluster, ...]:
    """Partition one endpoint pair's geo-paths into equivalence clusters.

    Paths are first put in canonical (lexicographic coordinate) order so
    the order-sensitive first-fit assignment is reproducible.
    """
    ordered = sorted(paths, key=GeoPath.sort_key)
    groups: list[list[GeoPath]] = []
    for path in ordered:
        for members in groups:
            if all(geo_equal(path, member, threshold_km, radius_km) for member in members):
                members.append(path)
                break
        else:
            groups.append([path])
    return tuple(
        Cluster(id=i, members=tuple(members)) for i, members in enumerate(groups)
    )
