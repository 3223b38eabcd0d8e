"""Route diversity metrics for one endpoint pair.

The pairwise score of two geo-paths is ``(1 - Var'(delta)) * Mean(delta)``
where ``delta`` is their node-to-opposite-path distance vector and ``Var'``
is the population variance of the vector after dividing every entry by its
maximum (so the score stays in kilometers and scales linearly with
distance). A route set's GDI accumulates greedily: start from the most
diverse pair, then repeatedly pull in the route most diverse from the
already-selected set, summing the scores.

MGDI is the hypothetical ceiling for a given route count: in a planar
model, routes are two-segment triangles sharing the endpoints, apexes on
the perpendicular bisector; the longest route pins one apex at the maximum
height and the rest are grid-searched for the largest GDI.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cluster import delta_vector
from .errors import EmptySet, InvalidCounts, InvalidGeometry
from .geodesy import EARTH_RADIUS_KM
from .geolocate import GeoPath

PlanarPoint = tuple[float, float]
PlanarPath = tuple[PlanarPoint, ...]


@dataclass(frozen=True)
class DiversityConfig:
    """Knobs shared across the scoring pipeline."""

    threshold_km: float = 50.0
    earth_radius_km: float = EARTH_RADIUS_KM
    mgdi_grid_steps: int = 21

    def __post_init__(self) -> None:
        if self.threshold_km <= 0:
            raise ValueError("threshold_km must be positive")
        if self.earth_radius_km <= 0:
            raise ValueError("earth_radius_km must be positive")
        if self.mgdi_grid_steps < 1:
            raise ValueError("mgdi_grid_steps must be a positive integer")


@dataclass(frozen=True)
class DiversityReport:
    """Per-endpoint-pair scoring result."""

    src: str
    dst: str
    ip_route_count: int
    geo_path_count: int
    cluster_count: int
    compression_ratio: float
    gdi_km: float
    mgdi_km: float
    gdi_over_mgdi: float


def diversity_from_delta(values: Sequence[float]) -> float:
    """Evaluate the pairwise score directly on a distance vector."""
    n = len(values)
    if n == 0:
        raise ValueError("empty distance vector")
    peak = max(values)
    if peak <= 0.0:
        return 0.0
    normalized = [v / peak for v in values]
    norm_mean = math.fsum(normalized) / n
    variance = math.fsum((x - norm_mean) ** 2 for x in normalized) / n
    return (1.0 - variance) * (math.fsum(values) / n)


def pair_diversity(p: GeoPath, l: GeoPath, radius_km: float = EARTH_RADIUS_KM) -> float:
    """Diversity of two geo-paths, in kilometers; symmetric, 0 for identical paths."""
    return diversity_from_delta(delta_vector(p, l, radius_km).values)


def set_diversity(p: GeoPath, routes: Iterable[GeoPath], radius_km: float = EARTH_RADIUS_KM) -> float:
    """Minimum pairwise diversity between ``p`` and any member of ``routes``."""
    best = None
    for other in routes:
        score = pair_diversity(p, other, radius_km)
        if best is None or score < best:
            best = score
    if best is None:
        raise EmptySet("set_diversity needs at least one route in the set")
    return best


def _greedy_accumulate(matrix: Sequence[Sequence[float]]) -> float:
    """Greedy GDI on a symmetric pairwise-score matrix in canonical row order.

    Ties in every argmax go to the earliest canonical index.
    """
    n = len(matrix)
    if n <= 1:
        return 0.0
    best = -1.0
    best_i = best_j = 0
    for i in range(n):
        row = matrix[i]
        for j in range(i + 1, n):
            if row[j] > best:
                best, best_i, best_j = row[j], i, j
    total = best
    selected = [False] * n
    selected[best_i] = selected[best_j] = True
    to_selected = [min(matrix[k][best_i], matrix[k][best_j]) for k in range(n)]
    for _ in range(n - 2):
        pick = -1
        pick_score = -1.0
        for k in range(n):
            if not selected[k] and to_selected[k] > pick_score:
                pick_score = to_selected[k]
                pick = k
        total += pick_score
        selected[pick] = True
        row = matrix[pick]
        for k in range(n):
            if not selected[k] and row[k] < to_selected[k]:
                to_selected[k] = row[k]
    return total


def gdi(paths: Iterable[GeoPath], radius_km: float = EARTH_RADIUS_KM) -> float:
    """Geographic Diversity Index of a route set; 0 for fewer than 2 routes."""
    ordered = sorted(paths, key=GeoPath.sort_key)
    n = len(ordered)
    if n <= 1:
        return 0.0
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            score = pair_diversity(ordered[i], ordered[j], radius_km)
            matrix[i][j] = matrix[j][i] = score
    return _greedy_accumulate(matrix)


def _planar_point_to_path(point: PlanarPoint, path: PlanarPath) -> float:
    px, py = point
    best = math.inf
    for (ax, ay), (bx, by) in zip(path, path[1:]):
        dx, dy = bx - ax, by - ay
        seg_sq = dx * dx + dy * dy
        if seg_sq == 0.0:
            dist = math.hypot(px - ax, py - ay)
        else:
            t = ((px - ax) * dx + (py - ay) * dy) / seg_sq
            t = min(1.0, max(0.0, t))
            dist = math.hypot(px - (ax + t * dx), py - (ay + t * dy))
        if dist < best:
            best = dist
    return best


def planar_pair_diversity(p: PlanarPath, l: PlanarPath) -> float:
    """Pairwise diversity for paths given as (x, y) kilometer coordinates."""
    values = [_planar_point_to_path(u, l) for u in p]
    values += [_planar_point_to_path(u, p) for u in l]
    return diversity_from_delta(values)


def planar_gdi(paths: Iterable[PlanarPath]) -> float:
    """GDI for planar paths; canonical order is lexicographic on coordinates."""
    ordered = sorted(paths)
    n = len(ordered)
    if n <= 1:
        return 0.0
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            score = planar_pair_diversity(ordered[i], ordered[j])
            matrix[i][j] = matrix[j][i] = score
    return _greedy_accumulate(matrix)


def _height_grid(h_max: float, steps: int) -> list[float]:
    if steps == 1 or h_max == 0.0:
        return [h_max]
    span = 2.0 * h_max
    return [-h_max + span * k / (steps - 1) for k in range(steps)]


def triangle_route(endpoint_distance_km: float, height_km: float) -> PlanarPath:
    """Two-segment route from (0,0) to (d,0) via an apex on the bisector."""
    return ((0.0, 0.0), (endpoint_distance_km / 2.0, height_km), (endpoint_distance_km, 0.0))


def mgdi(
    n_routes: int,
    endpoint_distance_km: float,
    longest_route_km: float,
    cfg: DiversityConfig | None = None,
) -> float:
    """Hypothetical maximum GDI for ``n_routes`` triangle-shaped routes.

    The apex height of each route may range over +/- h_max where
    ``h_max = sqrt((longest/2)^2 - (endpoint_distance/2)^2)``; the longest
    route is pinned at +h_max and the remaining heights are searched on a
    signed grid of ``cfg.mgdi_grid_steps`` values. Since duplicate routes
    never change a GDI, the search enumerates distinct height subsets
    rather than full assignments.
    """
    cfg = cfg or DiversityConfig()
    if n_routes <= 1:
        return 0.0
    if endpoint_distance_km <= 0:
        raise InvalidGeometry(f"endpoint distance must be positive, got {endpoint_distance_km}")
    if longest_route_km < endpoint_distance_km:
        raise InvalidGeometry(
            f"longest route ({longest_route_km} km) shorter than the endpoint "
            f"distance ({endpoint_distance_km} km)"
        )
    h_max = math.sqrt(max(0.0, (longest_route_km / 2.0) ** 2 - (endpoint_distance_km / 2.0) ** 2))
    grid = sorted(set(_height_grid(h_max, cfg.mgdi_grid_steps)))
    pinned = len(grid) - 1  # +h_max is always the last grid value
    routes = [triangle_route(endpoint_distance_km, h) for h in grid]

    m = len(grid)
    table = [[0.0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            score = planar_pair_diversity(routes[i], routes[j])
            table[i][j] = table[j][i] = score

    free = [i for i in range(m) if i != pinned]
    best = 0.0
    for k in range(1, min(n_routes - 1, len(free)) + 1):
        for combo in itertools.combinations(free, k):
            idxs = sorted(combo + (pinned,))
            sub = [[table[a][b] for b in idxs] for a in idxs]
            value = _greedy_accumulate(sub)
            if value > best:
                best = value
    return best


def compression_ratio(ip_route_count: int, cluster_count: int) -> float:
    """Distinct IP-level routes divided by resulting cluster count."""
    if ip_route_count < 1 or cluster_count < 1:
        raise InvalidCounts("route and cluster counts must both be at least 1")
    if cluster_count > ip_route_count:
        raise InvalidCounts(
            f"cluster count ({cluster_count}) exceeds route count ({ip_route_count})"
        )
    return ip_route_count / cluster_count
