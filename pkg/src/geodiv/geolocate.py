"""IP-to-location mapping from a CSV snapshot, geo-path construction and
the two-stage (single-IP-route, single-geo-path) pair filter.

Snapshot format: CSV rows ``cidr,lat,lon`` with an optional header line.
Lookups resolve overlapping prefixes longest-prefix-first.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from ipaddress import AddressValueError, IPv4Address, IPv4Network, NetmaskValueError, ip_network
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DuplicateCidr, ParseError
from .geodesy import Coordinate
from .traces import HopSequence, Pair, RouteSet, UNRESPONSIVE

# Text round-tripping of coordinates is absorbed by comparing at this
# precision (~0.1 m) when collapsing duplicates and deduplicating paths.
_EQUALITY_DECIMALS = 6

_HEADER = ("cidr", "lat", "lon")


class GeoDb:
    """Immutable longest-prefix-match table from IPv4 prefixes to coordinates."""

    def __init__(self, entries: Iterable[tuple[IPv4Network, Coordinate]]):
        by_plen: dict[int, dict[int, Coordinate]] = {}
        count = 0
        for network, location in entries:
            table = by_plen.setdefault(network.prefixlen, {})
            key = int(network.network_address)
            if key in table:
                raise DuplicateCidr(f"duplicate CIDR {network}")
            table[key] = location
            count += 1
        self._by_plen = by_plen
        self._plens_desc = sorted(by_plen, reverse=True)
        self._count = count

    def __len__(self) -> int:
        return self._count

    def lookup(self, ip: str | IPv4Address) -> Coordinate | None:
        """Location of the longest matching prefix, or None when uncovered."""
        ip_int = int(IPv4Address(ip))
        for plen in self._plens_desc:
            shift = 32 - plen
            key = (ip_int >> shift) << shift
            location = self._by_plen[plen].get(key)
            if location is not None:
                return location
        return None


def _parse_geodb_row(row: list[str], path: str | None, line: int) -> tuple[IPv4Network, Coordinate]:
    if len(row) != 3:
        raise ParseError(f"expected 3 columns, got {len(row)}", path=path, line=line)
    cidr_text, lat_text, lon_text = (col.strip() for col in row)
    try:
        network = ip_network(cidr_text, strict=False)
    except (ValueError, AddressValueError, NetmaskValueError) as exc:
        raise ParseError(f"invalid CIDR {cidr_text!r}: {exc}", path=path, line=line) from exc
    if not isinstance(network, IPv4Network):
        raise ParseError(f"not an IPv4 prefix: {cidr_text!r}", path=path, line=line)
    try:
        location = Coordinate(lat=float(lat_text), lon=float(lon_text))
    except ValueError as exc:
        raise ParseError(f"invalid coordinates: {exc}", path=path, line=line) from exc
    return network, location


def load_geodb(path: str | Path) -> GeoDb:
    """Load a CSV geolocation snapshot, rejecting duplicate identical CIDRs."""
    entries: list[tuple[IPv4Network, Coordinate]] = []
    seen: set[tuple[int, int]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        for line, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not col.strip() for col in row):
                continue
            if line == 1 and tuple(col.strip().lower() for col in row) == _HEADER:
                continue
            network, location = _parse_geodb_row(row, str(path), line)
            key = (network.prefixlen, int(network.network_address))
            if key in seen:
                raise DuplicateCidr(f"{path}:{line}: duplicate CIDR {network}")
            seen.add(key)
            entries.append((network, location))
    return GeoDb(entries)


def lookup_ip(db: GeoDb, ip: str | IPv4Address) -> Coordinate | None:
    return db.lookup(ip)


def _coord_key(c: Coordinate) -> tuple[float, float]:
    return (round(c.lat, _EQUALITY_DECIMALS), round(c.lon, _EQUALITY_DECIMALS))


@dataclass(frozen=True)
class GeoPath:
    """Localized route: coordinate sequence with no consecutive duplicates.

    ``origin_routes`` records the IP-level hop sequences that mapped onto
    this coordinate sequence.
    """

    nodes: tuple[Coordinate, ...]
    origin_routes: tuple[HopSequence, ...] = ()

    def __post_init__(self) -> None:
        if len(self.nodes) < 2:
            raise ValueError("a geo-path needs at least 2 nodes")
        for a, b in zip(self.nodes, self.nodes[1:]):
            if _coord_key(a) == _coord_key(b):
                raise ValueError("consecutive duplicate coordinates in geo-path")

    def sort_key(self) -> tuple[tuple[float, float], ...]:
        return tuple((n.lat, n.lon) for n in self.nodes)


def route_to_geopath(route: HopSequence, db: GeoDb) -> GeoPath | None:
    """Localize one IP route; returns None when fewer than 2 nodes survive.

    Unresponsive and unlocatable hops are dropped; consecutive hops at the
    same location collapse to a single node.
    """
    nodes: list[Coordinate] = []
    last_key: tuple[float, float] | None = None
    for hop in route:
        if hop == UNRESPONSIVE:
            continue
        location = db.lookup(hop)
        if location is None:
            continue
        key = _coord_key(location)
        if key == last_key:
            continue
        nodes.append(location)
        last_key = key
    if len(nodes) < 2:
        return None
    return GeoPath(nodes=tuple(nodes), origin_routes=(tuple(route),))


@dataclass(frozen=True)
class FilterStats:
    """Per-stage accounting for the endpoint-pair filter."""

    input_pairs: int
    removed_single_ip_route: int
    removed_single_geo_path: int

    @property
    def surviving_pairs(self) -> int:
        return self.input_pairs - self.removed_single_ip_route - self.removed_single_geo_path


def filter_pairs(
    route_sets: Mapping[Pair, RouteSet], db: GeoDb
) -> tuple[dict[Pair, tuple[GeoPath, ...]], FilterStats]:
    """Drop single-IP-route pairs, localize the rest, drop single-geo-path pairs.

    Stage two removes pairs left with fewer than 2 distinct coordinate
    sequences (pairs whose routes all localize identically, or cannot be
    localized at all). Survivors keep their distinct geo-paths in canonical
    (lexicographic coordinate) order, with origin routes merged per path.
    """
    kept: dict[Pair, tuple[GeoPath, ...]] = {}
    removed_stage1 = 0
    removed_stage2 = 0
    for pair in sorted(route_sets):
        route_set = route_sets[pair]
        if len(route_set.ip_routes) == 1:
            removed_stage1 += 1
            continue
        by_key: dict[tuple[tuple[float, float], ...], tuple[tuple[Coordinate, ...], list[HopSequence]]] = {}
        for route in route_set.ip_routes:
            geopath = route_to_geopath(route, db)
            if geopath is None:
                continue
            key = tuple(_coord_key(n) for n in geopath.nodes)
            if key in by_key:
                by_key[key][1].extend(geopath.origin_routes)
            else:
                by_key[key] = (geopath.nodes, list(geopath.origin_routes))
        distinct = [
            GeoPath(nodes=nodes, origin_routes=tuple(sorted(origins)))
            for nodes, origins in by_key.values()
        ]
        if len(distinct) < 2:
            removed_stage2 += 1
            continue
        kept[pair] = tuple(sorted(distinct, key=GeoPath.sort_key))
    stats = FilterStats(
        input_pairs=len(route_sets),
        removed_single_ip_route=removed_stage1,
        removed_single_geo_path=removed_stage2,
    )
    return kept, stats
