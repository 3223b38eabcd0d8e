"""Synthetic trace corpora with planted geographic structure.

Every generated endpoint pair has a known fate in the pipeline: dropped
for having a single IP-level route, dropped for having a single geo-path
(IP-alias copies of one coordinate sequence), or scored with a planted
cluster count. Scored pairs place their routes in well-separated lateral
"corridors" between the endpoints (inter-corridor gaps of hundreds of km,
intra-corridor spread well under the clustering threshold), so the
expected cluster count is unambiguous at the default 50 km threshold.

Route hop lists are decorated with unresponsive markers, unlocatable
addresses and coordinate-duplicate hops to exercise the localization
rules without disturbing the planted geometry.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from ipaddress import IPv4Address
from pathlib import Path
from typing import Sequence

KM_PER_DEG = math.pi * 6371.0 / 180.0

KIND_SINGLE_ROUTE = "single_route"
KIND_SINGLE_GEOPATH = "single_geopath"
KIND_SCORED = "scored"

# Lateral corridor centerline offsets (km); any two differ by >= 300 km.
_CORRIDOR_OFFSETS = (0.0, 300.0, -300.0, 600.0)
# Lateral slots for route variants inside one corridor (km).
_VARIANT_SLOTS = (-10.0, 0.0, 10.0)

_DECOY_ROW = "10.0.0.0/8,0.0,0.0"


@dataclass(frozen=True)
class PlantedPair:
    """Ground truth for one generated endpoint pair."""

    src: str
    dst: str
    kind: str
    ip_route_count: int
    geo_path_count: int
    cluster_count: int


@dataclass
class SyntheticCorpus:
    trace_lines: list[str]
    geodb_lines: list[str]
    planted: list[PlantedPair]

    @property
    def line_count(self) -> int:
        return len(self.trace_lines)

    def write(self, traces_path: str | Path, geodb_path: str | Path) -> None:
        Path(traces_path).write_text("\n".join(self.trace_lines) + "\n", encoding="utf-8")
        Path(geodb_path).write_text("\n".join(self.geodb_lines) + "\n", encoding="utf-8")


class _Addresses:
    """Sequential address allocation: located hops from 10/8 (each with a /32
    snapshot row), endpoints from 172.16/12, unlocatable hops from
    198.51.100/24 (never in the snapshot)."""

    def __init__(self) -> None:
        self._hop = int(IPv4Address("10.0.0.1"))
        self._endpoint = int(IPv4Address("172.16.0.1"))
        self._dark = 0

    def hop(self) -> str:
        value = self._hop
        self._hop += 1
        if value >= int(IPv4Address("11.0.0.0")):
            raise RuntimeError("hop address space exhausted")
        return str(IPv4Address(value))

    def endpoint(self) -> str:
        value = self._endpoint
        self._endpoint += 1
        return str(IPv4Address(value))

    def dark(self) -> str:
        value = int(IPv4Address("198.51.100.1")) + (self._dark % 250)
        self._dark += 1
        return str(IPv4Address(value))


@dataclass(frozen=True)
class _Frame:
    """Local tangent frame: x runs from src to dst, y is lateral (km)."""

    lat0: float
    lon0: float
    cos_theta: float
    sin_theta: float
    cos_ref: float

    def to_latlon(self, x_km: float, y_km: float) -> tuple[float, float]:
        east = x_km * self.cos_theta - y_km * self.sin_theta
        north = x_km * self.sin_theta + y_km * self.cos_theta
        lat = self.lat0 + north / KM_PER_DEG
        lon = self.lon0 + east / (KM_PER_DEG * self.cos_ref)
        return lat, lon


def _make_frame(rng: random.Random) -> tuple[_Frame, float]:
    lat0 = rng.uniform(-45.0, 45.0)
    lon0 = rng.uniform(-150.0, 150.0)
    length = rng.uniform(900.0, 2400.0)
    while True:
        theta = rng.uniform(0.0, 2.0 * math.pi)
        reach = (abs(math.sin(theta)) * length + 700.0) / KM_PER_DEG
        if abs(lat0) + reach <= 60.0:
            break
    lat_mid = lat0 + math.sin(theta) * (length / 2.0) / KM_PER_DEG
    frame = _Frame(
        lat0=lat0,
        lon0=lon0,
        cos_theta=math.cos(theta),
        sin_theta=math.sin(theta),
        cos_ref=math.cos(math.radians(lat_mid)),
    )
    return frame, length


class _CorpusBuilder:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.addresses = _Addresses()
        self.records: list[dict] = []
        self.geodb_rows: list[str] = [_DECOY_ROW]
        self.planted: list[PlantedPair] = []
        self.line_count = 0

    def _located_hop(self, lat: float, lon: float) -> str:
        ip = self.addresses.hop()
        self.geodb_rows.append(f"{ip}/32,{lat!r},{lon!r}")
        return ip

    def _route_hops(self, coords: Sequence[tuple[float, float]]) -> list[str]:
        """Fresh hop addresses for one route over the given coordinates,
        with occasional unlocatable and coordinate-duplicate decorations."""
        rng = self.rng
        hops = [self._located_hop(lat, lon) for lat, lon in coords]
        if rng.random() < 0.15:
            hops.insert(rng.randint(0, len(hops)), self.addresses.dark())
        if rng.random() < 0.15:
            # A second address at an existing hop's location, right next to
            # it: collapses to one node during localization.
            i = rng.randrange(len(coords))
            lat, lon = coords[i]
            dup = self._located_hop(lat, lon)
            hops.insert(hops.index(self._find_located(hops, coords, i)) + 1, dup)
        return hops

    @staticmethod
    def _find_located(hops: list[str], coords: Sequence[tuple[float, float]], index: int) -> str:
        count = -1
        for hop in hops:
            if hop.startswith("10."):
                count += 1
                if count == index:
                    return hop
        raise AssertionError("located hop not found")

    def _emit_lines(self, src: str, dst: str, routes: Sequence[list[str]], repeats: tuple[int, int]) -> None:
        rng = self.rng
        for route in routes:
            for _ in range(rng.randint(*repeats)):
                hops = list(route)
                if rng.random() < 0.25:
                    hops.insert(rng.randint(0, len(hops)), "*")
                self.records.append({"src": src, "dst": dst, "hops": hops})
                self.line_count += 1

    def _corridor_coords(
        self, frame: _Frame, length: float, offset: float, ts: Sequence[float], lateral: Sequence[float]
    ) -> list[tuple[float, float]]:
        coords = [frame.to_latlon(0.0, 0.0)]
        for t, extra in zip(ts, lateral):
            x = t * length
            y = offset * math.sin(math.pi * t) + extra
            coords.append(frame.to_latlon(x, y))
        coords.append(frame.to_latlon(length, 0.0))
        return coords

    def add_pair(self, kind: str, cluster_weights: Sequence[float], repeats: tuple[int, int]) -> None:
        rng = self.rng
        src = self.addresses.endpoint()
        dst = self.addresses.endpoint()
        frame, length = _make_frame(rng)

        m = rng.randint(3, 4)
        base = [0.18 + (0.82 - 0.18) * i / (m - 1) for i in range(m)]
        ts = [t + rng.uniform(-0.02, 0.02) for t in base]

        if kind == KIND_SINGLE_ROUTE:
            offset = rng.choice(_CORRIDOR_OFFSETS)
            coords = self._corridor_coords(frame, length, offset, ts, [0.0] * m)
            routes = [self._route_hops(coords)]
            planted = PlantedPair(src, dst, kind, 1, 1, 1)
        elif kind == KIND_SINGLE_GEOPATH:
            offset = rng.choice(_CORRIDOR_OFFSETS)
            coords = self._corridor_coords(frame, length, offset, ts, [0.0] * m)
            aliases = rng.randint(2, 4)
            routes = [self._route_hops(coords) for _ in range(aliases)]
            planted = PlantedPair(src, dst, kind, aliases, 1, 1)
        elif kind == KIND_SCORED:
            k = rng.choices((1, 2, 3), weights=cluster_weights)[0]
            offsets = rng.sample(_CORRIDOR_OFFSETS, k)
            routes = []
            geo_paths = 0
            for j, offset in enumerate(offsets):
                variants = rng.randint(2 if k == 1 and j == 0 else 1, len(_VARIANT_SLOTS))
                slots = rng.sample(_VARIANT_SLOTS, variants)
                for slot in slots:
                    lateral = [slot + rng.uniform(-2.0, 2.0) for _ in range(m)]
                    coords = self._corridor_coords(frame, length, offset, ts, lateral)
                    geo_paths += 1
                    for _ in range(rng.randint(1, 2)):
                        routes.append(self._route_hops(coords))
            planted = PlantedPair(src, dst, kind, len(routes), geo_paths, k)
        else:
            raise ValueError(f"unknown pair kind: {kind}")

        self._emit_lines(src, dst, routes, repeats)
        self.planted.append(planted)

    def build(self) -> SyntheticCorpus:
        self.rng.shuffle(self.records)
        lines = [json.dumps(record) for record in self.records]
        geodb = ["cidr,lat,lon"] + self.geodb_rows
        return SyntheticCorpus(trace_lines=lines, geodb_lines=geodb, planted=self.planted)


def generate_corpus(
    n_pairs: int | None = None,
    seed: int = 0,
    *,
    min_lines: int | None = None,
    kind_weights: tuple[float, float, float] = (0.4, 0.2, 0.4),
    cluster_weights: tuple[float, float, float] = (0.35, 0.4, 0.25),
    repeats: tuple[int, int] = (1, 3),
) -> SyntheticCorpus:
    """Generate a corpus with ``n_pairs`` pairs and/or at least ``min_lines``
    trace lines; fully deterministic for a given seed and parameter set.

    ``kind_weights`` orders (single_route, single_geopath, scored);
    ``cluster_weights`` gives the planted cluster-count distribution
    (1, 2, 3) for scored pairs.
    """
    if n_pairs is None and min_lines is None:
        raise ValueError("need n_pairs or min_lines")
    builder = _CorpusBuilder(seed)
    kinds = (KIND_SINGLE_ROUTE, KIND_SINGLE_GEOPATH, KIND_SCORED)
    while True:
        done_pairs = n_pairs is None or len(builder.planted) >= n_pairs
        done_lines = min_lines is None or builder.line_count >= min_lines
        if done_pairs and done_lines:
            break
        kind = builder.rng.choices(kinds, weights=kind_weights)[0]
        builder.add_pair(kind, cluster_weights, repeats)
    return builder.build()
