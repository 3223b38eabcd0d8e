"""Traceroute record parsing and per-endpoint-pair grouping.

The interchange format is JSON lines: one object per line with keys
``src`` (IPv4 string), ``dst`` (IPv4 string) and ``hops`` (array of IPv4
strings, ``"*"`` for an unresponsive hop). Unknown keys are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from ipaddress import AddressValueError, IPv4Address
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InvalidAddress, ParseError

UNRESPONSIVE = "*"

Pair = tuple[str, str]
HopSequence = tuple[str, ...]


@dataclass(frozen=True)
class TraceRecord:
    """One traceroute output: endpoints plus the ordered hop list as measured."""

    src: str
    dst: str
    hops: HopSequence


@dataclass(frozen=True)
class RouteSet:
    """Distinct IP-level routes observed for one (src, dst) pair.

    Unresponsive markers are stripped before deduplication, so two
    measurements differing only in where responses were lost count as the
    same IP-level route.
    """

    pair: Pair
    ip_routes: tuple[HopSequence, ...]


def _check_address(value: object, field: str, *, path: str | None, line: int | None) -> str:
    if not isinstance(value, str):
        raise ParseError(f"field {field!r} must be a string", path=path, line=line)
    try:
        IPv4Address(value)
    except AddressValueError as exc:
        raise InvalidAddress(f"field {field!r}: {exc}", path=path, line=line) from exc
    return value


def parse_trace_line(line: str, *, path: str | None = None, line_number: int | None = None) -> TraceRecord:
    """Parse one JSONL trace record, keeping hop order and unresponsive markers."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=line_number) from exc
    if not isinstance(obj, Mapping):
        raise ParseError("trace record must be a JSON object", path=path, line=line_number)
    for key in ("src", "dst", "hops"):
        if key not in obj:
            raise ParseError(f"missing key {key!r}", path=path, line=line_number)
    src = _check_address(obj["src"], "src", path=path, line=line_number)
    dst = _check_address(obj["dst"], "dst", path=path, line=line_number)
    raw_hops = obj["hops"]
    if not isinstance(raw_hops, list):
        raise ParseError("field 'hops' must be an array", path=path, line=line_number)
    hops = []
    for i, hop in enumerate(raw_hops):
        if hop == UNRESPONSIVE:
            hops.append(UNRESPONSIVE)
            continue
        hops.append(_check_address(hop, f"hops[{i}]", path=path, line=line_number))
    return TraceRecord(src=src, dst=dst, hops=tuple(hops))


def parse_trace_file(path: str | Path) -> list[TraceRecord]:
    """Parse a JSONL trace file; blank lines are skipped."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            records.append(parse_trace_line(line, path=str(path), line_number=number))
    return records


def _strip_markers(hops: Sequence[str]) -> HopSequence:
    return tuple(h for h in hops if h != UNRESPONSIVE)


def group_by_pair(records: Iterable[TraceRecord]) -> dict[Pair, RouteSet]:
    """Group records by (src, dst) and deduplicate their IP-level routes.

    The result is keyed in lexicographic pair order and each route set holds
    its distinct marker-stripped hop sequences in lexicographic order, so
    grouping is insensitive to input order.
    """
    routes: dict[Pair, set[HopSequence]] = {}
    for record in records:
        pair = (record.src, record.dst)
        routes.setdefault(pair, set()).add(_strip_markers(record.hops))
    return {
        pair: RouteSet(pair=pair, ip_routes=tuple(sorted(routes[pair])))
        for pair in sorted(routes)
    }
