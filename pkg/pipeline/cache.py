"""Persistent state for the pipeline: the subgroup-order cache and cascade records."""
from __future__ import annotations

import csv
import json
import logging
import struct
import zlib
from pathlib import Path
from typing import Dict, Tuple

from route_invariants.cascade import CascadeRecord, record_from_dict, record_to_dict, scan_rows
from route_invariants.errors import CacheCorruptError, CacheVersionError
from route_invariants.modular import OrderCache

logger = logging.getLogger(__name__)

MAGIC = b"RIOC"
FORMAT_VERSION = 1
_HEADER = struct.Struct(">4sHI")
_ENTRY = struct.Struct(">IIH")
_TRAILER = struct.Struct(">I")


def encode_orders(cache: OrderCache) -> bytes:
    items = cache.items()
    parts = [_HEADER.pack(MAGIC, FORMAT_VERSION, len(items))]
    for (strands, modulus), order in items:
        digits = str(order).encode("ascii")
        parts.append(_ENTRY.pack(strands, modulus, len(digits)))
        parts.append(digits)
    body = b"".join(parts)
    return body + _TRAILER.pack(zlib.crc32(body))


def decode_orders(blob: bytes, source: str = "<bytes>") -> OrderCache:
    if len(blob) < _HEADER.size + _TRAILER.size:
        raise CacheCorruptError(f"{source}: truncated order cache")
    magic, version, count = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise CacheCorruptError(f"{source}: not an order cache (bad magic {magic!r})")
    if version != FORMAT_VERSION:
        raise CacheVersionError(
            f"{source}: order cache format {version} is not {FORMAT_VERSION}; delete the file to rebuild it"
        )
    body, (crc,) = blob[: -_TRAILER.size], _TRAILER.unpack(blob[-_TRAILER.size :])
    if zlib.crc32(body) != crc:
        raise CacheCorruptError(f"{source}: checksum mismatch")
    entries: Dict[Tuple[int, int], int] = {}
    offset = _HEADER.size
    try:
        for _ in range(count):
            strands, modulus, width = _ENTRY.unpack_from(body, offset)
            offset += _ENTRY.size
            digits = body[offset : offset + width]
            if len(digits) != width:
                raise CacheCorruptError(f"{source}: truncated entry")
            offset += width
            entries[(strands, modulus)] = int(digits.decode("ascii"))
    except (struct.error, ValueError) as exc:
        raise CacheCorruptError(f"{source}: malformed entry ({exc})") from exc
    if offset != len(body):
        raise CacheCorruptError(f"{source}: trailing bytes after {count} entries")
    return OrderCache(entries)


class OrderCacheFile:
    """Binary ``orders.bin`` holding ``(k, N) → |image of B_k mod N|``."""

    def __init__(self, path: Path) -> None:
        self.path = path

    def load(self) -> OrderCache:
        if not self.path.exists():
            logger.debug("no order cache at %s; starting cold", self.path)
            return OrderCache()
        return decode_orders(self.path.read_bytes(), source=str(self.path))

    def save(self, cache: OrderCache) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(".tmp")
        tmp.write_bytes(encode_orders(cache))
        tmp.replace(self.path)


def dump_json(data: object) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def load_record(path: Path) -> CascadeRecord:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CacheCorruptError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise CacheCorruptError(f"{path}: a cascade record must be a JSON object")
    return record_from_dict(data)


def save_record(record: CascadeRecord, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(record_to_dict(record)), encoding="utf-8")
    return path


SCAN_COLUMNS = ["stage", "period", "s", "a", "b", "gap", "ratio"]


def _cell(value: object) -> object:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else value


def write_scan_table(record: CascadeRecord, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=SCAN_COLUMNS)
        writer.writeheader()
        for row in scan_rows(record):
            writer.writerow({k: _cell(v) for k, v in row.items()})
    return path


__all__ = [
    "FORMAT_VERSION",
    "MAGIC",
    "OrderCacheFile",
    "SCAN_COLUMNS",
    "decode_orders",
    "dump_json",
    "encode_orders",
    "load_record",
    "save_record",
    "write_scan_table",
]
