import csv
import struct

import pytest

from pipeline.cache import (
    FORMAT_VERSION,
    SCAN_COLUMNS,
    OrderCacheFile,
    decode_orders,
    encode_orders,
    load_record,
    save_record,
    write_scan_table,
)
from route_invariants.cascade import record_digest
from route_invariants.errors import CacheCorruptError, CacheVersionError
from route_invariants.modular import OrderCache


def test_order_cache_file_round_trip(tmp_path):
    store = OrderCacheFile(tmp_path / "state" / "orders.bin")
    cache = OrderCache({(2, 2): 2, (3, 3): 10 ** 40, (7, 2): 5040})
    store.save(cache)
    assert store.load() == cache
    assert not (tmp_path / "state" / "orders.tmp").exists()


def test_missing_file_is_a_cold_start(tmp_path):
    cache = OrderCacheFile(tmp_path / "orders.bin").load()
    assert len(cache) == 0


def test_version_bump_is_reported(tmp_path):
    blob = bytearray(encode_orders(OrderCache({(2, 2): 2})))
    struct.pack_into(">H", blob, 4, FORMAT_VERSION + 1)
    with pytest.raises(CacheVersionError) as excinfo:
        decode_orders(bytes(blob), source="orders.bin")
    assert "delete the file" in str(excinfo.value)


def test_corruption_fails_loudly(tmp_path):
    blob = bytearray(encode_orders(OrderCache({(2, 3): 24, (3, 2): 6})))
    blob[12] ^= 0xFF
    path = tmp_path / "orders.bin"
    path.write_bytes(bytes(blob))
    with pytest.raises(CacheCorruptError):
        OrderCacheFile(path).load()

    with pytest.raises(CacheCorruptError):
        decode_orders(b"RIOC")
    with pytest.raises(CacheCorruptError):
        decode_orders(b"XXXX" + encode_orders(OrderCache())[4:])


def test_load_record_rejects_garbage(tmp_path):
    path = tmp_path / "record.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(CacheCorruptError):
        load_record(path)
    path.write_text("[]", encoding="utf-8")
    with pytest.raises(CacheCorruptError):
        load_record(path)


def test_scan_table(tmp_path, record):
    out = write_scan_table(record, tmp_path / "scan.csv")
    with out.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert list(rows[0]) == SCAN_COLUMNS
    assert len(rows) == 1
    assert rows[0]["period"] == "1"
    assert rows[0]["gap"] == ""
    assert float(rows[0]["a"]) == pytest.approx(1.2675)


def test_save_record_creates_parents(tmp_path, record):
    path = save_record(record, tmp_path / "a" / "b" / "rec.json")
    assert load_record(path).braids == record.braids
    assert record_digest(load_record(path)) == record_digest(record)
