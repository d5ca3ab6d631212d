"""Persistent JSON store of exact counts, keyed by (n, target, method).

The file holds ``{"schema": 1, "records": [...]}`` where each record is
``{"n", "kind": "shape"|"pattern", "target": [ints], "method", "count": "<decimal>"}``;
counts too long for a decimal string are stored as ``"0x..."`` hex.
Writes take a lock, re-read the file, merge, and replace it atomically.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Callable, Optional, Union

from filelock import FileLock

from .core import Partition, Permutation
from .enumeration import METHODS, CountRecord
from .errors import ValidationError

SCHEMA = 1
DEFAULT_PATH = "shape-avoid-cache.json"


def _key(n: int, target: Union[Partition, Permutation], method: str) -> tuple:
    if isinstance(target, Partition):
        return (n, "shape", target.parts, method)
    return (n, "pattern", target.word, method)


# int -> decimal str is capped near 4300 digits by default; longer counts go to hex
_DECIMAL_BITS = 13_000


def _encode_count(count: int) -> str:
    return str(count) if count.bit_length() < _DECIMAL_BITS else hex(count)


def _decode_count(text) -> int:
    if isinstance(text, str) and text.startswith("0x"):
        return int(text, 16)
    return int(text)


def record_to_json(rec: CountRecord) -> dict:
    n, kind, target, method = _key(rec.n, rec.target, rec.method)
    return {"n": n, "kind": kind, "target": list(target), "method": method,
            "count": _encode_count(rec.count)}


def record_from_json(obj: dict) -> CountRecord:
    try:
        kind = obj["kind"]
        if kind not in ("shape", "pattern"):
            raise ValidationError(f"unknown target kind {kind!r}")
        target = Partition(obj["target"]) if kind == "shape" else Permutation(obj["target"])
        return CountRecord(int(obj["n"]), target, _decode_count(obj["count"]), obj["method"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed cache record {obj!r}: {exc}") from None


class CountCache:
    def __init__(self, path: Union[str, os.PathLike] = DEFAULT_PATH):
        self.path = Path(path)
        self._lock = FileLock(str(self.path) + ".lock")

    def _load(self) -> dict:
        if not self.path.exists():
            return {}
        with open(self.path) as fh:
            data = json.load(fh)
        if data.get("schema") != SCHEMA:
            raise ValidationError(f"{self.path}: unsupported cache schema {data.get('schema')!r}")
        records = {}
        for obj in data.get("records", []):
            rec = record_from_json(obj)
            records[_key(rec.n, rec.target, rec.method)] = rec
        return records

    def get(self, n: int, target, method: str) -> Optional[CountRecord]:
        if method not in METHODS:
            raise ValidationError(f"unknown count method {method!r}")
        rec = self._load().get(_key(n, target, method))
        # keys embed the method, but a hand-edited file could still disagree
        if rec is not None and (rec.method != method or rec.n != n or rec.target != target):
            return None
        return rec

    def put(self, rec: CountRecord) -> None:
        self.put_many([rec])

    def put_many(self, recs: list[CountRecord]) -> None:
        if not recs:
            return
        with self._lock:
            records = self._load()
            for rec in recs:
                records[_key(rec.n, rec.target, rec.method)] = rec
            payload = {
                "schema": SCHEMA,
                "records": [record_to_json(r) for _, r in sorted(records.items(), key=lambda kv: repr(kv[0]))],
            }
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    json.dump(payload, fh, indent=1)
                os.replace(tmp, self.path)
            except BaseException:
                os.unlink(tmp)
                raise

    def fetch(
        self, n: int, target, method: str, compute: Callable[[], CountRecord]
    ) -> tuple[CountRecord, bool]:
        """Return (record, was_cached), computing and storing on a miss."""
        rec = self.get(n, target, method)
        if rec is not None:
            return rec, True
        rec = compute()
        self.put(rec)
        return rec, False

    def fetch_many(
        self, ns: list[int], target, method: str, compute: Callable[[list[int]], list[CountRecord]]
    ) -> list[tuple[CountRecord, bool]]:
        """Like :meth:`fetch` for several n, reading and writing the file once."""
        if method not in METHODS:
            raise ValidationError(f"unknown count method {method!r}")
        stored = self._load()
        hits = {n: stored.get(_key(n, target, method)) for n in ns}
        missing = [n for n in ns if hits[n] is None]
        fresh = {rec.n: rec for rec in compute(missing)} if missing else {}
        if set(fresh) != set(missing):
            raise ValidationError("batch computation returned the wrong set of n")
        self.put_many([fresh[n] for n in missing])
        return [(hits[n], True) if hits[n] is not None else (fresh[n], False) for n in ns]
