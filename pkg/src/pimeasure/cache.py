"""JSON-lines cache of exact terms, keyed by a hash of the producing parameters."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import gmpy2
from filelock import FileLock

log = logging.getLogger(__name__)

CACHE_FORMAT = 1
CACHE_FILE = "terms.jsonl"


def param_hash(family, n: int, s: int, v: int) -> str:
    """Content hash of everything that determines the exact term."""
    key = json.dumps({"family": family, "n": n, "s": s, "v": v, "format": CACHE_FORMAT}, sort_keys=True)
    return hashlib.sha256(key.encode()).hexdigest()[:32]


def _dec(x: int) -> str:
    # gmpy2 avoids both the interpreter's digit limit and quadratic conversion
    return gmpy2.mpz(x).digits(10)


def _int(text: str) -> int:
    if not isinstance(text, str):
        raise TypeError("integers are stored as decimal strings")
    return int(gmpy2.mpz(text, 10))


def _family_tag(family) -> str | list[int]:
    if family == "classic":
        return "classic"
    A, B = family
    return [int(A), int(B)]


@dataclass(frozen=True)
class TermCacheRecord:
    family: object  # "classic" or (A, B)
    n: int
    a: Fraction
    b: Fraction
    key: str

    def to_line(self) -> str:
        return json.dumps(
            {
                "family": _family_tag(self.family),
                "n": self.n,
                "a": [_dec(self.a.numerator), _dec(self.a.denominator)],
                "b": [_dec(self.b.numerator), _dec(self.b.denominator)],
                "hash": self.key,
            },
            sort_keys=True,
        )

    @classmethod
    def from_line(cls, line: str) -> "TermCacheRecord":
        d = json.loads(line)
        fam = d["family"]
        fam = "classic" if fam == "classic" else (int(fam[0]), int(fam[1]))
        a = Fraction(_int(d["a"][0]), _int(d["a"][1]))
        b = Fraction(_int(d["b"][0]), _int(d["b"][1]))
        return cls(fam, int(d["n"]), a, b, str(d["hash"]))


class TermCache:
    """Exact ``(a, b)`` terms on disk.

    Writers take a file lock and append one line; readers do not lock.
    Lines that fail to parse are skipped with a warning.  A record is used
    only if its stored hash equals the hash of the requested parameters.
    """

    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path = self.dir / CACHE_FILE
        self._lock = FileLock(str(self.path) + ".lock")
        self._index: dict[str, TermCacheRecord] = {}
        self._loaded_size = -1

    def _refresh(self):
        try:
            size = self.path.stat().st_size
        except FileNotFoundError:
            return
        if size == self._loaded_size:
            return
        index = {}
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = TermCacheRecord.from_line(line)
                except (ValueError, KeyError, TypeError, IndexError, ZeroDivisionError) as exc:
                    log.warning("skipping corrupted cache line %d in %s: %s", lineno, self.path, exc)
                    continue
                index[rec.key] = rec
        self._index = index
        self._loaded_size = size

    def get(self, family, n: int, s: int, v: int) -> TermCacheRecord | None:
        self._refresh()
        key = param_hash(_family_tag(family), n, s, v)
        rec = self._index.get(key)
        if rec is None:
            return None
        if rec.n != n or _family_tag(rec.family) != _family_tag(family):
            # hash collision or hand-edited record: treat as a miss
            return None
        return rec

    def put(self, family, n: int, s: int, v: int, a: Fraction, b: Fraction) -> TermCacheRecord:
        rec = TermCacheRecord(family, n, Fraction(a), Fraction(b), param_hash(_family_tag(family), n, s, v))
        line = rec.to_line() + "\n"
        with self._lock:
            try:
                before = self.path.stat().st_size
            except FileNotFoundError:
                before = 0
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
            # if nobody else appended since our last read, stay in sync without a reparse
            if before == max(self._loaded_size, 0):
                self._loaded_size = self.path.stat().st_size
        self._index[rec.key] = rec
        return rec

    def records(self) -> list[TermCacheRecord]:
        self._refresh()
        return list(self._index.values())
