"""Corpus store: append-only record log, id->offset index, columnar side files.

Layout under store_dir/:
    records.ndjson   canonical tweet records, one per line, storage order
    index.tsv        tweet_id <TAB> byte_offset, storage order
    meta.json        counts, day span, ingest report
    columns/*.npy    fixed-width columns (ids, timestamps, parentage, flags)
    columns/*.txt    ragged columns (hashtags, urls, escaped text), one row per line

The columnar files exist so analytics stages can scan tens of millions of
records without re-parsing JSON; the record log stays the source of truth.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from typing import Iterator, Optional

import numpy as np

from .tweets import Tweet, day_of

PKIND_NONE = 0
PKIND_RETWEET = 1
PKIND_REPLY = 2

_PKIND_CODE = {None: PKIND_NONE, "retweet": PKIND_RETWEET, "reply": PKIND_REPLY}
_PKIND_NAME = {PKIND_RETWEET: "retweet", PKIND_REPLY: "reply"}

_CORE_COLUMNS = {
    "ids": np.uint64,
    "ts": np.int64,
    "day": np.int32,
    "parent": np.int64,        # -1 when no parent
    "pkind": np.uint8,
    "english": np.uint8,
    "synthetic": np.uint8,
    "uid": np.uint64,
    "verified": np.uint8,
    "has_coords": np.uint8,
    "lon": np.float64,
    "lat": np.float64,
}


def is_english(lang: str) -> bool:
    return lang == "en" or lang.startswith("en-")


def canonical_line(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":"), ensure_ascii=False, sort_keys=True)


def escape_cell(text: str) -> str:
    if "\\" in text or "\n" in text or "\r" in text:
        return text.replace("\\", "\\\\").replace("\n", "\\n").replace("\r", "\\r")
    return text


def unescape_cell(cell: str) -> str:
    if "\\" not in cell:
        return cell
    out = []
    i = 0
    while i < len(cell):
        ch = cell[i]
        if ch == "\\" and i + 1 < len(cell):
            nxt = cell[i + 1]
            out.append({"n": "\n", "r": "\r", "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


@dataclass
class IngestReport:
    """Counts for one ingest run; primary-record conservation laws:
    read = parsed + rejected_parse and parsed = stored + rejected_filter + deduped.
    Synthetic parents (materialized source posts) are tracked separately.
    """

    read: int = 0
    parsed: int = 0
    rejected_parse: int = 0
    rejected_filter: int = 0
    deduped: int = 0
    stored: int = 0
    synthetic_emitted: int = 0
    synthetic_stored: int = 0
    synthetic_deduped: int = 0

    @property
    def stored_total(self) -> int:
        return self.stored + self.synthetic_stored

    def merge(self, other: "IngestReport") -> "IngestReport":
        return IngestReport(*(getattr(self, f) + getattr(other, f)
                              for f in self.__dataclass_fields__))

    def validate(self) -> None:
        if self.read != self.parsed + self.rejected_parse:
            raise AssertionError(
                f"count conservation broken: read={self.read} != "
                f"parsed={self.parsed} + rejected_parse={self.rejected_parse}")
        if self.parsed != self.stored + self.rejected_filter + self.deduped:
            raise AssertionError(
                f"count conservation broken: parsed={self.parsed} != stored={self.stored} "
                f"+ rejected_filter={self.rejected_filter} + deduped={self.deduped}")
        if self.synthetic_emitted != self.synthetic_stored + self.synthetic_deduped:
            raise AssertionError("synthetic count conservation broken")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stored_total"] = self.stored_total
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "IngestReport":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})


class StoreWriter:
    """Single-writer builder for a corpus store; call add() in final storage
    order (the caller owns dedup), then finish()."""

    def __init__(self, store_dir: str):
        self.store_dir = store_dir
        os.makedirs(os.path.join(store_dir, "columns"), exist_ok=True)
        self._records = open(os.path.join(store_dir, "records.ndjson"), "wb")
        self._index = open(os.path.join(store_dir, "index.tsv"), "wt", encoding="utf-8")
        self._offset = 0
        self._cols: dict[str, list] = {name: [] for name in _CORE_COLUMNS}
        self._tags: list[str] = []
        self._urls: list[str] = []
        self._texts: list[str] = []

    def add(self, rec: dict, line: Optional[str] = None) -> None:
        if line is None:
            line = canonical_line(rec)
        data = line.encode("utf-8")
        self._records.write(data)
        self._records.write(b"\n")
        self._index.write(f"{rec['id']}\t{self._offset}\n")
        self._offset += len(data) + 1

        c = self._cols
        c["ids"].append(rec["id"])
        c["ts"].append(rec["ts"])
        c["day"].append(day_of(rec["ts"]))
        c["parent"].append(rec.get("par", -1))
        c["pkind"].append(_PKIND_CODE[rec.get("pk")])
        c["english"].append(1 if is_english(rec["lang"]) else 0)
        c["synthetic"].append(1 if rec.get("syn") else 0)
        c["uid"].append(rec["uid"])
        c["verified"].append(1 if rec.get("ver") else 0)
        has_coords = "lon" in rec
        c["has_coords"].append(1 if has_coords else 0)
        c["lon"].append(rec["lon"] if has_coords else 0.0)
        c["lat"].append(rec["lat"] if has_coords else 0.0)
        self._tags.append(" ".join(rec.get("tags", [])))
        self._urls.append("\t".join(rec.get("urls", [])))
        self._texts.append(escape_cell(rec["text"]))

    def finish(self, report: IngestReport) -> "CorpusStore":
        self._records.close()
        self._index.close()
        cols_dir = os.path.join(self.store_dir, "columns")
        for name, dtype in _CORE_COLUMNS.items():
            np.save(os.path.join(cols_dir, f"{name}.npy"),
                    np.asarray(self._cols[name], dtype=dtype))
        for fname, rows in (("tags.txt", self._tags),
                            ("urls.txt", self._urls),
                            ("text.txt", self._texts)):
            with open(os.path.join(cols_dir, fname), "wt", encoding="utf-8") as fh:
                for row in rows:
                    fh.write(row)
                    fh.write("\n")
        n = len(self._cols["ids"])
        days = self._cols["day"]
        meta = {
            "schema": 1,
            "n_records": n,
            "day_min": min(days) if days else None,
            "day_max": max(days) if days else None,
            "report": report.to_dict(),
        }
        with open(os.path.join(self.store_dir, "meta.json"), "wt", encoding="utf-8") as fh:
            json.dump(meta, fh, sort_keys=True, indent=1)
            fh.write("\n")
        return CorpusStore(self.store_dir)


class CorpusStore:
    """Read view over a finished store; all accessors cache lazily and the
    underlying files are immutable, so instances are safe to share."""

    def __init__(self, store_dir: str):
        self.store_dir = store_dir
        with open(os.path.join(store_dir, "meta.json"), "rt", encoding="utf-8") as fh:
            self.meta = json.load(fh)
        self.report = IngestReport.from_dict(self.meta["report"])
        self._core: dict[str, np.ndarray] = {}
        self._tags: Optional[list[str]] = None
        self._urls: Optional[list[str]] = None
        self._texts: Optional[list[str]] = None
        self._row_of: Optional[dict[int, int]] = None
        self._id_offset: Optional[dict[int, int]] = None

    def __len__(self) -> int:
        return self.meta["n_records"]

    @property
    def day_min(self) -> Optional[int]:
        return self.meta["day_min"]

    @property
    def day_max(self) -> Optional[int]:
        return self.meta["day_max"]

    def column(self, name: str) -> np.ndarray:
        if name not in self._core:
            path = os.path.join(self.store_dir, "columns", f"{name}.npy")
            self._core[name] = np.load(path)
        return self._core[name]

    def _ragged(self, fname: str) -> list[str]:
        path = os.path.join(self.store_dir, "columns", fname)
        with open(path, "rt", encoding="utf-8") as fh:
            content = fh.read()
        return content[:-1].split("\n") if content else []

    def tags_lines(self) -> list[str]:
        if self._tags is None:
            self._tags = self._ragged("tags.txt")
        return self._tags

    def urls_lines(self) -> list[str]:
        if self._urls is None:
            self._urls = self._ragged("urls.txt")
        return self._urls

    def text_lines(self) -> list[str]:
        """Escaped text column; use text_of() for decoded text."""
        if self._texts is None:
            self._texts = self._ragged("text.txt")
        return self._texts

    def tags_of(self, row: int) -> list[str]:
        cell = self.tags_lines()[row]
        return cell.split(" ") if cell else []

    def urls_of(self, row: int) -> list[str]:
        cell = self.urls_lines()[row]
        return cell.split("\t") if cell else []

    def text_of(self, row: int) -> str:
        return unescape_cell(self.text_lines()[row])

    def row_of(self) -> dict[int, int]:
        """tweet id -> row number in storage order."""
        if self._row_of is None:
            ids = self.column("ids")
            self._row_of = {int(t): i for i, t in enumerate(ids)}
        return self._row_of

    def iter_records(self) -> Iterator[dict]:
        path = os.path.join(self.store_dir, "records.ndjson")
        with open(path, "rt", encoding="utf-8") as fh:
            for line in fh:
                yield json.loads(line)

    def iter_tweets(self) -> Iterator[Tweet]:
        for rec in self.iter_records():
            yield Tweet.from_record(rec)

    def get_record(self, tweet_id: int) -> Optional[dict]:
        if self._id_offset is None:
            self._id_offset = {}
            with open(os.path.join(self.store_dir, "index.tsv"), "rt", encoding="utf-8") as fh:
                for line in fh:
                    tid, off = line.rstrip("\n").split("\t")
                    self._id_offset[int(tid)] = int(off)
        off = self._id_offset.get(tweet_id)
        if off is None:
            return None
        with open(os.path.join(self.store_dir, "records.ndjson"), "rb") as fh:
            fh.seek(off)
            return json.loads(fh.readline().decode("utf-8"))

    def get_tweet(self, tweet_id: int) -> Optional[Tweet]:
        rec = self.get_record(tweet_id)
        return Tweet.from_record(rec) if rec else None

    def parent_kind_name(self, code: int) -> Optional[str]:
        return _PKIND_NAME.get(code)
