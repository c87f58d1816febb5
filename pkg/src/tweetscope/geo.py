"""Country/state resolution from place metadata or free-text profile locations.

Resolution priority: tweet place metadata, then gazetteer matching over the
user-reported profile location, then bare coordinates (which carry lat/lon
but cannot name a country without polygon data, see module non-goals).
"""

from __future__ import annotations

import csv
import json
import os
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadRow, DuplicatePattern
from .store import CorpusStore
from .tweets import Tweet

METHOD_NONE = 0
METHOD_COORDINATES = 1
METHOD_PLACE = 2
METHOD_PROFILE = 3

METHOD_NAMES = {
    METHOD_NONE: "none",
    METHOD_COORDINATES: "coordinates",
    METHOD_PLACE: "place",
    METHOD_PROFILE: "profile",
}

_PUNCT_RE = re.compile(r"[^\w\s]+", re.UNICODE)
_PUNCT_KEEP_COMMA_RE = re.compile(r"[^\w\s,]+", re.UNICODE)
_WS_RE = re.compile(r"\s+")


def normalize_pattern(s: str) -> str:
    """Lowercase, strip all punctuation, collapse whitespace. Used for
    gazetteer patterns and individual location tokens."""
    s = _PUNCT_RE.sub(" ", s.lower())
    return _WS_RE.sub(" ", s).strip()


def normalize_location(s: str) -> str:
    """Like normalize_pattern but commas survive: they delimit the tokens
    that are matched against the gazetteer, so resolve(normalize(s))
    equals resolve(s)."""
    s = _PUNCT_KEEP_COMMA_RE.sub(" ", s.lower())
    return _WS_RE.sub(" ", s).strip()


def location_tokens(s: str) -> list[str]:
    """Comma-delimited, pattern-normalized tokens of a location string."""
    return [t for t in (normalize_pattern(part) for part in s.split(",")) if t]


@dataclass(frozen=True)
class GazetteerEntry:
    pattern: str
    country: str
    us_state: Optional[str]
    priority: int


@dataclass(frozen=True)
class GeoResolution:
    country: Optional[str] = None
    us_state: Optional[str] = None
    method: int = METHOD_NONE
    lat: Optional[float] = None
    lon: Optional[float] = None

    @property
    def method_name(self) -> str:
        return METHOD_NAMES[self.method]


class Gazetteer:
    def __init__(self, entries: list[GazetteerEntry]):
        # Sorted view kept for inspection; matching uses the pattern dict.
        self.entries = sorted(entries,
                              key=lambda e: (-e.priority, -len(e.pattern), e.pattern))
        self.by_pattern = {e.pattern: e for e in entries}

    def __len__(self) -> int:
        return len(self.entries)

    def match(self, normalized: str) -> Optional[GazetteerEntry]:
        return self.by_pattern.get(normalized)


def load_gazetteer(path: str) -> Gazetteer:
    """Load pattern,country,us_state,priority rows; duplicate patterns and
    malformed rows are errors."""
    entries: list[GazetteerEntry] = []
    seen: set[str] = set()
    with open(path, "rt", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != \
                ["pattern", "country", "us_state", "priority"]:
            raise BadRow(f"{path}: expected header pattern,country,us_state,priority")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise BadRow(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            pattern = normalize_pattern(row[0])
            country = row[1].strip().upper()
            us_state = row[2].strip() or None
            if not pattern or not country:
                raise BadRow(f"{path}:{lineno}: pattern and country are required")
            if us_state and country != "US":
                raise BadRow(f"{path}:{lineno}: us_state given for non-US country")
            try:
                priority = int(row[3])
            except ValueError:
                raise BadRow(f"{path}:{lineno}: priority must be an integer") from None
            if pattern in seen:
                raise DuplicatePattern(f"{path}:{lineno}: duplicate pattern {pattern!r}")
            seen.add(pattern)
            entries.append(GazetteerEntry(pattern, country, us_state, priority))
    return Gazetteer(entries)


def _best_match(gaz: Gazetteer, candidates: list[str]) -> Optional[GazetteerEntry]:
    """candidates are normalized strings in try-order (earlier = preferred);
    the winner has the highest priority, then the longest pattern, then the
    earliest try position."""
    best: Optional[tuple[int, int, int]] = None
    best_entry: Optional[GazetteerEntry] = None
    for pos, cand in enumerate(candidates):
        entry = gaz.match(cand)
        if entry is None:
            continue
        key = (-entry.priority, -len(entry.pattern), pos)
        if best is None or key < best:
            best = key
            best_entry = entry
    return best_entry


def resolve_geo(tweet: Tweet, gaz: Gazetteer) -> GeoResolution:
    """Resolve one tweet; never raises — unresolvable means method=none."""
    lat = lon = None
    if tweet.coordinates is not None:
        lon, lat = tweet.coordinates

    if tweet.place_country:
        country = tweet.place_country.strip().upper()
        us_state = None
        if country == "US" and tweet.place_name:
            for tok in reversed(location_tokens(tweet.place_name)):
                entry = gaz.match(tok)
                if entry is not None and entry.us_state and entry.country == "US":
                    us_state = entry.us_state
                    break
        return GeoResolution(country, us_state, METHOD_PLACE, lat, lon)

    if tweet.user.profile_location:
        candidates = list(reversed(location_tokens(tweet.user.profile_location)))
        whole = normalize_pattern(tweet.user.profile_location)
        if whole and whole not in candidates:
            candidates.append(whole)
        entry = _best_match(gaz, candidates)
        if entry is not None:
            us_state = entry.us_state if entry.country == "US" else None
            return GeoResolution(entry.country, us_state, METHOD_PROFILE, lat, lon)

    if tweet.coordinates is not None:
        return GeoResolution(None, None, METHOD_COORDINATES, lat, lon)
    return GeoResolution()


class GeoIndex:
    """Per-row resolutions aligned with a corpus store's storage order."""

    def __init__(self, ids: np.ndarray, methods: np.ndarray,
                 countries: list[Optional[str]], us_states: list[Optional[str]]):
        self.ids = ids
        self.methods = methods
        self.countries = countries
        self.us_states = us_states

    def __len__(self) -> int:
        return len(self.countries)

    def method_codes(self) -> np.ndarray:
        return self.methods

    def resolution_of(self, row: int) -> GeoResolution:
        return GeoResolution(self.countries[row], self.us_states[row],
                             int(self.methods[row]))

    def save(self, path: str) -> None:
        with open(path, "wt", encoding="utf-8") as fh:
            for i in range(len(self.countries)):
                rec: dict = {"id": int(self.ids[i]), "m": int(self.methods[i])}
                if self.countries[i]:
                    rec["c"] = self.countries[i]
                if self.us_states[i]:
                    rec["s"] = self.us_states[i]
                fh.write(json.dumps(rec, separators=(",", ":"), sort_keys=True))
                fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "GeoIndex":
        ids: list[int] = []
        methods: list[int] = []
        countries: list[Optional[str]] = []
        us_states: list[Optional[str]] = []
        with open(path, "rt", encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                ids.append(rec["id"])
                methods.append(rec["m"])
                countries.append(rec.get("c"))
                us_states.append(rec.get("s"))
        return cls(np.asarray(ids, dtype=np.uint64),
                   np.asarray(methods, dtype=np.uint8), countries, us_states)


def build_geo_index(store: CorpusStore, gaz: Gazetteer) -> GeoIndex:
    n = len(store)
    methods = np.zeros(n, dtype=np.uint8)
    countries: list[Optional[str]] = [None] * n
    us_states: list[Optional[str]] = [None] * n
    for row, tweet in enumerate(store.iter_tweets()):
        res = resolve_geo(tweet, gaz)
        methods[row] = res.method
        countries[row] = res.country
        us_states[row] = res.us_state
    return GeoIndex(store.column("ids"), methods, countries, us_states)


def load_centroids(path: str) -> dict[tuple[str, Optional[str]], tuple[float, float]]:
    """country,us_state,lat,lon rows -> {(country, state or None): (lat, lon)}."""
    out: dict[tuple[str, Optional[str]], tuple[float, float]] = {}
    with open(path, "rt", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != \
                ["country", "us_state", "lat", "lon"]:
            raise BadRow(f"{path}: expected header country,us_state,lat,lon")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise BadRow(f"{path}:{lineno}: expected 4 columns")
            country = row[0].strip().upper()
            state = row[1].strip() or None
            try:
                lat, lon = float(row[2]), float(row[3])
            except ValueError:
                raise BadRow(f"{path}:{lineno}: lat/lon must be numeric") from None
            out[(country, state)] = (lat, lon)
    return out


def geo_index_path(out_dir: str) -> str:
    return os.path.join(out_dir, "geo_index.ndjson")
