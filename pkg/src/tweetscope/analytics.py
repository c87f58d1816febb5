"""Misinformation aggregates: volume series, source breakdown, engagement
ratios, and TF-IDF hashtag narratives per category."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import CATEGORIES, OTHERS
from .graph import CascadeSet
from .tweets import day_str


@dataclass
class VolumeSeries:
    category: str
    start_day: int                      # UTC day index of points[0]
    counts: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "points": [{"day": day_str(self.start_day + i), "count": c}
                       for i, c in enumerate(self.counts)],
        }


def misinfo_volume_series(cascades: CascadeSet,
                          day_range: Optional[tuple[int, int]] = None,
                          ) -> list[VolumeSeries]:
    """Daily source-tweet counts per category, zero-filled over the range.

    A root carrying k labels increments all k series (multi-label roots are
    counted in each of their categories).
    """
    store = cascades.store
    if day_range is None:
        lo = store.day_min if store.day_min is not None else 0
        hi = store.day_max if store.day_max is not None else lo
        day_range = (lo, hi)
    lo, hi = day_range
    n_days = max(hi - lo + 1, 1)
    days = store.column("day")
    out = [VolumeSeries(cat, lo, [0] * n_days) for cat in CATEGORIES]
    bits = cascades.category_bits
    for i in np.nonzero(bits)[0].tolist():
        day = int(days[cascades.root_rows[i]])
        if not lo <= day <= hi:
            continue
        b = int(bits[i])
        for j, cat in enumerate(CATEGORIES):
            if b & (1 << j):
                out[j].counts[day - lo] += 1
    return out


def source_breakdown(cascades: CascadeSet, top_n: int = 25) -> list[tuple[str, int]]:
    """Most-linked catalog domains over cascade roots; each matched domain
    counts once per root. Ties break lexicographically."""
    counts: Counter[str] = Counter()
    for domains in cascades.matched_domains.values():
        counts.update(domains)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n]


def relative_volume(cascades: CascadeSet) -> dict[str, dict]:
    """Source vs response volume per category plus the Others bucket.

    n_responses is the sum of (size - 1) over the category's cascades;
    response_ratio is 0 (flagged) when a category has no cascades.
    """
    sizes = cascades.sizes()
    bits = cascades.category_bits
    out: dict[str, dict] = {}
    for j, cat in enumerate(CATEGORIES + (OTHERS,)):
        if cat == OTHERS:
            mask = bits == 0
        else:
            mask = (bits & (1 << j)) != 0
        n_sources = int(mask.sum())
        n_responses = int((sizes[mask] - 1).sum())
        out[cat] = {
            "n_sources": n_sources,
            "n_responses": n_responses,
            "response_ratio": (n_responses / n_sources) if n_sources else 0.0,
            "empty": n_sources == 0,
        }
    return out


@dataclass
class ScoredHashtag:
    hashtag: str
    tf: int
    idf: float
    score: float

    def to_dict(self) -> dict:
        return {"hashtag": self.hashtag, "tf": self.tf,
                "idf": self.idf, "score": self.score}


@dataclass
class CategoryScoreTable:
    """Per-category hashtag TF-IDF rows, score-descending (hashtag breaks
    ties); distinctive lists are filled by distinctive_hashtags()."""

    ranked: dict[str, list[ScoredHashtag]] = field(default_factory=dict)
    distinctive: dict[str, list[str]] = field(default_factory=dict)


def smoothed_idf(df: int, n_docs: int) -> float:
    return math.log((1 + n_docs) / (1 + df)) + 1.0


def hashtag_tfidf(cascades: CascadeSet) -> CategoryScoreTable:
    """TF-IDF of root hashtags with one document per category.

    tf(h, c) is the raw count of h over category c's root tweets; df(h) is
    the number of category documents containing h; idf uses the smoothed
    form ln((1 + C) / (1 + df)) + 1 so cross-category hashtags keep a
    nonzero score.
    """
    store = cascades.store
    tags_lines = store.tags_lines()
    tf: dict[str, Counter] = {cat: Counter() for cat in CATEGORIES}
    bits = cascades.category_bits
    for i in np.nonzero(bits)[0].tolist():
        cell = tags_lines[int(cascades.root_rows[i])]
        if not cell:
            continue
        tags = cell.split(" ")
        b = int(bits[i])
        for j, cat in enumerate(CATEGORIES):
            if b & (1 << j):
                tf[cat].update(tags)

    df: Counter[str] = Counter()
    for cat in CATEGORIES:
        df.update(tf[cat].keys())

    table = CategoryScoreTable()
    n_docs = len(CATEGORIES)
    for cat in CATEGORIES:
        rows = [
            ScoredHashtag(h, count, smoothed_idf(df[h], n_docs),
                          count * smoothed_idf(df[h], n_docs))
            for h, count in tf[cat].items()
        ]
        rows.sort(key=lambda r: (-r.score, r.hashtag))
        table.ranked[cat] = rows
    return table


def distinctive_hashtags(table: CategoryScoreTable, k: int = 20,
                         exclusion_depth: int = 10) -> dict[str, list[str]]:
    """Top-k hashtags per category that do not appear in any other
    category's top-exclusion_depth; fills and returns table.distinctive."""
    top_sets = {
        cat: {row.hashtag for row in rows[:exclusion_depth]}
        for cat, rows in table.ranked.items()
    }
    out: dict[str, list[str]] = {}
    for cat, rows in table.ranked.items():
        excluded: set[str] = set()
        for other, tags in top_sets.items():
            if other != cat:
                excluded |= tags
        picked = []
        for row in rows:
            if row.hashtag in excluded:
                continue
            picked.append(row.hashtag)
            if len(picked) == k:
                break
        out[cat] = picked
    table.distinctive = out
    return out
