"""Emerging-hashtag trends from ordinary-least-squares slopes of daily
usage counts, plus per-country activity series."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import WindowTooShort
from .geo import GeoIndex
from .store import CorpusStore
from .tweets import day_str


def ols_fit(counts) -> tuple[float, float]:
    """Exact OLS (slope, intercept) of counts against day index 0..T-1."""
    y = np.asarray(counts, dtype=np.float64)
    t = len(y)
    if t < 2:
        raise WindowTooShort(f"need >= 2 days, got {t}")
    x = np.arange(t, dtype=np.float64)
    xc = x - x.mean()
    slope = float((xc * y).sum() / (xc * xc).sum())
    intercept = float(y.mean() - slope * x.mean())
    return slope, intercept


@dataclass
class TrendSeries:
    key: str                     # hashtag or country
    start_day: int
    counts: list[int]
    slope: float
    intercept: float
    normalized: bool = False     # slope fitted on count/day-volume rates

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "start_day": day_str(self.start_day),
            "counts": self.counts,
            "slope": self.slope,
            "intercept": self.intercept,
            "total": self.total,
            "normalized": self.normalized,
        }


def _ranked_series(tag_days: dict[str, np.ndarray], start_day: int,
                   n_days: int, top: int,
                   day_totals: Optional[np.ndarray] = None) -> list[TrendSeries]:
    """Vectorized OLS over all keys; rank by slope desc, then total count
    desc, then key. With day_totals the fit runs on per-day rates
    (count / day volume, 0 on empty days) while counts stay raw."""
    if not tag_days:
        return []
    keys = sorted(tag_days)
    matrix = np.stack([tag_days[k] for k in keys]).astype(np.float64)
    fit = matrix
    if day_totals is not None:
        denom = np.where(day_totals > 0, day_totals, 1).astype(np.float64)
        fit = matrix / denom
    x = np.arange(n_days, dtype=np.float64)
    xc = x - x.mean()
    sxx = float((xc * xc).sum())
    slopes = fit @ xc / sxx
    intercepts = fit.mean(axis=1) - slopes * x.mean()
    totals = matrix.sum(axis=1)
    order = sorted(range(len(keys)),
                   key=lambda i: (-slopes[i], -totals[i], keys[i]))
    return [
        TrendSeries(keys[i], start_day, tag_days[keys[i]].tolist(),
                    float(slopes[i]), float(intercepts[i]),
                    normalized=day_totals is not None)
        for i in order[:top]
    ]


def _count_tag_days(store: CorpusStore, rows, day_lo: int, n_days: int,
                    ) -> dict[str, np.ndarray]:
    days = store.column("day")
    tags_lines = store.tags_lines()
    out: dict[str, np.ndarray] = {}
    for row in rows:
        day = int(days[row])
        offset = day - day_lo
        if not 0 <= offset < n_days:
            continue
        cell = tags_lines[row]
        if not cell:
            continue
        for tag in cell.split(" "):
            counts = out.get(tag)
            if counts is None:
                counts = out[tag] = np.zeros(n_days, dtype=np.int64)
            counts[offset] += 1
    return out


def _window_day_totals(store: CorpusStore, rows, day_lo: int,
                       n_days: int) -> np.ndarray:
    days = store.column("day")
    totals = np.zeros(n_days, dtype=np.int64)
    for row in rows:
        offset = int(days[row]) - day_lo
        if 0 <= offset < n_days:
            totals[offset] += 1
    return totals


def hashtag_trend_slopes(store: CorpusStore,
                         window: Optional[tuple[int, int]] = None,
                         top: int = 30,
                         normalize_rates: bool = False) -> list[TrendSeries]:
    """Top emerging hashtags over a day window (default: corpus span).

    Counts are zero-filled across the window; a hashtag spiking on one day
    outranks flat hashtags of equal total because the slope is fit on the
    raw daily counts. With normalize_rates the fit runs on per-day usage
    rates (count divided by that day's tweet volume) instead.
    """
    if window is None:
        if store.day_min is None:
            raise WindowTooShort("empty corpus has no window")
        window = (store.day_min, store.day_max)
    day_lo, day_hi = window
    n_days = day_hi - day_lo + 1
    if n_days < 2:
        raise WindowTooShort(f"window spans {n_days} day(s)")
    rows = range(len(store))
    tag_days = _count_tag_days(store, rows, day_lo, n_days)
    totals = _window_day_totals(store, rows, day_lo, n_days) if normalize_rates else None
    return _ranked_series(tag_days, day_lo, n_days, top, day_totals=totals)


def emerging_by_country(store: CorpusStore, geo: GeoIndex,
                        last_days: int = 10,
                        top: int = 10,
                        normalize_rates: bool = False,
                        ) -> dict[str, list[TrendSeries]]:
    """Per-country top emerging hashtags over the trailing window ending at
    the corpus max date. Countries with no tweets in the window are absent."""
    if store.day_max is None:
        return {}
    day_hi = store.day_max
    day_lo = day_hi - last_days + 1
    n_days = day_hi - day_lo + 1
    if n_days < 2:
        raise WindowTooShort(f"window spans {n_days} day(s)")
    days = store.column("day")
    rows_by_country: dict[str, list[int]] = {}
    for row, country in enumerate(geo.countries):
        if country is None:
            continue
        if day_lo <= int(days[row]) <= day_hi:
            rows_by_country.setdefault(country, []).append(row)
    out: dict[str, list[TrendSeries]] = {}
    for country in sorted(rows_by_country):
        rows = rows_by_country[country]
        tag_days = _count_tag_days(store, rows, day_lo, n_days)
        totals = _window_day_totals(store, rows, day_lo, n_days) if normalize_rates else None
        series = _ranked_series(tag_days, day_lo, n_days, top, day_totals=totals)
        if series:
            out[country] = series
    return out


@dataclass
class CountryActivity:
    country: str
    start_day: int
    counts: list[int]
    increments: list[int] = field(default_factory=list)
    peak_day: int = 0

    def to_dict(self) -> dict:
        return {
            "country": self.country,
            "start_day": day_str(self.start_day),
            "counts": self.counts,
            "increments": self.increments,
            "peak_day": day_str(self.peak_day),
        }


def geo_activity_stats(store: CorpusStore, geo: GeoIndex) -> dict[str, CountryActivity]:
    """Per-country daily counts over the country's active span (zero-filled
    inside), day-over-day increments, and the earliest peak day."""
    days = store.column("day")
    raw: dict[str, dict[int, int]] = {}
    for row, country in enumerate(geo.countries):
        if country is None:
            continue
        day = int(days[row])
        bucket = raw.setdefault(country, {})
        bucket[day] = bucket.get(day, 0) + 1
    out: dict[str, CountryActivity] = {}
    for country in sorted(raw):
        per_day = raw[country]
        lo, hi = min(per_day), max(per_day)
        counts = [per_day.get(d, 0) for d in range(lo, hi + 1)]
        increments = [counts[i] - counts[i - 1] for i in range(1, len(counts))]
        peak_idx = max(range(len(counts)), key=lambda i: (counts[i], -i))
        out[country] = CountryActivity(
            country=country,
            start_day=lo,
            counts=counts,
            increments=increments,
            peak_day=lo + peak_idx,
        )
    return out
