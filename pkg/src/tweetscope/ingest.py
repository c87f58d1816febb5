"""Corpus ingestion: filter NDJSON tweet streams into a corpus store.

Input files are sharded across workers (one shard per file). Each shard is
parsed and filtered independently; shard outputs are merged in input-file
order with a global first-occurrence-wins dedup, so the final store and
report are byte-identical regardless of worker count.
"""

from __future__ import annotations

import concurrent.futures
import glob as globmod
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .config import PipelineConfig
from .errors import ParseError
from .store import CorpusStore, IngestReport, StoreWriter, canonical_line
from .tweets import iter_ndjson, matches_keywords, parse_tweet


@dataclass(frozen=True)
class IngestFilters:
    keywords: tuple[str, ...]
    lang_whitelist: frozenset[str]          # empty = all languages
    ts_min: Optional[int] = None
    ts_max: Optional[int] = None

    @classmethod
    def from_config(cls, cfg: PipelineConfig) -> "IngestFilters":
        ts_min, ts_max = cfg.date_bounds()
        return cls(
            keywords=tuple(k.lower() for k in cfg.keywords),
            lang_whitelist=frozenset(cfg.lang_whitelist),
            ts_min=ts_min,
            ts_max=ts_max,
        )

    def admits(self, text: str, lang: str, ts: int) -> bool:
        if self.ts_min is not None and ts < self.ts_min:
            return False
        if self.ts_max is not None and ts > self.ts_max:
            return False
        if self.lang_whitelist and lang not in self.lang_whitelist:
            return False
        return matches_keywords(text, self.keywords)


@dataclass
class DatasetStats:
    n_tweets: int = 0
    pct_english: float = 0.0
    pct_geo_of_english: float = 0.0
    n_unique_users: int = 0
    pct_verified_users: float = 0.0
    per_country: dict[str, int] = field(default_factory=dict)
    per_us_state: dict[str, int] = field(default_factory=dict)
    empty_corpus: bool = False

    def to_dict(self) -> dict:
        return {
            "n_tweets": self.n_tweets,
            "pct_english": self.pct_english,
            "pct_geo_of_english": self.pct_geo_of_english,
            "n_unique_users": self.n_unique_users,
            "pct_verified_users": self.pct_verified_users,
            "per_country": dict(sorted(self.per_country.items())),
            "per_us_state": dict(sorted(self.per_us_state.items())),
            "empty_corpus": self.empty_corpus,
        }


def expand_input_globs(patterns: Sequence[str]) -> list[str]:
    """Expand globs deterministically: config order, sorted within each
    pattern, duplicates keep their first position."""
    seen = set()
    out = []
    for pattern in patterns:
        for path in sorted(globmod.glob(pattern)):
            if path not in seen:
                seen.add(path)
                out.append(path)
    return out


def _parse_shard(path: str, filters: IngestFilters):
    """Parse and filter one input file.

    Returns (report, keys, lines): keys are (id, is_synthetic) aligned with
    canonical record lines, locally deduped, in stream order.
    """
    report = IngestReport()
    seen: set[int] = set()
    keys: list[tuple[int, bool]] = []
    lines: list[str] = []
    for raw in iter_ndjson(path):
        if not raw.strip():
            continue
        report.read += 1
        try:
            tweets = parse_tweet(raw)
        except ParseError:
            report.rejected_parse += 1
            continue
        report.parsed += 1
        primary = tweets[0]
        if not filters.admits(primary.text, primary.lang, primary.created_at):
            report.rejected_filter += 1
            continue
        for tw in tweets:
            # Synthetic parents bypass filters: they were pulled in by an
            # admitted child and exist to root cascades at source posts.
            if tw.synthetic:
                report.synthetic_emitted += 1
                if tw.id in seen:
                    report.synthetic_deduped += 1
                    continue
            else:
                if tw.id in seen:
                    report.deduped += 1
                    continue
            seen.add(tw.id)
            keys.append((tw.id, tw.synthetic))
            lines.append(canonical_line(tw.to_record()))
    return report, keys, lines


def ingest_corpus(cfg: PipelineConfig,
                  inputs: Optional[Sequence[str]] = None,
                  workers: Optional[int] = None) -> tuple[CorpusStore, IngestReport]:
    """Run the full ingest: shard, parse, filter, merge, persist.

    The returned report satisfies the conservation laws (validated here):
    read = parsed + rejected_parse, parsed = stored + rejected_filter + deduped.
    """
    files = list(inputs) if inputs is not None else expand_input_globs(cfg.input_globs)
    filters = IngestFilters.from_config(cfg)
    n_workers = workers if workers is not None else cfg.workers

    if n_workers > 1 and len(files) > 1:
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=min(n_workers, len(files))) as pool:
            shard_results = list(pool.map(_parse_shard, files,
                                          [filters] * len(files)))
    else:
        shard_results = [_parse_shard(path, filters) for path in files]

    report = IngestReport()
    writer = StoreWriter(cfg.store_dir)
    seen: set[int] = set()

    for shard_report, keys, lines in shard_results:
        report = report.merge(shard_report)
        for (tweet_id, synthetic), line in zip(keys, lines):
            if tweet_id in seen:
                # Cross-shard duplicate: attribute to the right counter.
                if synthetic:
                    report.synthetic_deduped += 1
                else:
                    report.deduped += 1
                continue
            seen.add(tweet_id)
            if synthetic:
                report.synthetic_stored += 1
            else:
                report.stored += 1
            writer.add(json.loads(line), line=line)

    report.validate()
    store = writer.finish(report)
    return store, report


def compute_dataset_stats(store: CorpusStore, geo_index) -> DatasetStats:
    """Corpus-level statistics over the stored tweets.

    Percentages other than pct_english are computed over the English subset:
    geo coverage is the fraction of English tweets with any geolocation
    signal, and user counts cover English tweets' authors only.
    """
    n = len(store)
    stats = DatasetStats(n_tweets=n)
    if n == 0:
        stats.empty_corpus = True
        return stats

    english = store.column("english").astype(bool)
    n_english = int(english.sum())
    stats.pct_english = 100.0 * n_english / n
    if n_english == 0:
        return stats

    methods = geo_index.method_codes()
    has_geo = (methods != 0) & english
    stats.pct_geo_of_english = 100.0 * int(has_geo.sum()) / n_english

    uid = store.column("uid")
    verified = store.column("verified").astype(bool)
    users: dict[int, bool] = {}
    for row in english.nonzero()[0]:
        u = int(uid[row])
        if u not in users:
            users[u] = bool(verified[row])
        elif verified[row]:
            users[u] = True
    stats.n_unique_users = len(users)
    if users:
        stats.pct_verified_users = 100.0 * sum(users.values()) / len(users)

    per_country: dict[str, int] = {}
    per_state: dict[str, int] = {}
    countries = geo_index.countries
    states = geo_index.us_states
    for row in english.nonzero()[0]:
        country = countries[row]
        if country:
            per_country[country] = per_country.get(country, 0) + 1
            state = states[row]
            if state:
                per_state[state] = per_state.get(state, 0) + 1
    stats.per_country = per_country
    stats.per_us_state = per_state
    return stats
