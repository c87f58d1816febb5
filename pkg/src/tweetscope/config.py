"""Pipeline configuration: one JSON file, validated into a dataclass tree."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from .errors import ConfigError
from .tweets import DEFAULT_KEYWORDS, parse_timestamp


def packaged_data(*parts: str) -> str:
    """Absolute path of a file shipped under tweetscope/data/."""
    root = resources.files("tweetscope").joinpath("data")
    return str(root.joinpath(*parts))


@dataclass
class SentimentConfig:
    negation_factor: float = -0.74
    caps_boost: float = 0.733
    alpha: float = 15.0
    pos_threshold: float = 0.05
    neg_threshold: float = -0.05


@dataclass
class TopicsConfig:
    k: int = 20
    dim: int = 128
    ngram_min: int = 3
    ngram_max: int = 5
    max_iters: int = 100
    sample_cap: int = 50_000
    representatives: int = 10


@dataclass
class TrendsConfig:
    top_global: int = 30
    top_country: int = 10
    country_window_days: int = 10
    window_start: Optional[str] = None   # ISO date; default corpus span
    window_end: Optional[str] = None
    normalize_rates: bool = False        # fit slopes on count/day-volume rates


@dataclass
class AnalyticsConfig:
    top_sources: int = 25
    distinctive_k: int = 20
    exclusion_depth: int = 10


@dataclass
class ExportConfig:
    cascade_limit: int = 500
    text_truncate: int = 280


@dataclass
class PipelineConfig:
    input_globs: list[str] = field(default_factory=list)
    keywords: list[str] = field(default_factory=lambda: list(DEFAULT_KEYWORDS))
    lang_whitelist: list[str] = field(default_factory=list)   # empty = all languages
    date_start: Optional[str] = None
    date_end: Optional[str] = None
    store_dir: str = "out/store"
    out_dir: str = "out"
    workers: int = 1
    seed: int = 7
    gazetteer: Optional[str] = None      # None = packaged fixture
    centroids: Optional[str] = None
    catalogs: Optional[list[str]] = None
    catalog_aliases: Optional[str] = None
    catalog_strict: bool = True
    lexicon: Optional[str] = None
    sentiment: SentimentConfig = field(default_factory=SentimentConfig)
    topics: TopicsConfig = field(default_factory=TopicsConfig)
    trends: TrendsConfig = field(default_factory=TrendsConfig)
    analytics: AnalyticsConfig = field(default_factory=AnalyticsConfig)
    export: ExportConfig = field(default_factory=ExportConfig)

    def gazetteer_path(self) -> str:
        return self.gazetteer or packaged_data("gazetteer.csv")

    def centroids_path(self) -> str:
        return self.centroids or packaged_data("centroids.csv")

    def catalog_paths(self) -> list[str]:
        if self.catalogs:
            return list(self.catalogs)
        return [
            packaged_data("catalogs", "mbfc.csv"),
            packaged_data("catalogs", "newsguard.csv"),
            packaged_data("catalogs", "zimdars.csv"),
        ]

    def lexicon_path(self) -> str:
        return self.lexicon or packaged_data("lexicon", "valences.tsv")

    def date_bounds(self) -> tuple[Optional[int], Optional[int]]:
        """Inclusive [start, end] epoch-second bounds from the ISO dates."""
        start = parse_timestamp(self.date_start) if self.date_start else None
        end = parse_timestamp(self.date_end) + 86399 if self.date_end else None
        return start, end


_SECTION_TYPES = {
    "sentiment": SentimentConfig,
    "topics": TopicsConfig,
    "trends": TrendsConfig,
    "analytics": AnalyticsConfig,
    "export": ExportConfig,
}


def _build_section(cls, raw: dict, name: str):
    known = cls.__dataclass_fields__
    bad = set(raw) - set(known)
    if bad:
        raise ConfigError(f"unknown {name} config keys: {sorted(bad)}")
    return cls(**raw)


def config_from_dict(raw: dict[str, Any]) -> PipelineConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    known = PipelineConfig.__dataclass_fields__
    bad = set(raw) - set(known)
    if bad:
        raise ConfigError(f"unknown config keys: {sorted(bad)}")
    kwargs: dict[str, Any] = {}
    for key, value in raw.items():
        if key in _SECTION_TYPES:
            if not isinstance(value, dict):
                raise ConfigError(f"config section '{key}' must be an object")
            kwargs[key] = _build_section(_SECTION_TYPES[key], value, key)
        else:
            kwargs[key] = value
    cfg = PipelineConfig(**kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg: PipelineConfig) -> None:
    if not isinstance(cfg.input_globs, list) or not all(isinstance(g, str) for g in cfg.input_globs):
        raise ConfigError("input_globs must be a list of glob strings")
    if not cfg.keywords:
        raise ConfigError("keywords must be non-empty")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.topics.k < 1:
        raise ConfigError("topics.k must be >= 1")
    if cfg.topics.ngram_min < 1 or cfg.topics.ngram_max < cfg.topics.ngram_min:
        raise ConfigError("topics n-gram range is invalid")
    for label in ("date_start", "date_end"):
        value = getattr(cfg, label)
        if value is not None:
            try:
                parse_timestamp(value)
            except Exception:
                raise ConfigError(f"{label} is not an ISO date: {value!r}") from None
    for label, path in (
        ("gazetteer", cfg.gazetteer),
        ("centroids", cfg.centroids),
        ("lexicon", cfg.lexicon),
        ("catalog_aliases", cfg.catalog_aliases),
    ):
        if path is not None and not os.path.exists(path):
            raise ConfigError(f"{label} file not found: {path}")
    for path in cfg.catalogs or []:
        if not os.path.exists(path):
            raise ConfigError(f"catalog file not found: {path}")


def load_config(path: str) -> PipelineConfig:
    try:
        with open(path, "rt", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    cfg = config_from_dict(raw)
    # Relative paths resolve against the config file's directory.
    base = os.path.dirname(os.path.abspath(path))
    cfg.input_globs = [_absolutize(base, g) for g in cfg.input_globs]
    cfg.store_dir = _absolutize(base, cfg.store_dir)
    cfg.out_dir = _absolutize(base, cfg.out_dir)
    for attr in ("gazetteer", "centroids", "catalog_aliases", "lexicon"):
        value = getattr(cfg, attr)
        if value is not None:
            setattr(cfg, attr, _absolutize(base, value))
    if cfg.catalogs:
        cfg.catalogs = [_absolutize(base, p) for p in cfg.catalogs]
    return cfg


def _absolutize(base: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base, path)
