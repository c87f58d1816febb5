"""Pipeline orchestration: resumable stages and the JSON artifact bundle.

Stage outputs land under cfg.out_dir; every stage records a content hash of
its inputs (upstream stage hashes plus the files and config slice it reads)
in .stages/<name>.json, and a rerun with unchanged inputs is skipped. The
export stage writes the manifest last, atomically.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import analytics, sentiment, topics, trends
from .catalog import SourceCatalog, load_catalog
from .config import PipelineConfig
from .errors import EmptyTrace, StageError, TweetscopeError, WindowTooShort
from .geo import (GeoIndex, Gazetteer, build_geo_index, geo_index_path,
                  load_centroids, load_gazetteer)
from .graph import (CascadeSet, MisinfoStats, build_engagement_graph,
                    cascade_spread_trace, extract_cascades, label_cascades)
from .ingest import compute_dataset_stats, expand_input_globs, ingest_corpus
from .store import CorpusStore
from .tweets import day_str, iso_ts, parse_timestamp

SCHEMA_VERSION = "1.1"

ARTIFACT_NAMES = (
    "dataset_stats",
    "misinfo_stats",
    "volume_by_category",
    "source_breakdown",
    "relative_volume",
    "narratives",
    "sentiment_country_day",
    "policy_sentiment",
    "topics",
    "trends_global",
    "trends_by_country",
    "geo_activity",
)

STAGE_ORDER = ("ingest", "geo", "label", "cascades", "analyze",
               "sentiment", "topics", "trends", "export")

STAGE_DEPS: dict[str, tuple[str, ...]] = {
    "ingest": (),
    "geo": ("ingest",),
    "label": (),
    "cascades": ("ingest", "label"),
    "analyze": ("cascades",),
    "sentiment": ("ingest", "geo"),
    "topics": ("ingest",),
    "trends": ("ingest", "geo"),
    "export": ("ingest", "geo", "label", "cascades", "analyze",
               "sentiment", "topics", "trends"),
}


def write_json(path: str, obj) -> None:
    """Atomic, deterministic JSON write (sorted keys, stable floats)."""
    tmp = path + ".tmp"
    with open(tmp, "wt", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, ensure_ascii=False, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _hash_obj(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


class PipelineContext:
    """Lazily loads shared state; within one process a stage reuses what an
    earlier stage already has in memory instead of re-reading files."""

    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self._store: Optional[CorpusStore] = None
        self._geo: Optional[GeoIndex] = None
        self._gazetteer: Optional[Gazetteer] = None
        self._catalog: Optional[SourceCatalog] = None
        self._cascades: Optional[CascadeSet] = None
        self._misinfo_stats: Optional[MisinfoStats] = None
        self._lexicon = None
        self._centroids = None

    @property
    def artifacts_dir(self) -> str:
        return os.path.join(self.cfg.out_dir, "artifacts")

    def artifact_path(self, name: str) -> str:
        return os.path.join(self.artifacts_dir, f"{name}.json")

    @property
    def store(self) -> CorpusStore:
        if self._store is None:
            self._store = CorpusStore(self.cfg.store_dir)
        return self._store

    @property
    def gazetteer(self) -> Gazetteer:
        if self._gazetteer is None:
            self._gazetteer = load_gazetteer(self.cfg.gazetteer_path())
        return self._gazetteer

    @property
    def geo(self) -> GeoIndex:
        if self._geo is None:
            self._geo = GeoIndex.load(geo_index_path(self.cfg.out_dir))
        return self._geo

    @property
    def catalog(self) -> SourceCatalog:
        if self._catalog is None:
            self._catalog = load_catalog(self.cfg.catalog_paths(),
                                         strict=self.cfg.catalog_strict,
                                         aliases_path=self.cfg.catalog_aliases)
        return self._catalog

    @property
    def cascades(self) -> CascadeSet:
        if self._cascades is None:
            self._cascades = CascadeSet.load(
                os.path.join(self.cfg.out_dir, "cascade_set"), self.store)
        return self._cascades

    @property
    def lexicon(self):
        if self._lexicon is None:
            base = os.path.dirname(self.cfg.lexicon_path())
            boosters = os.path.join(base, "boosters.tsv")
            negators = os.path.join(base, "negators.txt")
            self._lexicon = sentiment.load_lexicon(
                self.cfg.lexicon_path(),
                boosters if os.path.exists(boosters) else None,
                negators if os.path.exists(negators) else None)
        return self._lexicon

    @property
    def centroids(self):
        if self._centroids is None:
            self._centroids = load_centroids(self.cfg.centroids_path())
        return self._centroids

    def generated_at(self) -> int:
        env = os.environ.get("SOURCE_DATE_EPOCH")
        if env:
            return int(env)
        ts = self.store.column("ts")
        return int(ts.max()) if len(ts) else 0


# ---------------------------------------------------------------------------
# stage implementations

def _stage_ingest(ctx: PipelineContext) -> list[str]:
    store, _report = ingest_corpus(ctx.cfg)
    ctx._store = store
    return [os.path.join(ctx.cfg.store_dir, "meta.json")]


def _stage_geo(ctx: PipelineContext) -> list[str]:
    geo = build_geo_index(ctx.store, ctx.gazetteer)
    ctx._geo = geo
    path = geo_index_path(ctx.cfg.out_dir)
    geo.save(path)
    stats = compute_dataset_stats(ctx.store, geo)
    out = ctx.artifact_path("dataset_stats")
    write_json(out, stats.to_dict())
    return [path, out]


def _stage_label(ctx: PipelineContext) -> list[str]:
    catalog = ctx.catalog
    snapshot = {
        domain: {
            "categories": sorted(entry.categories),
            "providers": sorted(entry.providers),
            "raw_tags": list(entry.raw_tags),
        }
        for domain, entry in sorted(catalog.entries.items())
    }
    path = os.path.join(ctx.cfg.out_dir, "catalog.json")
    write_json(path, snapshot)
    return [path]


def _stage_cascades(ctx: PipelineContext) -> list[str]:
    graph = build_engagement_graph(ctx.store)
    cascades = extract_cascades(graph, ctx.store)
    stats = label_cascades(cascades, ctx.catalog)
    ctx._cascades = cascades
    ctx._misinfo_stats = stats
    set_dir = os.path.join(ctx.cfg.out_dir, "cascade_set")
    cascades.save(set_dir)
    out = ctx.artifact_path("misinfo_stats")
    write_json(out, {"misinfo": stats.to_dict(), "graph": graph.stats()})
    return [os.path.join(set_dir, "offsets.npy"), out]


def _stage_analyze(ctx: PipelineContext) -> list[str]:
    cfg = ctx.cfg
    cascades = ctx.cascades
    day_range = _configured_day_range(cfg) or _corpus_day_range(ctx.store)
    volume = analytics.misinfo_volume_series(cascades, day_range)
    breakdown = analytics.source_breakdown(cascades, cfg.analytics.top_sources)
    relative = analytics.relative_volume(cascades)
    table = analytics.hashtag_tfidf(cascades)
    distinctive = analytics.distinctive_hashtags(
        table, k=cfg.analytics.distinctive_k,
        exclusion_depth=cfg.analytics.exclusion_depth)

    narratives: dict = {
        cat: [row.to_dict() for row in rows[:cfg.analytics.distinctive_k]]
        for cat, rows in table.ranked.items()
    }
    narratives["distinctive"] = distinctive

    outs = []
    for name, obj in (
        ("volume_by_category", [s.to_dict() for s in volume]),
        ("source_breakdown", [{"domain": d, "count": c} for d, c in breakdown]),
        ("relative_volume", relative),
        ("narratives", narratives),
    ):
        path = ctx.artifact_path(name)
        write_json(path, obj)
        outs.append(path)
    return outs


def _stage_sentiment(ctx: PipelineContext) -> list[str]:
    cfg = ctx.cfg
    groups = sentiment.aggregate_sentiment(ctx.store, ctx.geo, ctx.lexicon,
                                           cfg.sentiment)
    panels = {
        name: sentiment.policy_sentiment(
            ctx.store, ctx.lexicon, tags, cfg.sentiment,
            text_truncate=cfg.export.text_truncate).to_dict()
        for name, tags in sentiment.POLICY_TAG_SETS.items()
    }
    outs = []
    for name, obj in (
        ("sentiment_country_day", [g.to_dict() for g in groups]),
        ("policy_sentiment", panels),
    ):
        path = ctx.artifact_path(name)
        write_json(path, obj)
        outs.append(path)
    return outs


def _stage_topics(ctx: PipelineContext) -> list[str]:
    cfg = ctx.cfg
    store = ctx.store
    english_rows = np.nonzero(store.column("english"))[0]
    cap = cfg.topics.sample_cap
    if len(english_rows) > cap:
        picks = english_rows[(np.arange(cap, dtype=np.int64)
                              * len(english_rows)) // cap]
    else:
        picks = english_rows
    texts = [store.text_of(int(r)) for r in picks]
    ids = store.column("ids")

    payload: dict = {
        "k": cfg.topics.k,
        "seed": cfg.seed,
        "sample_size": len(texts),
        "clusters": [],
    }
    if len(texts) >= cfg.topics.k and texts:
        params = topics.EmbedParams(dim=cfg.topics.dim,
                                    ngram_min=cfg.topics.ngram_min,
                                    ngram_max=cfg.topics.ngram_max,
                                    seed=cfg.seed)
        vectors, _zero = topics.embed_texts(texts, params)
        model = topics.cluster_topics(vectors, k=cfg.topics.k,
                                      max_iters=cfg.topics.max_iters,
                                      seed=cfg.seed)
        reps, dists = topics.representative_tweets(
            model, texts, m=cfg.topics.representatives)
        sizes = model.cluster_sizes()
        for j in range(model.k):
            payload["clusters"].append({
                "cluster": j,
                "size": int(sizes[j]),
                "words": [{"word": w, "weight": weight} for w, weight in dists[j]],
                "representatives": [
                    {"tweet_id": str(int(ids[int(picks[i])])),
                     "text": texts[i][:cfg.export.text_truncate]}
                    for i in reps[j]
                ],
            })
    else:
        payload["note"] = "too few English tweets to cluster"

    path = ctx.artifact_path("topics")
    write_json(path, payload)
    return [path]


def _stage_trends(ctx: PipelineContext) -> list[str]:
    cfg = ctx.cfg
    window = _configured_trend_window(cfg) or _corpus_day_range(ctx.store)
    try:
        ranked = trends.hashtag_trend_slopes(
            ctx.store, window, top=cfg.trends.top_global,
            normalize_rates=cfg.trends.normalize_rates)
        global_series = [s.to_dict() for s in ranked]
    except WindowTooShort:
        global_series = []
    try:
        by_country = trends.emerging_by_country(
            ctx.store, ctx.geo, last_days=cfg.trends.country_window_days,
            top=cfg.trends.top_country,
            normalize_rates=cfg.trends.normalize_rates)
        country_series = {c: [s.to_dict() for s in series]
                          for c, series in by_country.items()}
    except WindowTooShort:
        country_series = {}
    activity = trends.geo_activity_stats(ctx.store, ctx.geo)

    outs = []
    for name, obj in (
        ("trends_global", global_series),
        ("trends_by_country", country_series),
        ("geo_activity", {c: a.to_dict() for c, a in activity.items()}),
    ):
        path = ctx.artifact_path(name)
        write_json(path, obj)
        outs.append(path)
    return outs


def _stage_export(ctx: PipelineContext) -> list[str]:
    cfg = ctx.cfg
    daily_dir = os.path.join(ctx.artifacts_dir, "misinfo_daily")
    cascade_dir = os.path.join(ctx.artifacts_dir, "cascades")
    daily_files = export_misinfo_daily(ctx.cascades, daily_dir,
                                       cfg.export.text_truncate)
    cascade_files = export_cascade_files(ctx, cascade_dir,
                                         cfg.export.cascade_limit)

    files = {}
    for name in ARTIFACT_NAMES:
        path = ctx.artifact_path(name)
        files[name] = {
            "path": f"{name}.json",
            "sha256": sha256_file(path),
            "row_count": _row_count(path),
        }
    store = ctx.store
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "generated_at": iso_ts(ctx.generated_at()),
        "corpus_range": {
            "start": day_str(store.day_min) if store.day_min is not None else None,
            "end": day_str(store.day_max) if store.day_max is not None else None,
        },
        "files": files,
        "directories": {
            "misinfo_daily": {"path": "misinfo_daily",
                              "file_count": len(daily_files),
                              "files": daily_files},
            "cascades": {"path": "cascades",
                         "file_count": len(cascade_files),
                         "files": cascade_files},
        },
    }
    path = os.path.join(ctx.artifacts_dir, "manifest.json")
    write_json(path, manifest)
    return [path]


def _row_count(path: str) -> int:
    with open(path, "rt", encoding="utf-8") as fh:
        obj = json.load(fh)
    if isinstance(obj, list):
        return len(obj)
    if isinstance(obj, dict):
        return len(obj)
    return 1


def export_misinfo_daily(cascades: CascadeSet, out_dir: str,
                         text_truncate: int = 280) -> list[str]:
    """One JSON per day holding that day's misinformation roots, largest
    cascade first. Days without misinformation produce no file."""
    if os.path.isdir(out_dir):
        shutil.rmtree(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    store = cascades.store
    days = store.column("day")
    ids = store.column("ids")
    sizes = cascades.sizes()
    by_day: dict[int, list[int]] = {}
    for i in np.nonzero(cascades.category_bits)[0].tolist():
        day = int(days[cascades.root_rows[i]])
        by_day.setdefault(day, []).append(i)
    written = []
    for day in sorted(by_day):
        rows = []
        for i in by_day[day]:
            root = int(cascades.root_rows[i])
            domains = cascades.matched_domains.get(i, ())
            rows.append({
                "tweet_id": str(int(ids[root])),
                "text": store.text_of(root)[:text_truncate],
                "categories": sorted(cascades.categories_of(i)),
                "matched_domain": domains[0] if domains else None,
                "cascade_size": int(sizes[i]),
            })
        rows.sort(key=lambda r: (-r["cascade_size"], int(r["tweet_id"])))
        fname = f"{day_str(day)}.json"
        write_json(os.path.join(out_dir, fname), rows)
        written.append(fname)
    return written


def export_cascade_files(ctx: PipelineContext, out_dir: str,
                         limit: int) -> list[str]:
    """Per-cascade JSON files (members plus trace points) for the largest
    cascades; misinformation cascades are always included first."""
    if os.path.isdir(out_dir):
        shutil.rmtree(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    cascades = ctx.cascades
    store = ctx.store
    ids = store.column("ids")
    ts = store.column("ts")
    sizes = cascades.sizes()

    misinfo = np.nonzero(cascades.category_bits)[0].tolist()
    others = np.nonzero(cascades.category_bits == 0)[0].tolist()
    order_key = lambda i: (-int(sizes[i]), int(cascades.root_rows[i]))
    selected = sorted(misinfo, key=order_key)[:limit]
    if len(selected) < limit:
        selected += sorted(others, key=order_key)[:limit - len(selected)]

    written = []
    for i in selected:
        root = int(cascades.root_rows[i])
        members = []
        for row in cascades.members(i).tolist():
            parent_row = int(cascades.tree_parent[row])
            members.append({
                "tweet_id": str(int(ids[row])),
                "parent_id": str(int(ids[parent_row])) if parent_row != -1 else None,
                "t": iso_ts(int(ts[row])),
            })
        members.sort(key=lambda m: (m["t"], int(m["tweet_id"])))
        try:
            trace = cascade_spread_trace(cascades, i, ctx.geo, ctx.centroids)
            trace_rows = [{"t": iso_ts(pt.t), "lat": pt.lat, "lon": pt.lon,
                           "kind": pt.kind} for pt in trace.points]
        except EmptyTrace:
            trace_rows = []
        payload = {
            "root_id": str(int(ids[root])),
            "categories": sorted(cascades.categories_of(i)),
            "matched_domains": list(cascades.matched_domains.get(i, ())),
            "size": int(sizes[i]),
            "depth": int(cascades.depths[i]),
            "members": members,
            "trace": trace_rows,
        }
        fname = f"{int(ids[root])}.json"
        write_json(os.path.join(out_dir, fname), payload)
        written.append(fname)
    return written


def _corpus_day_range(store: CorpusStore) -> Optional[tuple[int, int]]:
    if store.day_min is None:
        return None
    return (store.day_min, store.day_max)


def _configured_day_range(cfg: PipelineConfig) -> Optional[tuple[int, int]]:
    if cfg.date_start and cfg.date_end:
        return (parse_timestamp(cfg.date_start) // 86400,
                parse_timestamp(cfg.date_end) // 86400)
    return None


def _configured_trend_window(cfg: PipelineConfig) -> Optional[tuple[int, int]]:
    t = cfg.trends
    if t.window_start and t.window_end:
        return (parse_timestamp(t.window_start) // 86400,
                parse_timestamp(t.window_end) // 86400)
    return None


# ---------------------------------------------------------------------------
# stage plumbing

_STAGE_FN: dict[str, Callable[[PipelineContext], list[str]]] = {
    "ingest": _stage_ingest,
    "geo": _stage_geo,
    "label": _stage_label,
    "cascades": _stage_cascades,
    "analyze": _stage_analyze,
    "sentiment": _stage_sentiment,
    "topics": _stage_topics,
    "trends": _stage_trends,
    "export": _stage_export,
}


def _stage_input_hash(ctx: PipelineContext, stage: str,
                      done: dict[str, str]) -> str:
    cfg = ctx.cfg
    payload: dict = {"stage": stage,
                     "deps": {d: done[d] for d in STAGE_DEPS[stage]}}
    if stage == "ingest":
        files = expand_input_globs(cfg.input_globs)
        payload["inputs"] = [(os.path.basename(p), sha256_file(p)) for p in files]
        payload["config"] = {
            "keywords": cfg.keywords,
            "lang_whitelist": cfg.lang_whitelist,
            "date_start": cfg.date_start,
            "date_end": cfg.date_end,
        }
    elif stage == "geo":
        payload["gazetteer"] = sha256_file(cfg.gazetteer_path())
    elif stage == "label":
        payload["catalogs"] = [sha256_file(p) for p in cfg.catalog_paths()]
        payload["strict"] = cfg.catalog_strict
        if cfg.catalog_aliases:
            payload["aliases"] = sha256_file(cfg.catalog_aliases)
    elif stage == "analyze":
        payload["config"] = vars(cfg.analytics)
    elif stage == "sentiment":
        payload["lexicon"] = sha256_file(cfg.lexicon_path())
        payload["config"] = vars(cfg.sentiment)
    elif stage == "topics":
        payload["config"] = vars(cfg.topics)
        payload["seed"] = cfg.seed
    elif stage == "trends":
        payload["config"] = vars(cfg.trends)
    elif stage == "export":
        payload["config"] = vars(cfg.export)
        payload["centroids"] = sha256_file(cfg.centroids_path())
    return _hash_obj(payload)


@dataclass
class StageResult:
    name: str
    skipped: bool
    outputs: list[str] = field(default_factory=list)


def run_pipeline(cfg: PipelineConfig, upto: str = "export",
                 force: bool = False) -> list[StageResult]:
    """Run stages in order through `upto` (plus its dependencies), skipping
    stages whose input hash matches the recorded state."""
    if upto not in STAGE_ORDER:
        raise TweetscopeError(f"unknown stage {upto!r}")
    needed = _transitive(upto)
    ctx = PipelineContext(cfg)
    state_dir = os.path.join(cfg.out_dir, ".stages")
    os.makedirs(ctx.artifacts_dir, exist_ok=True)
    os.makedirs(state_dir, exist_ok=True)

    results = []
    done: dict[str, str] = {}
    for stage in STAGE_ORDER:
        if stage not in needed:
            continue
        try:
            input_hash = _stage_input_hash(ctx, stage, done)
        except OSError as exc:
            raise StageError(stage, f"cannot hash inputs: {exc}",
                             completed=results) from exc
        state_path = os.path.join(state_dir, f"{stage}.json")
        state = _read_state(state_path)
        if (not force and state is not None
                and state.get("input_hash") == input_hash
                and all(os.path.exists(p) for p in state.get("outputs", []))):
            results.append(StageResult(stage, skipped=True,
                                       outputs=state["outputs"]))
            done[stage] = input_hash
            continue
        try:
            outputs = _STAGE_FN[stage](ctx)
        except TweetscopeError as exc:
            raise StageError(stage, str(exc), completed=results) from exc
        except (OSError, ValueError, KeyError) as exc:
            raise StageError(stage, f"{type(exc).__name__}: {exc}",
                             completed=results) from exc
        write_json(state_path, {"input_hash": input_hash, "outputs": outputs})
        done[stage] = input_hash
        results.append(StageResult(stage, skipped=False, outputs=outputs))
    return results


def _transitive(stage: str) -> set[str]:
    out: set[str] = set()
    frontier = [stage]
    while frontier:
        s = frontier.pop()
        if s in out:
            continue
        out.add(s)
        frontier.extend(STAGE_DEPS[s])
    return out


def _read_state(path: str) -> Optional[dict]:
    if not os.path.exists(path):
        return None
    try:
        with open(path, "rt", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None


def verify_manifest(artifacts_dir: str) -> list[str]:
    """Re-hash every manifest file; returns a list of problems (empty = ok)."""
    problems = []
    manifest_path = os.path.join(artifacts_dir, "manifest.json")
    try:
        with open(manifest_path, "rt", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return [f"manifest unreadable: {exc}"]
    for name, entry in manifest.get("files", {}).items():
        path = os.path.join(artifacts_dir, entry["path"])
        if not os.path.exists(path):
            problems.append(f"{name}: missing {entry['path']}")
            continue
        if sha256_file(path) != entry["sha256"]:
            problems.append(f"{name}: hash mismatch")
    for name, entry in manifest.get("directories", {}).items():
        base = os.path.join(artifacts_dir, entry["path"])
        for fname in entry.get("files", []):
            if not os.path.exists(os.path.join(base, fname)):
                problems.append(f"{name}/{fname}: missing")
    return problems
