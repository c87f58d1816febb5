"""tweetscope: batch analytics over tweet corpora.

Misinformation labeling from low-credibility source catalogs, cascade
extraction from retweet/reply graphs, lexicon sentiment, topic clusters,
and emerging-trend regression, exported as JSON artifacts for a static
dashboard.
"""

__version__ = "0.1.0"

from .catalog import CATEGORIES, OTHERS, SourceCatalog, load_catalog
from .config import PipelineConfig, load_config
from .geo import Gazetteer, GeoIndex, load_gazetteer, resolve_geo
from .graph import (CascadeSet, build_engagement_graph, extract_cascades,
                    label_cascades)
from .ingest import IngestFilters, compute_dataset_stats, ingest_corpus
from .pipeline import run_pipeline, verify_manifest
from .sentiment import SentimentLexicon, load_lexicon, score_text
from .store import CorpusStore, IngestReport
from .topics import EmbedParams, cluster_topics, embed_texts, embed_tweet
from .trends import hashtag_trend_slopes, ols_fit
from .tweets import Tweet, UserRef, matches_keywords, parse_tweet

__all__ = [
    "CATEGORIES", "OTHERS", "SourceCatalog", "load_catalog",
    "PipelineConfig", "load_config",
    "Gazetteer", "GeoIndex", "load_gazetteer", "resolve_geo",
    "CascadeSet", "build_engagement_graph", "extract_cascades", "label_cascades",
    "IngestFilters", "compute_dataset_stats", "ingest_corpus",
    "run_pipeline", "verify_manifest",
    "SentimentLexicon", "load_lexicon", "score_text",
    "CorpusStore", "IngestReport",
    "EmbedParams", "cluster_topics", "embed_texts", "embed_tweet",
    "hashtag_trend_slopes", "ols_fit",
    "Tweet", "UserRef", "matches_keywords", "parse_tweet",
]
