"""Lexicon-based valence scoring with negation, booster, and all-caps rules,
plus country/day aggregation and policy-hashtag panels.

Rule constants live in SentimentConfig (config block, not code): negation
multiplies valence by -0.74 when a negator occurs in the 3 preceding
tokens, an immediately preceding booster adds its increment toward the
valence sign, an ALL-CAPS token adds 0.733 the same way, and the token sum
is squashed by raw / sqrt(raw^2 + alpha) with alpha = 15.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .config import SentimentConfig
from .geo import GeoIndex
from .store import CorpusStore, unescape_cell
from .tweets import day_str

POSITIVE = "positive"
NEGATIVE = "negative"
NEUTRAL = "neutral"

# Built-in policy hashtag sets; the duplicate "#workfromhome" in the source
# keyword list collapses here.
POLICY_TAG_SETS: dict[str, frozenset[str]] = {
    "work_from_home": frozenset(
        {"workfromhome", "wfm", "workingfromhome", "wfhlife"}),
    "social_distancing": frozenset({"socialdistance", "socialdistancing"}),
}

_TOKEN_RE = re.compile(r"[A-Za-z0-9']+")


def tokenize(text: str) -> list[str]:
    """Word tokens split on whitespace/punctuation; apostrophes survive so
    contraction negators (don't, isn't) stay intact."""
    return _TOKEN_RE.findall(text)


@dataclass
class SentimentLexicon:
    valences: dict[str, float] = field(default_factory=dict)
    boosters: dict[str, float] = field(default_factory=dict)
    negators: frozenset[str] = frozenset()


def load_lexicon(valences_path: str,
                 boosters_path: Optional[str] = None,
                 negators_path: Optional[str] = None) -> SentimentLexicon:
    """Valences from a token<TAB>valence TSV; boosters same shape; negators
    one token per line. Comment lines start with '#'."""
    valences = _load_tsv(valences_path)
    boosters = _load_tsv(boosters_path) if boosters_path else {}
    negators: set[str] = set()
    if negators_path:
        with open(negators_path, "rt", encoding="utf-8") as fh:
            for line in fh:
                token = line.strip().lower()
                if token and not token.startswith("#"):
                    negators.add(token)
    overlap = negators & valences.keys()
    if overlap:
        raise ValueError(f"tokens in both valences and negators: {sorted(overlap)}")
    return SentimentLexicon(valences, boosters, frozenset(negators))


def _load_tsv(path: str) -> dict[str, float]:
    out: dict[str, float] = {}
    with open(path, "rt", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            token, value = line.split("\t")[:2]
            out[token.strip().lower()] = float(value)
    return out


@dataclass(frozen=True)
class SentimentScore:
    compound: float
    label: str
    raw_sum: float


def label_for(compound: float, cfg: SentimentConfig) -> str:
    if compound >= cfg.pos_threshold:
        return POSITIVE
    if compound <= cfg.neg_threshold:
        return NEGATIVE
    return NEUTRAL


def score_text(lexicon: SentimentLexicon, text: str,
               cfg: Optional[SentimentConfig] = None) -> SentimentScore:
    """Score one text; unknown tokens contribute 0."""
    cfg = cfg or SentimentConfig()
    raw = _raw_sum(lexicon, text, cfg)
    compound = raw / math.sqrt(raw * raw + cfg.alpha) if raw else 0.0
    compound = max(-1.0, min(1.0, compound))
    return SentimentScore(compound, label_for(compound, cfg), raw)


def _raw_sum(lexicon: SentimentLexicon, text: str, cfg: SentimentConfig) -> float:
    valences = lexicon.valences
    boosters = lexicon.boosters
    negators = lexicon.negators
    tokens = tokenize(text)
    lowered = [t.lower() for t in tokens]
    total = 0.0
    for i, tok in enumerate(lowered):
        v = valences.get(tok)
        if v is None:
            continue
        for back in range(max(0, i - 3), i):
            if lowered[back] in negators:
                v *= cfg.negation_factor
                break
        if i > 0:
            boost = boosters.get(lowered[i - 1])
            if boost is not None and v != 0:
                v += boost if v > 0 else -boost
        if tokens[i].isupper() and v != 0:
            v += cfg.caps_boost if v > 0 else -cfg.caps_boost
        total += v
    return total


@dataclass
class SentimentGroup:
    country: Optional[str]
    day: Optional[int]
    n: int = 0
    sum_compound: float = 0.0
    n_pos: int = 0
    n_neg: int = 0
    n_neu: int = 0

    def to_dict(self) -> dict:
        row: dict = {}
        if self.country is not None:
            row["country"] = self.country
        if self.day is not None:
            row["day"] = day_str(self.day)
        row.update({
            "n": self.n,
            "mean_compound": self.sum_compound / self.n if self.n else 0.0,
            "pct_pos": 100.0 * self.n_pos / self.n if self.n else 0.0,
            "pct_neg": 100.0 * self.n_neg / self.n if self.n else 0.0,
            "pct_neu": 100.0 * self.n_neu / self.n if self.n else 0.0,
        })
        return row


def aggregate_sentiment(store: CorpusStore, geo: GeoIndex,
                        lexicon: SentimentLexicon,
                        cfg: Optional[SentimentConfig] = None,
                        by_country: bool = True,
                        by_day: bool = True) -> list[SentimentGroup]:
    """Score English tweets and fold into (country, day) groups.

    Tweets without a resolved country are skipped when grouping by country;
    groups with n=0 never appear.
    """
    cfg = cfg or SentimentConfig()
    english = store.column("english")
    days = store.column("day")
    texts = store.text_lines()
    countries = geo.countries
    groups: dict[tuple, SentimentGroup] = {}
    for row in range(len(store)):
        if not english[row]:
            continue
        country = countries[row] if by_country else None
        if by_country and country is None:
            continue
        day = int(days[row]) if by_day else None
        key = (country, day)
        group = groups.get(key)
        if group is None:
            group = groups[key] = SentimentGroup(country, day)
        score = score_text(lexicon, unescape_cell(texts[row]), cfg)
        group.n += 1
        group.sum_compound += score.compound
        if score.label == POSITIVE:
            group.n_pos += 1
        elif score.label == NEGATIVE:
            group.n_neg += 1
        else:
            group.n_neu += 1
    return [groups[k] for k in sorted(groups, key=lambda k: (k[0] or "", k[1] or 0))]


@dataclass
class PolicySentiment:
    tag_set: tuple[str, ...]
    distribution: list[SentimentGroup] = field(default_factory=list)
    top_positive: list[dict] = field(default_factory=list)
    top_negative: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "tags": list(self.tag_set),
            "distribution": [g.to_dict() for g in self.distribution],
            "top_positive": self.top_positive,
            "top_negative": self.top_negative,
        }


def policy_sentiment(store: CorpusStore, lexicon: SentimentLexicon,
                     tag_set: Iterable[str],
                     cfg: Optional[SentimentConfig] = None,
                     top_n: int = 10,
                     text_truncate: int = 280) -> PolicySentiment:
    """Sentiment over tweets carrying at least one policy hashtag.

    Matching is case-insensitive over the parsed hashtag list, not raw
    text. Output: per-day distribution plus the strongest positive and
    negative tweets ranked by |compound|.
    """
    cfg = cfg or SentimentConfig()
    tags = frozenset(t.lower().lstrip("#") for t in tag_set)
    english = store.column("english")
    days = store.column("day")
    ids = store.column("ids")
    tags_lines = store.tags_lines()
    result = PolicySentiment(tag_set=tuple(sorted(tags)))

    by_day: dict[int, SentimentGroup] = {}
    scored: list[tuple[float, int, int]] = []   # (compound, row, id)
    for row in range(len(store)):
        if not english[row]:
            continue
        cell = tags_lines[row]
        if not cell:
            continue
        if not any(t in tags for t in cell.split(" ")):
            continue
        score = score_text(lexicon, store.text_of(row), cfg)
        day = int(days[row])
        group = by_day.get(day)
        if group is None:
            group = by_day[day] = SentimentGroup(None, day)
        group.n += 1
        group.sum_compound += score.compound
        if score.label == POSITIVE:
            group.n_pos += 1
        elif score.label == NEGATIVE:
            group.n_neg += 1
        else:
            group.n_neu += 1
        scored.append((score.compound, row, int(ids[row])))

    result.distribution = [by_day[d] for d in sorted(by_day)]

    def entry(compound: float, row: int, tweet_id: int) -> dict:
        return {
            "tweet_id": str(tweet_id),
            "text": store.text_of(row)[:text_truncate],
            "compound": compound,
        }

    positives = [s for s in scored if s[0] >= cfg.pos_threshold]
    negatives = [s for s in scored if s[0] <= cfg.neg_threshold]
    positives.sort(key=lambda s: (-s[0], s[2]))
    negatives.sort(key=lambda s: (s[0], s[2]))
    result.top_positive = [entry(*s) for s in positives[:top_n]]
    result.top_negative = [entry(*s) for s in negatives[:top_n]]
    return result
