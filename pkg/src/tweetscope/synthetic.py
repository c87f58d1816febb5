"""Deterministic synthetic tweet corpora in the public NDJSON layout.

The real corpus is not redistributable, so benchmarks, tests, and the
README demo run on generated data: keyword-bearing and off-topic records,
retweets with embedded sources, replies (some dangling), geo metadata,
catalog-linked urls, and a few malformed lines. Same seed, same bytes.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from typing import Optional

from .tweets import iso_ts, parse_timestamp

_LANGS = ("en", "en", "en", "en", "en", "en", "en", "es", "fr", "de", "hi", "und")

_TOPIC_PHRASES = (
    "covid19 case numbers keep climbing",
    "new coronavirus guidance for local clinics",
    "corona virus screening opens downtown",
    "thoughts on the CoronavirusOutbreak response",
    "coronapocalypse shopping left shelves empty",
    "2019nCoV lab update thread",
    "masks and coronavirus questions answered",
    "covid19 testing site moved again",
)

_OFFTOPIC_PHRASES = (
    "traffic on the bridge is terrible today",
    "great sourdough crumb this morning",
    "playoff schedule finally announced",
    "garden tomatoes doing well",
)

_FILLERS = (
    "stay safe everyone", "sharing for awareness", "please read",
    "numbers inside", "what a week", "more soon", "thread below",
    "good news for once", "hard to believe", "not great", "very bad news",
    "this is terrible", "feeling hopeful", "awful reporting again",
)

_HASHTAG_POOL = (
    "covid19", "coronavirus", "pandemic", "lockdown", "stayhome",
    "vaccine", "testing", "quarantine", "flattenthecurve", "masks",
    "socialdistancing", "workfromhome", "wfhlife", "frontline",
    "reopening", "herdimmunity", "contacttracing", "secondwave",
)

_RISING_HASHTAGS = ("coronalockdown", "nationaldoctorsday", "covidrelief")

_PROFILE_LOCATIONS = (
    "Los Angeles, CA", "New York, NY", "London, England", "Toronto, Canada",
    "Lagos, Nigeria", "Sydney, Australia", "Mumbai, India", "Paris, France",
    "Berlin, Germany", "Madrid, Spain", "Dublin, Ireland", "Nairobi, Kenya",
    "the moon", "somewhere", "earth", "", "Karachi, Pakistan",
    "Cape Town, South Africa", "Austin, TX", "Chicago, IL",
)

_PLACES = (
    ("US", "Los Angeles, CA"), ("US", "Brooklyn, NY"), ("US", "Houston, TX"),
    ("GB", "London, England"), ("IN", "Mumbai, India"), ("CA", "Toronto, Ontario"),
    ("NG", "Lagos, Nigeria"), ("AU", "Sydney, New South Wales"),
    ("FR", "Paris, France"), ("DE", "Berlin, Germany"),
)

_COUNTRY_COORDS = {
    "US": (37.1, -95.7), "GB": (54.0, -2.0), "IN": (21.0, 78.0),
    "CA": (56.0, -106.0), "NG": (9.1, 8.7), "AU": (-25.3, 133.8),
    "FR": (46.2, 2.2), "DE": (51.2, 10.4),
}

_NEWS_DOMAINS = (
    "dailyplanetwire.example", "citydeskjournal.example",
    "globereportonline.example", "metroheadlines.example",
)

# Domains present in the packaged fixture catalogs.
_MISINFO_DOMAINS = (
    "chemtrailgazette.example", "viralclicksdaily.example",
    "patrioteagleplanet.example", "shadowcurereport.example",
    "coronahoaxwire.example",
)


@dataclass
class SynthParams:
    n_records: int = 10_000
    seed: int = 7
    n_files: int = 4
    start_day: str = "2020-03-01"
    n_days: int = 30
    offtopic_rate: float = 0.06
    malformed_rate: float = 0.004
    duplicate_rate: float = 0.003
    retweet_rate: float = 0.22
    reply_rate: float = 0.10
    dangling_reply_rate: float = 0.01
    url_rate: float = 0.30
    misinfo_url_rate: float = 0.035
    coords_rate: float = 0.05
    place_rate: float = 0.12
    verified_rate: float = 0.07


def generate_corpus(out_dir: str, params: Optional[SynthParams] = None) -> list[str]:
    """Write shard files corpus_000.ndjson.. under out_dir; returns paths."""
    p = params or SynthParams()
    rng = random.Random(p.seed)
    os.makedirs(out_dir, exist_ok=True)

    start_ts = parse_timestamp(p.start_day)
    span = p.n_days * 86400

    n_users = max(p.n_records // 3, 10)
    user_verified = [rng.random() < p.verified_rate for _ in range(n_users)]
    user_location = [_PROFILE_LOCATIONS[rng.randrange(len(_PROFILE_LOCATIONS))]
                     for _ in range(n_users)]

    # sources eligible for later retweet/reply engagement
    recent: list[dict] = []
    lines: list[str] = []
    next_id = 100_000_000

    def make_user() -> dict:
        u = rng.randrange(n_users)
        user = {"id_str": str(1000 + u), "screen_name": f"user{u}",
                "verified": user_verified[u]}
        if user_location[u]:
            user["location"] = user_location[u]
        return user

    def make_base(ts: int, lang: str, offtopic: bool) -> dict:
        nonlocal next_id
        next_id += 1
        phrases = _OFFTOPIC_PHRASES if offtopic else _TOPIC_PHRASES
        text = phrases[rng.randrange(len(phrases))]
        text = f"{text} {_FILLERS[rng.randrange(len(_FILLERS))]}"
        hashtags = []
        if not offtopic and rng.random() < 0.75:
            n_tags = 1 + (rng.random() < 0.4)
            for _ in range(n_tags):
                # rising tags get likelier late in the window
                day_frac = (ts - start_ts) / span
                if rng.random() < 0.15 * day_frac:
                    tag = _RISING_HASHTAGS[rng.randrange(len(_RISING_HASHTAGS))]
                else:
                    tag = _HASHTAG_POOL[rng.randrange(len(_HASHTAG_POOL))]
                if tag not in hashtags:
                    hashtags.append(tag)
            text += "".join(f" #{t}" for t in hashtags)
        urls = []
        if not offtopic and rng.random() < p.url_rate:
            if rng.random() < p.misinfo_url_rate:
                domain = _MISINFO_DOMAINS[rng.randrange(len(_MISINFO_DOMAINS))]
            else:
                domain = _NEWS_DOMAINS[rng.randrange(len(_NEWS_DOMAINS))]
            urls.append(f"https://{domain}/story/{next_id % 9973}")
            text += " https://t.co/xyz"
        obj = {
            "id_str": str(next_id),
            "created_at": iso_ts(ts),
            "text": text,
            "lang": lang,
            "user": make_user(),
            "entities": {
                "hashtags": [{"text": t} for t in hashtags],
                "urls": [{"expanded_url": u} for u in urls],
            },
        }
        if rng.random() < p.coords_rate:
            country = ("US", "GB", "IN", "CA", "NG", "AU", "FR", "DE")[rng.randrange(8)]
            lat, lon = _COUNTRY_COORDS[country]
            obj["coordinates"] = {"coordinates": [
                round(lon + rng.uniform(-3, 3), 4),
                round(lat + rng.uniform(-3, 3), 4)]}
        elif rng.random() < p.place_rate:
            country, name = _PLACES[rng.randrange(len(_PLACES))]
            obj["place"] = {"country_code": country, "full_name": name}
        return obj

    for _ in range(p.n_records):
        roll = rng.random()
        if roll < p.malformed_rate:
            lines.append('{"id_str": "broken"')
            continue
        if roll < p.malformed_rate + p.duplicate_rate and lines:
            lines.append(lines[rng.randrange(len(lines))])
            continue

        ts = start_ts + rng.randrange(span)
        lang = _LANGS[rng.randrange(len(_LANGS))]
        offtopic = rng.random() < p.offtopic_rate
        kind = rng.random()
        if kind < p.retweet_rate and recent:
            if rng.random() < 0.3:
                # source observed only through the embedded object, never as
                # its own stream record (cascades must still root at it)
                parent = make_base(max(start_ts, ts - 3600), "en", False)
            else:
                parent = recent[rng.randrange(len(recent))]
            obj = make_base(max(ts, _ts_of(parent) + 60), lang, offtopic)
            obj["text"] = f"RT @{parent['user']['screen_name']}: {parent['text']}"[:280]
            obj["entities"] = parent["entities"]
            obj["retweeted_status"] = parent
        elif kind < p.retweet_rate + p.reply_rate and recent:
            parent = recent[rng.randrange(len(recent))]
            obj = make_base(max(ts, _ts_of(parent) + 60), lang, offtopic)
            if rng.random() < p.dangling_reply_rate:
                obj["in_reply_to_status_id_str"] = str(999_000_000 + rng.randrange(10_000))
            else:
                obj["in_reply_to_status_id_str"] = parent["id_str"]
        else:
            obj = make_base(ts, lang, offtopic)
            if len(recent) < 5000:
                recent.append(obj)
            elif rng.random() < 0.02:
                recent[rng.randrange(len(recent))] = obj
        lines.append(json.dumps(obj, separators=(",", ":")))

    paths = []
    per_file = (len(lines) + p.n_files - 1) // p.n_files
    for j in range(p.n_files):
        chunk = lines[j * per_file:(j + 1) * per_file]
        path = os.path.join(out_dir, f"corpus_{j:03d}.ndjson")
        with open(path, "wt", encoding="utf-8") as fh:
            for line in chunk:
                fh.write(line)
                fh.write("\n")
        paths.append(path)
    return paths


def _ts_of(obj: dict) -> int:
    return parse_timestamp(obj["created_at"])
