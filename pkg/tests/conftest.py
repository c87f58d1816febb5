import json

import numpy as np
import pytest

from tweetscope.geo import GeoIndex, METHOD_PLACE
from tweetscope.store import CorpusStore, IngestReport, StoreWriter
from tweetscope.tweets import Tweet, UserRef, parse_timestamp

MARCH1 = parse_timestamp("2020-03-01")


def mk_tweet(tweet_id, ts=MARCH1, text="covid19 update", lang="en",
             user_id=None, screen_name=None, verified=False,
             profile_location=None, parent_id=None, parent_kind=None,
             hashtags=(), urls=(), coordinates=None, place_country=None,
             place_name=None, synthetic=False) -> Tweet:
    return Tweet(
        id=tweet_id,
        created_at=ts,
        text=text,
        lang=lang,
        user=UserRef(user_id if user_id is not None else tweet_id * 10,
                     screen_name or f"u{tweet_id}", verified, profile_location),
        parent_id=parent_id,
        parent_kind=parent_kind,
        hashtags=list(hashtags),
        urls=list(urls),
        coordinates=coordinates,
        place_country=place_country,
        place_name=place_name,
        synthetic=synthetic,
    )


def write_store(tmp_path, tweets) -> CorpusStore:
    writer = StoreWriter(str(tmp_path / "store"))
    for tw in tweets:
        writer.add(tw.to_record())
    return writer.finish(IngestReport(stored=len(tweets), parsed=len(tweets),
                                      read=len(tweets)))


def geo_index_for(store, by_id=None) -> GeoIndex:
    """Build a GeoIndex directly: by_id maps tweet id -> (country, us_state)
    or (country, us_state, method)."""
    by_id = by_id or {}
    ids = store.column("ids")
    n = len(store)
    methods = np.zeros(n, dtype=np.uint8)
    countries = [None] * n
    states = [None] * n
    for row in range(n):
        entry = by_id.get(int(ids[row]))
        if entry is None:
            continue
        country, state = entry[0], entry[1]
        method = entry[2] if len(entry) > 2 else METHOD_PLACE
        countries[row] = country
        states[row] = state
        methods[row] = method
    return GeoIndex(ids, methods, countries, states)


def write_catalog_csv(path, rows):
    """rows: (domain, provider, 'tag1;tag2')"""
    with open(path, "wt", encoding="utf-8") as fh:
        fh.write("domain,provider,tags\n")
        for domain, provider, tags in rows:
            fh.write(f"{domain},{provider},{tags}\n")
    return str(path)


def write_ndjson(path, objects):
    with open(path, "wt", encoding="utf-8") as fh:
        for obj in objects:
            fh.write(obj if isinstance(obj, str) else json.dumps(obj))
            fh.write("\n")
    return str(path)


@pytest.fixture
def tweet_factory():
    return mk_tweet
