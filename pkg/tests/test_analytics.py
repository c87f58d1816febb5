import math
import random

import pytest

from tweetscope.analytics import (distinctive_hashtags, hashtag_tfidf,
                                  misinfo_volume_series, relative_volume,
                                  smoothed_idf, source_breakdown)
from tweetscope.catalog import (CATEGORIES, CLICKBAIT, CONSPIRACY, OTHERS,
                                POLITICAL_BIASED, UNRELIABLE, load_catalog)
from tweetscope.graph import build_engagement_graph, extract_cascades, label_cascades
from tweetscope.tweets import RETWEET

from conftest import MARCH1, mk_tweet, write_catalog_csv, write_store

DAY = 86400

CATALOG_ROWS = [
    ("unreliable.example", "zimdars", "fake"),
    ("conspiracy.example", "zimdars", "conspiracy"),
    ("clickbait.example", "zimdars", "clickbait"),
    ("political.example", "zimdars", "bias"),
    ("combo.example", "zimdars", "fake;conspiracy"),
]


def build_cascades(tmp_path, roots, responses=()):
    """roots: (id, day_offset, hashtags, urls); responses: (id, parent_id)."""
    tweets = [
        mk_tweet(tid, ts=MARCH1 + off * DAY, hashtags=tags, urls=urls)
        for tid, off, tags, urls in roots
    ]
    tweets += [
        mk_tweet(tid, ts=MARCH1 + 20 * DAY, parent_id=pid, parent_kind=RETWEET)
        for tid, pid in responses
    ]
    store = write_store(tmp_path, tweets)
    catalog = load_catalog([write_catalog_csv(tmp_path / "cat.csv", CATALOG_ROWS)])
    cascades = extract_cascades(build_engagement_graph(store), store)
    label_cascades(cascades, catalog)
    return cascades


class TestVolumeSeries:
    def test_multi_label_counts_in_both(self, tmp_path):
        cs = build_cascades(tmp_path, [(1, 2, [], ["https://combo.example/a"])])
        series = {s.category: s for s in misinfo_volume_series(cs, (cs.store.day_min, cs.store.day_min))}
        assert series[UNRELIABLE].counts == [1]
        assert series[CONSPIRACY].counts == [1]
        assert series[CLICKBAIT].counts == [0]

    def test_empty_cascades(self, tmp_path):
        cs = build_cascades(tmp_path, [(1, 0, [], [])])
        series = misinfo_volume_series(cs)
        assert len(series) == 4
        assert all(sum(s.counts) == 0 for s in series)

    def test_sum_over_days(self, tmp_path):
        roots = [(i, off, [], ["https://unreliable.example/x"])
                 for i, off in ((1, 0), (2, 0), (3, 1))]
        cs = build_cascades(tmp_path, roots)
        series = {s.category: s for s in misinfo_volume_series(cs)}
        assert sum(series[UNRELIABLE].counts) == 3
        assert series[UNRELIABLE].counts[0] == 2

    def test_zero_filled_contiguous_range(self, tmp_path):
        cs = build_cascades(tmp_path, [
            (1, 0, [], ["https://unreliable.example/x"]),
            (2, 6, [], ["https://unreliable.example/y"]),
        ])
        series = {s.category: s for s in misinfo_volume_series(cs)}
        assert len(series[UNRELIABLE].counts) == 7
        assert series[UNRELIABLE].counts == [1, 0, 0, 0, 0, 0, 1]

    def test_volume_conservation(self, tmp_path):
        rng = random.Random(3)
        domains = ["unreliable", "conspiracy", "clickbait", "political", "combo"]
        roots = []
        for i in range(1, 60):
            if rng.random() < 0.5:
                urls = [f"https://{rng.choice(domains)}.example/a"]
            else:
                urls = []
            roots.append((i, rng.randrange(5), [], urls))
        cs = build_cascades(tmp_path, roots)
        series = {s.category: s for s in misinfo_volume_series(cs)}
        for j, cat in enumerate(CATEGORIES):
            n_roots = sum(1 for i in range(len(cs))
                          if cat in cs.categories_of(i))
            assert sum(series[cat].counts) == n_roots


class TestSourceBreakdown:
    def test_hand_count(self, tmp_path):
        roots = [(1, 0, [], ["https://unreliable.example/1"]),
                 (2, 0, [], ["https://unreliable.example/2"]),
                 (3, 0, [], ["https://unreliable.example/3"]),
                 (4, 0, [], ["https://clickbait.example/1"])]
        cs = build_cascades(tmp_path, roots)
        assert source_breakdown(cs) == [("unreliable.example", 3),
                                        ("clickbait.example", 1)]

    def test_tie_breaks_lexicographic(self, tmp_path):
        roots = [(1, 0, [], ["https://clickbait.example/1"]),
                 (2, 0, [], ["https://unreliable.example/2"])]
        cs = build_cascades(tmp_path, roots)
        assert source_breakdown(cs) == [("clickbait.example", 1),
                                        ("unreliable.example", 1)]

    def test_empty(self, tmp_path):
        cs = build_cascades(tmp_path, [(1, 0, [], [])])
        assert source_breakdown(cs) == []

    def test_top_n(self, tmp_path):
        roots = [(i, 0, [], [f"https://unreliable.example/{i}"]) for i in (1,)]
        roots += [(2, 0, [], ["https://clickbait.example/x"])]
        cs = build_cascades(tmp_path, roots)
        assert len(source_breakdown(cs, top_n=1)) == 1


class TestRelativeVolume:
    def test_size_four_cascade(self, tmp_path):
        cs = build_cascades(
            tmp_path,
            [(1, 0, [], ["https://unreliable.example/s"])],
            responses=[(2, 1), (3, 1), (4, 1)])
        rv = relative_volume(cs)
        assert rv[UNRELIABLE] == {"n_sources": 1, "n_responses": 3,
                                  "response_ratio": 3.0, "empty": False}

    def test_empty_category_flagged(self, tmp_path):
        cs = build_cascades(tmp_path, [(1, 0, [], [])])
        rv = relative_volume(cs)
        assert rv[CONSPIRACY]["empty"] is True
        assert rv[CONSPIRACY]["response_ratio"] == 0.0

    def test_others_bucket(self, tmp_path):
        cs = build_cascades(
            tmp_path,
            [(1, 0, [], ["https://unreliable.example/s"]), (5, 0, [], [])],
            responses=[(6, 5)])
        rv = relative_volume(cs)
        assert rv[OTHERS] == {"n_sources": 1, "n_responses": 1,
                              "response_ratio": 1.0, "empty": False}

    def test_qualitative_fewer_shares_for_unreliable(self, tmp_path):
        # unreliable roots get no responses; others get two each
        roots = [(1, 0, [], ["https://unreliable.example/a"]),
                 (2, 0, [], []), (3, 0, [], [])]
        cs = build_cascades(tmp_path, roots,
                            responses=[(10, 2), (11, 2), (12, 3), (13, 3)])
        rv = relative_volume(cs)
        assert rv[UNRELIABLE]["response_ratio"] < rv[OTHERS]["response_ratio"]


# --- brute-force TF-IDF oracle ------------------------------------------------

def brute_force_tfidf(docs: dict[str, list[str]]) -> dict[str, dict[str, float]]:
    """docs: category -> concatenated hashtag list. Independent of the
    implementation under test."""
    out = {}
    n_docs = len(docs)
    for cat, tags in docs.items():
        scores = {}
        for tag in set(tags):
            tf = sum(1 for t in tags if t == tag)
            df = sum(1 for other in docs.values() if tag in other)
            idf = math.log((1 + n_docs) / (1 + df)) + 1.0
            scores[tag] = tf * idf
        out[cat] = scores
    return out


class TestHashtagTfidf:
    def test_hand_example_single_category(self, tmp_path):
        # tf=3 in exactly one category -> score = 3*(ln(5/2)+1)
        roots = [(1, 0, ["vax", "vax"], ["https://unreliable.example/a"]),
                 (2, 0, ["vax"], ["https://unreliable.example/b"]),
                 (3, 0, ["lockdown"], ["https://conspiracy.example/c"])]
        cs = build_cascades(tmp_path, roots)
        table = hashtag_tfidf(cs)
        rows = {r.hashtag: r for r in table.ranked[UNRELIABLE]}
        expected = 3 * (math.log(5 / 2) + 1)
        assert rows["vax"].tf == 3
        assert rows["vax"].score == pytest.approx(expected, abs=1e-9)
        assert rows["vax"].score == pytest.approx(5.749, abs=1e-3)

    def test_smoothing_floor_for_ubiquitous_tag(self, tmp_path):
        roots = [
            (1, 0, ["common"], ["https://unreliable.example/a"]),
            (2, 0, ["common"], ["https://conspiracy.example/b"]),
            (3, 0, ["common"], ["https://clickbait.example/c"]),
            (4, 0, ["common", "common"], ["https://political.example/d"]),
        ]
        cs = build_cascades(tmp_path, roots)
        table = hashtag_tfidf(cs)
        # df=4 of 4 docs: idf = ln(5/5)+1 = 1, score = tf
        row = {r.hashtag: r for r in table.ranked[POLITICAL_BIASED]}["common"]
        assert row.idf == pytest.approx(1.0, abs=1e-12)
        assert row.score == pytest.approx(row.tf, abs=1e-12)

    def test_empty_category_document(self, tmp_path):
        cs = build_cascades(tmp_path, [(1, 0, ["x"], ["https://unreliable.example/a"])])
        table = hashtag_tfidf(cs)
        assert table.ranked[CLICKBAIT] == []

    def test_matches_brute_force_on_random_fixtures(self, tmp_path):
        rng = random.Random(17)
        vocab = [f"tag{i}" for i in range(12)]
        domains = {UNRELIABLE: "unreliable", CONSPIRACY: "conspiracy",
                   CLICKBAIT: "clickbait", POLITICAL_BIASED: "political"}
        for trial in range(10):
            roots = []
            docs = {cat: [] for cat in CATEGORIES}
            for i in range(1, 30):
                cat = CATEGORIES[rng.randrange(4)]
                tags = [vocab[rng.randrange(len(vocab))]
                        for _ in range(rng.randrange(0, 4))]
                docs[cat].extend(tags)
                roots.append((i, 0, tags, [f"https://{domains[cat]}.example/x"]))
            d = tmp_path / f"t{trial}"
            d.mkdir()
            cs = build_cascades(d, roots)
            table = hashtag_tfidf(cs)
            expected = brute_force_tfidf(docs)
            for cat in CATEGORIES:
                got = {r.hashtag: r.score for r in table.ranked[cat]}
                assert set(got) == set(expected[cat])
                for tag, score in expected[cat].items():
                    assert got[tag] == pytest.approx(score, abs=1e-9)

    def test_ranking_stable(self, tmp_path):
        roots = [(1, 0, ["bbb", "aaa"], ["https://unreliable.example/a"])]
        cs = build_cascades(tmp_path, roots)
        table = hashtag_tfidf(cs)
        assert [r.hashtag for r in table.ranked[UNRELIABLE]] == ["aaa", "bbb"]


class TestDistinctiveHashtags:
    def make_table(self, ranked_names):
        """Build a CategoryScoreTable from {cat: [names best-first]}."""
        from tweetscope.analytics import CategoryScoreTable, ScoredHashtag
        table = CategoryScoreTable()
        for cat, names in ranked_names.items():
            table.ranked[cat] = [
                ScoredHashtag(name, len(names) - i, 1.0, float(len(names) - i))
                for i, name in enumerate(names)
            ]
        return table

    def test_exclusion_of_other_top_ten(self):
        ranked = {
            UNRELIABLE: ["shared", "u1", "u2"],
            CONSPIRACY: ["c1", "c2", "c3", "c4", "c5", "shared"],
            CLICKBAIT: [],
            POLITICAL_BIASED: [],
        }
        table = self.make_table(ranked)
        out = distinctive_hashtags(table, k=3, exclusion_depth=10)
        assert out[UNRELIABLE] == ["u1", "u2"]        # shared excluded
        assert "shared" not in out[CONSPIRACY]

    def test_below_exclusion_depth_not_excluded(self):
        ranked = {
            UNRELIABLE: ["deep"],
            CONSPIRACY: [f"c{i}" for i in range(10)] + ["deep"],  # rank 11
            CLICKBAIT: [],
            POLITICAL_BIASED: [],
        }
        table = self.make_table(ranked)
        out = distinctive_hashtags(table, k=5, exclusion_depth=10)
        assert "deep" in out[UNRELIABLE]

    def test_disjoint_vocabularies_plain_top_k(self):
        ranked = {
            UNRELIABLE: ["u1", "u2", "u3"],
            CONSPIRACY: ["c1", "c2"],
            CLICKBAIT: ["b1"],
            POLITICAL_BIASED: ["p1"],
        }
        table = self.make_table(ranked)
        out = distinctive_hashtags(table, k=2, exclusion_depth=10)
        assert out[UNRELIABLE] == ["u1", "u2"]
        assert out[CONSPIRACY] == ["c1", "c2"]

    def test_exhaustive_enumeration_matches_rule(self):
        rng = random.Random(23)
        vocab = [f"t{i}" for i in range(15)]
        for _ in range(30):
            ranked = {}
            for cat in CATEGORIES:
                pool = rng.sample(vocab, rng.randrange(0, len(vocab)))
                ranked[cat] = pool
            table = self.make_table(ranked)
            k, depth = rng.randrange(1, 6), rng.randrange(1, 6)
            out = distinctive_hashtags(table, k=k, exclusion_depth=depth)
            for cat in CATEGORIES:
                top_others = set()
                for other in CATEGORIES:
                    if other != cat:
                        top_others |= set(ranked[other][:depth])
                expected = [t for t in ranked[cat] if t not in top_others][:k]
                assert out[cat] == expected


class TestSmoothedIdf:
    def test_values(self):
        assert smoothed_idf(0, 4) == pytest.approx(math.log(5) + 1)
        assert smoothed_idf(4, 4) == pytest.approx(1.0)
