import math
import random

import pytest

from tweetscope.config import SentimentConfig, packaged_data
from tweetscope.sentiment import (POLICY_TAG_SETS, SentimentLexicon,
                                  aggregate_sentiment, load_lexicon,
                                  policy_sentiment, score_text, tokenize)

from conftest import MARCH1, geo_index_for, mk_tweet, write_store

LEX = SentimentLexicon(
    valences={"good": 1.9, "bad": -2.5, "great": 3.1, "terrible": -3.0},
    boosters={"very": 0.293, "slightly": -0.293},
    negators=frozenset({"not", "never", "no", "isn't"}),
)


class TestScoreText:
    def test_empty_text_neutral(self):
        s = score_text(LEX, "")
        assert s.compound == 0.0 and s.label == "neutral"

    def test_good_hand_value(self):
        s = score_text(LEX, "good")
        expected = 1.9 / math.sqrt(1.9 ** 2 + 15)
        assert s.compound == pytest.approx(expected, abs=1e-12)
        assert s.compound == pytest.approx(0.440, abs=1e-3)
        assert s.label == "positive"

    def test_negation_hand_value(self):
        s = score_text(LEX, "not good")
        raw = 1.9 * -0.74
        expected = raw / math.sqrt(raw * raw + 15)
        assert s.raw_sum == pytest.approx(raw, abs=1e-12)
        assert s.compound == pytest.approx(expected, abs=1e-12)
        assert s.compound == pytest.approx(-0.341, abs=1e-3)
        assert s.label == "negative"

    def test_negator_window_three_tokens(self):
        assert score_text(LEX, "not good").compound < 0
        assert score_text(LEX, "not so very good").compound < 0
        # negator four tokens back is out of the window
        assert score_text(LEX, "not a b c good").compound > 0

    def test_booster_immediately_preceding(self):
        base = score_text(LEX, "good").raw_sum
        boosted = score_text(LEX, "very good").raw_sum
        assert boosted == pytest.approx(base + 0.293, abs=1e-12)
        dampened = score_text(LEX, "slightly good").raw_sum
        assert dampened == pytest.approx(base - 0.293, abs=1e-12)

    def test_booster_toward_sign_for_negative(self):
        base = score_text(LEX, "bad").raw_sum
        assert score_text(LEX, "very bad").raw_sum == pytest.approx(base - 0.293)

    def test_booster_not_adjacent_ignored(self):
        base = score_text(LEX, "good").raw_sum
        assert score_text(LEX, "very much good").raw_sum == pytest.approx(base)

    def test_allcaps_boost(self):
        base = score_text(LEX, "good").raw_sum
        caps = score_text(LEX, "GOOD").raw_sum
        assert caps == pytest.approx(base + 0.733, abs=1e-12)
        neg = score_text(LEX, "BAD").raw_sum
        assert neg == pytest.approx(-2.5 - 0.733, abs=1e-12)

    def test_sign_flip_property(self):
        for token, valence in (("good", 1.9), ("great", 3.1)):
            plain = score_text(LEX, token)
            flipped = score_text(LEX, f"not {token}")
            assert plain.label == "positive"
            assert flipped.label == "negative"

    def test_monotone_append_positive(self):
        rng = random.Random(11)
        words = ["good", "bad", "great", "terrible", "stuff", "thing"]
        for _ in range(100):
            text = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 8)))
            before = score_text(LEX, text).raw_sum
            after = score_text(LEX, text + " good").raw_sum
            assert after >= before - 1e-12

    def test_compound_bounded_fuzz(self):
        rng = random.Random(12)
        alphabet = list(LEX.valences) + list(LEX.boosters) + list(LEX.negators) + \
            ["meh", "xyz", "!!!", "GOOD", "BAD", "1234"]
        for _ in range(2000):
            text = " ".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 30)))
            s = score_text(LEX, text)
            assert -1.0 <= s.compound <= 1.0

    def test_label_scale_invariance_of_sign(self):
        doubled = SentimentLexicon(
            valences={k: 2 * v for k, v in LEX.valences.items()},
            boosters=LEX.boosters, negators=LEX.negators)
        rng = random.Random(13)
        words = list(LEX.valences) + ["not", "very", "meh"]
        for _ in range(200):
            text = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 10)))
            s1 = score_text(LEX, text)
            s2 = score_text(doubled, text)
            assert (s1.raw_sum > 0) == (s2.raw_sum > 0)
            assert (s1.raw_sum < 0) == (s2.raw_sum < 0)

    def test_unknown_tokens_contribute_zero(self):
        assert score_text(LEX, "lorem ipsum dolor").compound == 0.0

    def test_tokenize_keeps_contractions(self):
        assert tokenize("isn't good, really!") == ["isn't", "good", "really"]

    def test_contraction_negator(self):
        s = score_text(LEX, "isn't good")
        assert s.label == "negative"

    def test_thresholds(self):
        cfg = SentimentConfig()
        tiny = SentimentLexicon(valences={"meh": 0.19}, boosters={}, negators=frozenset())
        s = score_text(tiny, "meh")   # compound ~0.049 < 0.05
        assert s.label == "neutral"


class TestLoadLexicon:
    def test_packaged_lexicon(self):
        lex = load_lexicon(packaged_data("lexicon", "valences.tsv"),
                           packaged_data("lexicon", "boosters.tsv"),
                           packaged_data("lexicon", "negators.txt"))
        assert lex.valences["good"] == pytest.approx(1.9)
        assert "very" in lex.boosters
        assert "not" in lex.negators
        assert not (set(lex.valences) & lex.negators)

    def test_rejects_valence_negator_overlap(self, tmp_path):
        val = tmp_path / "v.tsv"
        val.write_text("not\t1.0\n")
        neg = tmp_path / "n.txt"
        neg.write_text("not\n")
        with pytest.raises(ValueError):
            load_lexicon(str(val), None, str(neg))


class TestAggregate:
    def build(self, tmp_path):
        tweets = [
            mk_tweet(1, text="good", lang="en"),
            mk_tweet(2, text="bad", lang="en"),
            mk_tweet(3, text="meh", lang="en"),
            mk_tweet(4, text="good good", lang="es"),      # non-English skipped
            mk_tweet(5, text="good", lang="en"),           # unresolved country
        ]
        store = write_store(tmp_path, tweets)
        geo = geo_index_for(store, {1: ("US", None), 2: ("US", None),
                                    3: ("US", None), 4: ("US", None)})
        return store, geo

    def test_mean_and_percentages(self, tmp_path):
        store, geo = self.build(tmp_path)
        groups = aggregate_sentiment(store, geo, LEX)
        assert len(groups) == 1
        g = groups[0]
        assert g.country == "US" and g.n == 3
        row = g.to_dict()
        assert row["pct_pos"] + row["pct_neg"] + row["pct_neu"] == pytest.approx(100.0)
        expected_mean = (score_text(LEX, "good").compound
                         + score_text(LEX, "bad").compound) / 3
        assert row["mean_compound"] == pytest.approx(expected_mean)

    def test_balanced_pair(self, tmp_path):
        lex = SentimentLexicon(valences={"up": 1.9, "down": -1.9},
                               boosters={}, negators=frozenset())
        tweets = [mk_tweet(1, text="up"), mk_tweet(2, text="down")]
        store = write_store(tmp_path, tweets)
        geo = geo_index_for(store, {1: ("GB", None), 2: ("GB", None)})
        row = aggregate_sentiment(store, geo, lex)[0].to_dict()
        assert row["mean_compound"] == pytest.approx(0.0, abs=1e-12)
        assert row["pct_pos"] == 50.0 and row["pct_neg"] == 50.0

    def test_single_neutral(self, tmp_path):
        store = write_store(tmp_path, [mk_tweet(1, text="whatever")])
        geo = geo_index_for(store, {1: ("FR", None)})
        row = aggregate_sentiment(store, geo, LEX)[0].to_dict()
        assert row["pct_neu"] == 100.0

    def test_groups_sorted_and_day_split(self, tmp_path):
        tweets = [
            mk_tweet(1, text="good", ts=MARCH1),
            mk_tweet(2, text="good", ts=MARCH1 + 86400),
            mk_tweet(3, text="good", ts=MARCH1),
        ]
        store = write_store(tmp_path, tweets)
        geo = geo_index_for(store, {1: ("US", None), 2: ("US", None), 3: ("AU", None)})
        groups = aggregate_sentiment(store, geo, LEX)
        keys = [(g.country, g.day) for g in groups]
        assert keys == sorted(keys)
        assert len(groups) == 3


class TestPolicySentiment:
    def build(self, tmp_path):
        tweets = [
            mk_tweet(1, text="#WFHlife is good", hashtags=["wfhlife"]),
            mk_tweet(2, text="#socialdistancing rocks good good",
                     hashtags=["socialdistancing"]),
            mk_tweet(3, text="working from home mentioned, no tag"),
            mk_tweet(4, text="#workfromhome terrible bad", hashtags=["workfromhome"]),
        ]
        return write_store(tmp_path, tweets)

    def test_case_insensitive_hashtag_match(self, tmp_path):
        store = self.build(tmp_path)
        out = policy_sentiment(store, LEX, POLICY_TAG_SETS["work_from_home"])
        matched_ids = {e["tweet_id"] for e in out.top_positive + out.top_negative}
        assert "1" in matched_ids            # #WFHlife matched via parsed tags
        assert "3" not in matched_ids        # raw-text mention is not a tag

    def test_positive_ranking(self, tmp_path):
        store = self.build(tmp_path)
        out = policy_sentiment(store, LEX, ["socialdistancing"])
        assert out.top_positive
        assert out.top_positive[0]["tweet_id"] == "2"

    def test_no_matches_empty(self, tmp_path):
        store = self.build(tmp_path)
        out = policy_sentiment(store, LEX, ["nosuchtag"])
        assert out.distribution == []
        assert out.top_positive == [] and out.top_negative == []

    def test_duplicate_keyword_collapsed(self):
        assert len(POLICY_TAG_SETS["work_from_home"]) == 4
