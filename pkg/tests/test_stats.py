"""Corpus statistics."""

from __future__ import annotations

import json
from pathlib import Path

from counterarg.corpus import load_corpus_dir
from counterarg.standoff import Lang
from counterarg.stats import corpus_stats, fragment_word_count

from markup import tweet_from_markup

FIXTURES = Path(__file__).parent / "fixtures" / "corpus30"


def test_empty_corpus_all_zero():
    report = corpus_stats([])
    assert report.per_language == {}
    assert report.to_dict() == {}


def test_fragment_word_count_per_fragment():
    text = "robots are greedy and hoard coins"
    # two fragments, split applied inside each one
    assert fragment_word_count(text, ((0, 17), (22, 33))) == 5
    assert fragment_word_count(text, ((0, 6),)) == 1
    # partial word still counts as one token
    assert fragment_word_count(text, ((0, 3),)) == 1


def test_single_tweet_counts():
    t = tweet_from_markup(
        "one", "[J [COL robots] are [PROP greedy]] so [C ban them now]",
        j_type="fact", c_type="policy", cns={"A": "x", "C": "y"})
    s = corpus_stats([t]).per_language["en"]
    assert s.n_tweets == 1
    assert s.n_argumentative == 1
    assert s.n_collective_property == 1
    assert s.n_pivot == 0
    assert s.component_words["Justification"] == 3
    assert s.component_words["Conclusion"] == 3
    assert s.component_words["Collective"] == 1
    assert s.conclusion_types == {"fact": 0, "value": 0, "policy": 1}
    assert s.counter_narratives == {"A": 1, "B": 0, "C": 1, "D": 0}
    assert s.total_words == 7


def test_languages_partition():
    en = tweet_from_markup("e1", "just a headline", lang=Lang.EN)
    es = tweet_from_markup("s1", "solo un titular", lang=Lang.ES)
    report = corpus_stats([en, es])
    assert report.per_language["en"].n_tweets == 1
    assert report.per_language["es"].n_tweets == 1


def test_percentages_sum_to_100():
    corpus = load_corpus_dir(FIXTURES)
    report = corpus_stats(corpus)
    for s in report.per_language.values():
        assert abs(s.pct_argumentative() + s.pct_non_argumentative() - 100.0) < 0.1
        for dist in (s.conclusion_types, s.justification_types):
            total = sum(dist.values())
            assert total == s.n_argumentative  # all arg tweets typed in fixture


def test_bundled_fixture_matches_ground_truth():
    corpus = load_corpus_dir(FIXTURES)
    report = corpus_stats(corpus)
    truth = json.loads((FIXTURES / "ground_truth.json").read_text())
    for lang, expected in truth.items():
        s = report.per_language[lang]
        assert s.n_tweets == expected["tweets"]
        assert s.n_argumentative == expected["argumentative"]
        assert s.n_non_argumentative == expected["non_argumentative"]
        assert s.n_collective_property == expected["collective_property"]
        assert s.n_pivot == expected["pivot"]
        assert s.total_words == expected["total_words"]
        assert s.conclusion_types == expected["conclusion_types"]
        assert s.justification_types == expected["justification_types"]
        assert s.counter_narratives == expected["counter_narratives"]
        for name, words in expected["component_words"].items():
            assert s.component_words[name] == words, name


def test_stats_survive_serialization_round_trip(tmp_path):
    from counterarg.corpus import load_corpus_json, save_corpus

    corpus = load_corpus_dir(FIXTURES)
    save_corpus(corpus, tmp_path / "corpus.json")
    reloaded = load_corpus_json(tmp_path / "corpus.json")
    assert corpus_stats(reloaded).to_dict() == corpus_stats(corpus).to_dict()


def test_report_renders():
    corpus = load_corpus_dir(FIXTURES)
    report = corpus_stats(corpus)
    text = report.to_text()
    assert "[en]" in text and "[es]" in text
    assert "argumentative        22 (73.3%)" in text
    payload = json.loads(report.to_json())
    assert payload["en"]["tweets"] == 30
