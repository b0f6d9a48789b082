"""Tokenization and span-to-token projection."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from counterarg.scheme import ComponentKind
from counterarg.standoff import Document
from counterarg.tokens import (
    IdMismatchError,
    is_punct_token,
    project,
    to_dataset,
    tokenize,
)

from markup import tweet_from_markup


def surfaces(text):
    return [t.surface for t in tokenize(Document(id="t", text=text)).tokens]


class TestTokenize:
    def test_basic_splitting(self):
        assert surfaces("No to #EU camps.") == ["No", "to", "#EU", "camps", "."]

    def test_empty_text(self):
        assert surfaces(" \t ") == []

    def test_urls_kept_whole(self):
        assert surfaces("https://t.co/x y") == ["https://t.co/x", "y"]
        assert surfaces("see www.example.org!") == ["see", "www.example.org!"]

    def test_mentions_kept_whole(self):
        assert surfaces("@user1: hi") == ["@user1:", "hi"]

    def test_leading_and_trailing_punct_split(self):
        assert surfaces('"walls," he said') == ['"', "walls", ",", '"', "he", "said"]

    def test_inner_punct_kept(self):
        assert surfaces("don't re-enter") == ["don't", "re-enter"]

    def test_offsets_match_surfaces(self):
        doc = Document(id="t", text="🤖 alert: robots (again)!")
        for token in tokenize(doc).tokens:
            assert doc.text[token.start:token.end] == token.surface

    def test_gap_reconstruction(self):
        text = "No  to   #EU camps."
        doc = Document(id="t", text=text)
        tokens = tokenize(doc).tokens
        rebuilt = []
        pos = 0
        for t in tokens:
            rebuilt.append(text[pos:t.start])
            rebuilt.append(t.surface)
            pos = t.end
        rebuilt.append(text[pos:])
        assert "".join(rebuilt) == text

    def test_is_punct_token(self):
        assert is_punct_token(".")
        assert is_punct_token('"...')
        assert not is_punct_token("#EU")
        assert not is_punct_token("a.")


class TestProject:
    def test_direct_containment(self):
        t = tweet_from_markup("p", "[C Build walls] now", c_type="policy")
        tok = tokenize(t.doc)
        assert project(t, tok, ComponentKind.CONCLUSION).labels == (1, 1, 0)

    def test_partial_overlap_labels_token(self):
        # fragment ends mid-token: "wal" out of "walls"
        t = tweet_from_markup("p", "Build walls now")
        t.argumentative = True
        from counterarg.scheme import Component
        t.components.append(Component(ComponentKind.CONCLUSION, ((6, 9),)))
        tok = tokenize(t.doc)
        assert project(t, tok, ComponentKind.CONCLUSION).labels == (0, 1, 0)

    def test_absent_category_all_zero(self):
        t = tweet_from_markup("p", "[J a claim] so [C a demand]",
                              j_type="fact", c_type="policy")
        tok = tokenize(t.doc)
        assert project(t, tok, ComponentKind.PROPERTY).labels == (0,) * len(tok.tokens)

    def test_non_argumentative_all_zero(self):
        t = tweet_from_markup("p", "just a headline")
        tok = tokenize(t.doc)
        for kind in ComponentKind:
            assert sum(project(t, tok, kind).labels) == 0

    def test_pivot_merged_and_per_side(self):
        t = tweet_from_markup(
            "p", "[J robots [PJ hoard] coins] so [C ban the [PC hoard]]",
            j_type="fact", c_type="policy")
        tok = tokenize(t.doc)
        merged = project(t, tok, "Pivot").labels
        j_side = project(t, tok, ComponentKind.PIVOT_JUSTIFICATION_SIDE).labels
        c_side = project(t, tok, ComponentKind.PIVOT_CONCLUSION_SIDE).labels
        assert merged == tuple(max(a, b) for a, b in zip(j_side, c_side))
        assert sum(j_side) == 1 and sum(c_side) == 1

    def test_id_mismatch(self):
        t = tweet_from_markup("a", "[C x y]", c_type="fact")
        other = tokenize(Document(id="b", text="x y"))
        with pytest.raises(IdMismatchError):
            project(t, other, ComponentKind.CONCLUSION)

    @given(st.integers(min_value=0, max_value=10),
           st.integers(min_value=11, max_value=24))
    @settings(max_examples=30, deadline=None)
    def test_projection_monotone(self, start, end):
        from counterarg.scheme import AnnotatedTweet, Component

        doc = Document(id="m", text="one two three four five six")
        smaller = AnnotatedTweet(doc=doc, argumentative=True, components=[
            Component(ComponentKind.CONCLUSION, ((start, end),))])
        bigger = AnnotatedTweet(doc=doc, argumentative=True, components=[
            Component(ComponentKind.CONCLUSION, ((max(0, start - 2), end + 2),))])
        tok = tokenize(doc)
        small_labels = project(smaller, tok, ComponentKind.CONCLUSION).labels
        big_labels = project(bigger, tok, ComponentKind.CONCLUSION).labels
        assert all(b >= s for s, b in zip(small_labels, big_labels))


class TestToDataset:
    def test_conditioning_indicators(self):
        t = tweet_from_markup(
            "c", "[J [COL robots] are [PROP greedy]] so [C ban them]",
            j_type="fact", c_type="policy")
        ds = to_dataset([t], ComponentKind.COLLECTIVE,
                        conditioning=(ComponentKind.PROPERTY,))
        assert ds.conditioning == ("Property",)
        rows = ds.tweets[0].rows
        by_surface = {r.surface: r for r in rows}
        assert by_surface["robots"].label == 1
        assert by_surface["robots"].indicators == (0,)
        assert by_surface["greedy"].indicators == (1,)

    def test_two_conditioning_columns(self):
        t = tweet_from_markup(
            "c", "[J robots [PJ hoard]] so [C ban the [PC hoard]]",
            j_type="fact", c_type="policy")
        ds = to_dataset([t], "Pivot",
                        conditioning=(ComponentKind.JUSTIFICATION,
                                      ComponentKind.CONCLUSION))
        for row in ds.tweets[0].rows:
            assert len(row.indicators) == 2

    def test_unconditioned_no_columns(self):
        t = tweet_from_markup("c", "[C ban them]", c_type="policy")
        ds = to_dataset([t], ComponentKind.CONCLUSION)
        assert all(r.indicators == () for r in ds.tweets[0].rows)

    def test_include_punct_flag(self):
        t = tweet_from_markup("c", "[C ban them now.]", c_type="policy")
        with_punct = to_dataset([t], ComponentKind.CONCLUSION)
        without = to_dataset([t], ComponentKind.CONCLUSION, include_punct=False)
        assert with_punct.n_tokens() == 4
        assert without.n_tokens() == 3

    def test_conll_serialization(self):
        t1 = tweet_from_markup("c1", "[C ban them]", c_type="policy")
        t2 = tweet_from_markup("c2", "plain words")
        ds = to_dataset([t1, t2], ComponentKind.CONCLUSION,
                        conditioning=(ComponentKind.CONCLUSION,))
        text = ds.to_conll()
        assert text == ("ban\t1\t1\nthem\t1\t1\n\nplain\t0\t0\nwords\t0\t0\n")
