"""Tweet tokenization and projection of character spans onto per-token labels.

Per-token binary labelings are the shared currency of both the agreement
calculation and the sequence-tagging datasets: a token belongs to a category
when it overlaps any of the category's fragments by at least one character.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .scheme import AnnotatedTweet, ComponentKind, PIVOT_SIDES
from .standoff import Document

# Merged-pivot pseudo-category: both pivot sides as one binary label.
PIVOT_MERGED = "Pivot"


class IdMismatchError(Exception):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int


@dataclass(frozen=True)
class TokenizedTweet:
    tweet_id: str
    tokens: tuple[Token, ...]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass(frozen=True)
class TokenLabeling:
    tweet_id: str
    category: str
    labels: tuple[int, ...]


_CHUNK = re.compile(r"\S+")
_KEEP_WHOLE = re.compile(r"^(https?://|www\.|#\w|@\w)", re.IGNORECASE)


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def is_punct_token(surface: str) -> bool:
    return all(_is_punct_char(ch) for ch in surface)


def tokenize(doc: Document) -> TokenizedTweet:
    """Whitespace tokenization with leading/trailing punctuation split off.

    URLs, hashtags and @-mentions are kept whole, punctuation and all.
    Each split-off punctuation character becomes its own token. Offsets are
    preserved: every token surface equals its document slice, and joining
    surfaces with the original gaps reproduces the text.
    """
    tokens: list[Token] = []
    for match in _CHUNK.finditer(doc.text):
        chunk, start = match.group(), match.start()
        if _KEEP_WHOLE.match(chunk):
            tokens.append(Token(chunk, start, start + len(chunk)))
            continue
        left, right = 0, len(chunk)
        while left < right and _is_punct_char(chunk[left]):
            left += 1
        while right > left and _is_punct_char(chunk[right - 1]):
            right -= 1
        for i in range(left):
            tokens.append(Token(chunk[i], start + i, start + i + 1))
        if left < right:
            tokens.append(Token(chunk[left:right], start + left, start + right))
        for i in range(right, len(chunk)):
            tokens.append(Token(chunk[i], start + i, start + i + 1))
    return TokenizedTweet(tweet_id=doc.id, tokens=tuple(tokens))


def resolve_category(category: str | ComponentKind) -> tuple[str, tuple[ComponentKind, ...]]:
    """Normalize a category argument to (name, component kinds it covers)."""
    if isinstance(category, ComponentKind):
        return category.value, (category,)
    if category == PIVOT_MERGED:
        return PIVOT_MERGED, PIVOT_SIDES
    return category, (ComponentKind(category),)


def project(tweet: AnnotatedTweet, tok: TokenizedTweet,
            category: str | ComponentKind) -> TokenLabeling:
    """Binary labels over tokens: 1 iff the token overlaps the category.

    ``category`` may be a single component kind or ``"Pivot"`` for both pivot
    sides merged into one label. A tweet without the category yields all
    zeros; projection is monotone in the fragments.
    """
    if tweet.doc.id != tok.tweet_id:
        raise IdMismatchError(f"tweet {tweet.doc.id!r} vs tokens {tok.tweet_id!r}")
    name, kinds = resolve_category(category)
    spans = [frag for comp in tweet.components if comp.kind in kinds
             for frag in comp.fragments]
    labels = tuple(
        1 if any(t.start < e and s < t.end for s, e in spans) else 0
        for t in tok.tokens
    )
    return TokenLabeling(tweet_id=tok.tweet_id, category=name, labels=labels)


# ---------------------------------------------------------------------------
# Sequence datasets for token-level tagging
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TokenRow:
    surface: str
    label: int
    indicators: tuple[int, ...] = ()


@dataclass(frozen=True)
class TweetRows:
    tweet_id: str
    rows: tuple[TokenRow, ...]


@dataclass
class SequenceDataset:
    """Per-token rows with gold binary labels for one category.

    ``conditioning`` names the components whose span membership is appended
    as indicator columns on every row, in order.
    """

    category: str
    conditioning: tuple[str, ...] = ()
    tweets: list[TweetRows] = field(default_factory=list)

    def n_tokens(self) -> int:
        return sum(len(t.rows) for t in self.tweets)

    def to_conll(self) -> str:
        """One token per line: surface, indicator columns, gold label;
        blank line between tweets."""
        blocks = []
        for tweet in self.tweets:
            lines = []
            for row in tweet.rows:
                cols = [row.surface, *map(str, row.indicators), str(row.label)]
                lines.append("\t".join(cols))
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + ("\n" if blocks else "")


def to_dataset(corpus: list[AnnotatedTweet], category: str | ComponentKind,
               conditioning: tuple[str | ComponentKind, ...] = (),
               include_punct: bool = True) -> SequenceDataset:
    """Project a corpus onto a token-level dataset for one category.

    Conditioning components contribute one indicator column each, marking
    whether the token lies inside that component's spans (the information an
    annotator would already have at that stage). With ``include_punct=False``
    all-punctuation tokens are dropped.
    """
    cat_name, _ = resolve_category(category)
    cond_names = [resolve_category(c)[0] for c in conditioning]
    dataset = SequenceDataset(category=cat_name, conditioning=tuple(cond_names))
    for tweet in corpus:
        tok = tokenize(tweet.doc)
        labels = project(tweet, tok, category).labels
        cond_labels = [project(tweet, tok, c).labels for c in conditioning]
        rows = []
        for i, token in enumerate(tok.tokens):
            if not include_punct and is_punct_token(token.surface):
                continue
            rows.append(TokenRow(
                surface=token.surface,
                label=labels[i],
                indicators=tuple(cl[i] for cl in cond_labels),
            ))
        dataset.tweets.append(TweetRows(tweet_id=tweet.doc.id, rows=tuple(rows)))
    return dataset
