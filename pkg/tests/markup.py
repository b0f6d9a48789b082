"""Helpers for building annotated tweets from a compact bracket markup.

``[TAG ...]`` marks a component span; nesting is allowed and a tag may repeat
to form a discontinuous component. Tags: J (justification), C (conclusion),
COL (collective), PROP (property), PJ/PC (pivot justification/conclusion
side). Example::

    [J [COL robots] are [PROP greedy]] so [C we must [PC shut them down]]
"""

from __future__ import annotations

from collections import defaultdict

from counterarg.scheme import (
    AnnotatedTweet,
    CnType,
    Component,
    ComponentKind,
    CounterNarrative,
    PropositionType,
)
from counterarg.standoff import Document, Lang

TAG_KINDS = {
    "J": ComponentKind.JUSTIFICATION,
    "C": ComponentKind.CONCLUSION,
    "COL": ComponentKind.COLLECTIVE,
    "PROP": ComponentKind.PROPERTY,
    "PJ": ComponentKind.PIVOT_JUSTIFICATION_SIDE,
    "PC": ComponentKind.PIVOT_CONCLUSION_SIDE,
}


def parse_markup(markup: str) -> tuple[str, dict[str, list[tuple[int, int]]]]:
    """Strip the bracket markup, returning plain text and per-tag spans."""
    text_chars: list[str] = []
    spans: dict[str, list[tuple[int, int]]] = defaultdict(list)
    stack: list[tuple[str, int]] = []
    i = 0
    while i < len(markup):
        ch = markup[i]
        if ch == "[":
            space = markup.index(" ", i)
            tag = markup[i + 1:space]
            if tag not in TAG_KINDS:
                raise ValueError(f"unknown markup tag {tag!r}")
            stack.append((tag, len(text_chars)))
            i = space + 1
        elif ch == "]":
            tag, start = stack.pop()
            spans[tag].append((start, len(text_chars)))
            i += 1
        else:
            text_chars.append(ch)
            i += 1
    if stack:
        raise ValueError(f"unclosed markup tags: {[t for t, _ in stack]}")
    return "".join(text_chars), dict(spans)


def tweet_from_markup(tweet_id: str, markup: str,
                      j_type: str | None = None, c_type: str | None = None,
                      cns: dict[str, str] | None = None,
                      lang: Lang = Lang.EN) -> AnnotatedTweet:
    """In-memory AnnotatedTweet; no markup means a non-argumentative tweet."""
    text, spans = parse_markup(markup)
    components = [
        Component(kind=TAG_KINDS[tag], fragments=tuple(sorted(tag_spans)))
        for tag, tag_spans in spans.items()
    ]
    components.sort(key=lambda c: c.kind.value)
    return AnnotatedTweet(
        doc=Document(id=tweet_id, text=text, source_lang=lang),
        argumentative=bool(components),
        components=components,
        justification_type=PropositionType(j_type) if j_type else None,
        conclusion_type=PropositionType(c_type) if c_type else None,
        counter_narratives=[
            CounterNarrative(cn_type=CnType(t), text=txt)
            for t, txt in sorted((cns or {}).items())
        ],
    )


def ann_file_from_markup(markup: str, j_type: str | None = None,
                         c_type: str | None = None,
                         cns: dict[str, str] | None = None,
                         explicit_pivot_sides: bool = False) -> tuple[str, str]:
    """Render markup as (txt content, ann content) in the standoff format."""
    text, spans = parse_markup(markup)
    lines = []
    ann_ids: dict[str, str] = {}
    n = 0
    for tag in ("J", "C", "COL", "PROP", "PJ", "PC"):
        if tag not in spans:
            continue
        n += 1
        ann_id = f"T{n}"
        ann_ids[tag] = ann_id
        fragments = sorted(spans[tag])
        frag_spec = ";".join(f"{s} {e}" for s, e in fragments)
        surface = " ".join(text[s:e] for s, e in fragments)
        if tag in ("PJ", "PC"):
            label = TAG_KINDS[tag].value if explicit_pivot_sides else "Pivot"
        else:
            label = TAG_KINDS[tag].value
        lines.append(f"{ann_id}\t{label} {frag_spec}\t{surface}")
    n_attr = 0
    if j_type and "J" in ann_ids:
        n_attr += 1
        lines.append(f"A{n_attr}\tType {ann_ids['J']} {j_type.capitalize()}")
    if c_type and "C" in ann_ids:
        n_attr += 1
        lines.append(f"A{n_attr}\tType {ann_ids['C']} {c_type.capitalize()}")
    n_note = 0
    for cn_type, cn_text in sorted((cns or {}).items()):
        target = ann_ids.get("COL" if cn_type == "B" else "J")
        if target is None:
            target = next(iter(ann_ids.values()))
        n_note += 1
        lines.append(f"#{n_note}\tCN-{cn_type} {target}\t{cn_text}")
    ann = "".join(line + "\n" for line in lines)
    return text, ann
