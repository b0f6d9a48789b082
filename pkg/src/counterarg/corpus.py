"""Corpus ingestion: bridge raw standoff files to the typed scheme model.

The published annotation files do not come with a fixed naming convention for
span labels, proposition-type attributes or counter-narrative notes, so the
bridge is driven by a small :class:`MappingConfig` that can be loaded from
JSON and adjusted without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .scheme import (
    AnnotatedTweet,
    CnType,
    Component,
    ComponentKind,
    CounterNarrative,
    PropositionType,
)
from .standoff import Document, Lang, RawAnnotation, parse_annotations, parse_document


class UnknownLabelError(Exception):
    def __init__(self, label: str, doc_id: str = ""):
        where = f" in {doc_id}" if doc_id else ""
        super().__init__(f"no mapping for span label {label!r}{where}")
        self.label = label


# Sentinel mapping value: a span labeled just "pivot" gets its side inferred
# from which premise it sits inside.
PIVOT_AUTO = "PivotAuto"

_DEFAULT_LABELS = {
    "Justification": ComponentKind.JUSTIFICATION.value,
    "Conclusion": ComponentKind.CONCLUSION.value,
    "Collective": ComponentKind.COLLECTIVE.value,
    "Property": ComponentKind.PROPERTY.value,
    "Pivot": PIVOT_AUTO,
    "PivotJustificationSide": ComponentKind.PIVOT_JUSTIFICATION_SIDE.value,
    "PivotConclusionSide": ComponentKind.PIVOT_CONCLUSION_SIDE.value,
}

_DEFAULT_TYPE_VALUES = {
    "Policy": "policy", "Fact": "fact", "Value": "value",
    "policy": "policy", "fact": "fact", "value": "value",
    "P": "policy", "F": "fact", "V": "value",
}

_DEFAULT_CN_NOTE_TYPES = {
    "CN-A": "A", "CN-B": "B", "CN-C": "C", "CN-D": "D",
}


@dataclass
class MappingConfig:
    """Adjustable field-name mapping between annotation files and the scheme.

    label_to_kind   span label -> ComponentKind name (or ``PivotAuto``)
    type_attributes attribute names that carry the proposition type
    type_values     attribute value -> proposition type name
    cn_note_types   note type -> counter-narrative type letter
    """

    label_to_kind: dict[str, str] = field(default_factory=lambda: dict(_DEFAULT_LABELS))
    type_attributes: tuple[str, ...] = ("Type", "PropositionType")
    type_values: dict[str, str] = field(default_factory=lambda: dict(_DEFAULT_TYPE_VALUES))
    cn_note_types: dict[str, str] = field(default_factory=lambda: dict(_DEFAULT_CN_NOTE_TYPES))

    @classmethod
    def from_json(cls, path: str | Path) -> "MappingConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        cfg = cls()
        if "label_to_kind" in data:
            cfg.label_to_kind = dict(data["label_to_kind"])
        if "type_attributes" in data:
            cfg.type_attributes = tuple(data["type_attributes"])
        if "type_values" in data:
            cfg.type_values = dict(data["type_values"])
        if "cn_note_types" in data:
            cfg.cn_note_types = dict(data["cn_note_types"])
        return cfg

    def kind_for(self, label: str, doc_id: str = "") -> ComponentKind | str:
        if label not in self.label_to_kind:
            raise UnknownLabelError(label, doc_id)
        mapped = self.label_to_kind[label]
        if mapped == PIVOT_AUTO:
            return PIVOT_AUTO
        return ComponentKind(mapped)

    def proposition_type(self, ann: RawAnnotation) -> PropositionType | None:
        for attr in self.type_attributes:
            if attr in ann.attributes:
                value = ann.attributes[attr]
                if value in self.type_values:
                    return PropositionType(self.type_values[value])
        return None


def _overlap(fragments: tuple[tuple[int, int], ...], chars: set[int]) -> int:
    covered = set()
    for start, end in fragments:
        covered.update(range(start, end))
    return len(covered & chars)


def from_raw(doc: Document, annotations: list[RawAnnotation],
             mapping: MappingConfig | None = None) -> AnnotatedTweet:
    """Build an :class:`AnnotatedTweet` from parsed standoff annotations.

    A tweet with no mapped components is non-argumentative. The result is
    returned even if it breaks scheme rules; run ``validate`` separately.
    Raises :class:`UnknownLabelError` for span labels absent from the mapping.
    """
    mapping = mapping or MappingConfig()

    resolved: list[tuple[RawAnnotation, ComponentKind | str]] = [
        (ann, mapping.kind_for(ann.label, doc.id)) for ann in annotations
    ]

    just_chars: set[int] = set()
    conc_chars: set[int] = set()
    for ann, kind in resolved:
        if kind == ComponentKind.JUSTIFICATION:
            just_chars.update(Component(kind, ann.fragments).char_set())
        elif kind == ComponentKind.CONCLUSION:
            conc_chars.update(Component(kind, ann.fragments).char_set())

    components: list[Component] = []
    justification_type: PropositionType | None = None
    conclusion_type: PropositionType | None = None
    counter_narratives: list[CounterNarrative] = []
    n_auto_pivots = 0

    for ann, kind in resolved:
        if kind == PIVOT_AUTO:
            # Side inference: a pivot sequence lives inside one premise; fall
            # back to file order for the rare span touching neither.
            in_just = _overlap(ann.fragments, just_chars)
            in_conc = _overlap(ann.fragments, conc_chars)
            if in_just > in_conc:
                kind = ComponentKind.PIVOT_JUSTIFICATION_SIDE
            elif in_conc > in_just:
                kind = ComponentKind.PIVOT_CONCLUSION_SIDE
            else:
                kind = (ComponentKind.PIVOT_JUSTIFICATION_SIDE if n_auto_pivots == 0
                        else ComponentKind.PIVOT_CONCLUSION_SIDE)
            n_auto_pivots += 1
        components.append(Component(kind=kind, fragments=ann.fragments))

        ptype = mapping.proposition_type(ann)
        if ptype is not None:
            if kind == ComponentKind.JUSTIFICATION and justification_type is None:
                justification_type = ptype
            elif kind == ComponentKind.CONCLUSION and conclusion_type is None:
                conclusion_type = ptype

        for note_type, text in ann.notes:
            if note_type in mapping.cn_note_types:
                counter_narratives.append(CounterNarrative(
                    cn_type=CnType(mapping.cn_note_types[note_type]), text=text))

    return AnnotatedTweet(
        doc=doc,
        argumentative=bool(components),
        components=components,
        justification_type=justification_type,
        conclusion_type=conclusion_type,
        counter_narratives=counter_narratives,
    )


def _lang_for_path(path: Path) -> Lang:
    parts = {p.lower() for p in path.parts}
    if parts & {"es", "spanish"}:
        return Lang.ES
    return Lang.EN


def load_tweet(txt_path: str | Path, ann_path: str | Path | None = None,
               mapping: MappingConfig | None = None, lang: Lang | None = None,
               on_unknown_line: str = "error") -> AnnotatedTweet:
    """Load one ``.txt``/``.ann`` pair. A missing .ann file means no annotations."""
    txt_path = Path(txt_path)
    if ann_path is None:
        ann_path = txt_path.with_suffix(".ann")
    ann_path = Path(ann_path)
    if lang is None:
        lang = _lang_for_path(txt_path)
    doc = parse_document(txt_path, lang=lang)
    annotations = []
    if ann_path.exists():
        annotations = parse_annotations(ann_path, doc, on_unknown_line=on_unknown_line)
    return from_raw(doc, annotations, mapping)


def load_corpus_dir(root: str | Path, mapping: MappingConfig | None = None,
                    lang: Lang | None = None,
                    on_unknown_line: str = "error") -> list[AnnotatedTweet]:
    """Walk a corpus directory, loading every ``.txt`` with its sibling ``.ann``.

    Files are visited in sorted path order so corpus-level artifacts are
    reproducible. Language is taken from path components named ``en``/``es``
    (or ``english``/``spanish``) unless forced via ``lang``.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    tweets = []
    for txt_path in sorted(root.rglob("*.txt")):
        tweets.append(load_tweet(txt_path, mapping=mapping, lang=lang,
                                 on_unknown_line=on_unknown_line))
    return tweets


# ---------------------------------------------------------------------------
# Normalized corpus file (the `ingest` artifact): plain JSON, one object per
# tweet, deterministic field order.
# ---------------------------------------------------------------------------

def tweet_to_dict(tweet: AnnotatedTweet) -> dict:
    return {
        "id": tweet.doc.id,
        "lang": tweet.doc.source_lang.value,
        "text": tweet.doc.text,
        "argumentative": tweet.argumentative,
        "components": [
            {"kind": c.kind.value, "fragments": [list(f) for f in c.fragments]}
            for c in tweet.components
        ],
        "justification_type": (tweet.justification_type.value
                               if tweet.justification_type else None),
        "conclusion_type": (tweet.conclusion_type.value
                            if tweet.conclusion_type else None),
        "counter_narratives": [
            {"type": cn.cn_type.value, "text": cn.text}
            for cn in tweet.counter_narratives
        ],
    }


def tweet_from_dict(data: dict) -> AnnotatedTweet:
    doc = Document(id=data["id"], text=data["text"],
                   source_lang=Lang(data["lang"]))
    components = [
        Component(kind=ComponentKind(c["kind"]),
                  fragments=tuple(tuple(f) for f in c["fragments"]))
        for c in data["components"]
    ]
    return AnnotatedTweet(
        doc=doc,
        argumentative=data["argumentative"],
        components=components,
        justification_type=(PropositionType(data["justification_type"])
                            if data["justification_type"] else None),
        conclusion_type=(PropositionType(data["conclusion_type"])
                         if data["conclusion_type"] else None),
        counter_narratives=[
            CounterNarrative(cn_type=CnType(cn["type"]), text=cn["text"])
            for cn in data["counter_narratives"]
        ],
    )


def save_corpus(tweets: list[AnnotatedTweet], path: str | Path) -> None:
    payload = {"format": "counterarg-corpus", "version": 1,
               "tweets": [tweet_to_dict(t) for t in tweets]}
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1),
        encoding="utf-8")


def load_corpus_json(path: str | Path) -> list[AnnotatedTweet]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != "counterarg-corpus":
        raise ValueError(f"{path}: not a corpus file")
    return [tweet_from_dict(d) for d in payload["tweets"]]


def load_corpus(path: str | Path, mapping: MappingConfig | None = None,
                lang: Lang | None = None,
                on_unknown_line: str = "error") -> list[AnnotatedTweet]:
    """Load a corpus from either a directory of standoff files or a corpus JSON."""
    path = Path(path)
    if path.is_dir():
        return load_corpus_dir(path, mapping=mapping, lang=lang,
                               on_unknown_line=on_unknown_line)
    return load_corpus_json(path)
