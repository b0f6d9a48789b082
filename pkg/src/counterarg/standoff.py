"""Offset-based standoff annotation files: parsing, serialization, consistency checks.

A corpus item is a pair of files: a ``.txt`` file holding the raw tweet text
and a ``.ann`` file holding its annotations, one per line:

    T<n> <TAB> LABEL start end[;start end]*  <TAB> surface
    A<n> <TAB> ATTR T<m> [VALUE]
    #<n> <TAB> TYPE T<m> <TAB> note text

Offsets are Unicode code-point offsets into the text file, end-exclusive.
Text-bound annotations may be discontinuous; the surface field then joins the
text slices with a single space. The parser verifies every surface against
the document text and rejects (never repairs) any inconsistency.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path

# Separator joining the text slices of a discontinuous annotation inside the
# surface field. Must match what the annotation tool wrote, or every
# discontinuous span would be rejected as a surface mismatch.
FRAGMENT_SEPARATOR = " "


class StandoffError(Exception):
    """Base class for standoff file problems."""


class DecodeError(StandoffError):
    """Input bytes are not valid UTF-8."""


class EmptyDocumentError(StandoffError):
    """Document file contains no text."""


class MalformedLineError(StandoffError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class OffsetOutOfRangeError(StandoffError):
    def __init__(self, ann_id: str, start: int, end: int, text_len: int):
        super().__init__(
            f"{ann_id}: fragment ({start}, {end}) outside document of length {text_len}"
        )
        self.ann_id = ann_id
        self.start = start
        self.end = end


class SurfaceMismatchError(StandoffError):
    def __init__(self, ann_id: str, expected: str, found: str):
        super().__init__(
            f"{ann_id}: surface does not match document text: "
            f"expected {expected!r}, found {found!r}"
        )
        self.ann_id = ann_id
        self.expected = expected
        self.found = found


class Lang(enum.Enum):
    EN = "en"
    ES = "es"


@dataclass(frozen=True)
class Document:
    """One tweet's raw text. Offsets elsewhere index into ``text`` verbatim."""

    id: str
    text: str
    source_lang: Lang = Lang.EN


@dataclass
class RawAnnotation:
    """A text-bound annotation as stored on disk, scheme-agnostic.

    ``fragments`` are (start, end) code-point offsets, sorted and
    non-overlapping. ``surface`` is the document slices joined by
    :data:`FRAGMENT_SEPARATOR`. ``attributes`` maps attribute names to values
    (empty string for valueless attributes). ``notes`` holds
    (note_type, text) pairs attached to this annotation; counter-narratives
    travel as notes with types ``CN-A`` .. ``CN-D``.
    """

    ann_id: str
    label: str
    fragments: tuple[tuple[int, int], ...]
    surface: str
    attributes: dict[str, str] = field(default_factory=dict)
    notes: list[tuple[str, str]] = field(default_factory=list)


def _as_text(source: str | bytes | Path) -> str:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(str(exc)) from exc
    return _as_text(Path(source).read_bytes())


def parse_document(source: str | bytes | Path, doc_id: str | None = None,
                   lang: Lang = Lang.EN) -> Document:
    """Read a document file (or raw bytes). Text is kept exactly as stored."""
    if doc_id is None:
        if isinstance(source, (str, Path)):
            doc_id = Path(source).stem
        else:
            doc_id = "<bytes>"
    text = _as_text(source)
    if not text:
        raise EmptyDocumentError(f"{doc_id}: document is empty")
    return Document(id=doc_id, text=text, source_lang=lang)


_SPAN_ID = re.compile(r"^T\d+$")
_ATTR_ID = re.compile(r"^A\d+$")
_NOTE_ID = re.compile(r"^#\d+$")


def _parse_fragments(ann_id: str, spec: str, line_no: int,
                     text_len: int) -> tuple[tuple[int, int], ...]:
    fragments = []
    for part in spec.split(";"):
        bits = part.split()
        if len(bits) != 2:
            raise MalformedLineError(line_no, f"bad fragment {part!r}")
        try:
            start, end = int(bits[0]), int(bits[1])
        except ValueError:
            raise MalformedLineError(line_no, f"non-integer offsets in {part!r}")
        if start < 0 or start >= end or end > text_len:
            raise OffsetOutOfRangeError(ann_id, start, end, text_len)
        fragments.append((start, end))
    for (_, prev_end), (next_start, _) in zip(fragments, fragments[1:]):
        if next_start < prev_end:
            raise MalformedLineError(
                line_no, "fragments out of order or overlapping")
    return tuple(fragments)


def surface_of(doc: Document, fragments: tuple[tuple[int, int], ...]) -> str:
    """Surface text of a fragment set, as the annotation file stores it."""
    return FRAGMENT_SEPARATOR.join(doc.text[s:e] for s, e in fragments)


def parse_annotations(source: str | bytes | Path, doc: Document,
                      on_unknown_line: str = "error") -> list[RawAnnotation]:
    """Parse an annotation file against its already-parsed document.

    Every span is checked against the document: offsets must be in range and
    the stored surface must equal the corresponding text slices. Attribute and
    note lines must reference a span defined in the same file.

    ``on_unknown_line`` controls what happens to line types outside the
    T/A/# inventory (e.g. brat relation lines): ``"error"`` raises,
    ``"skip"`` ignores them.
    """
    if on_unknown_line not in ("error", "skip"):
        raise ValueError(f"on_unknown_line must be 'error' or 'skip', got {on_unknown_line!r}")
    content = _as_text(source)
    by_id: dict[str, RawAnnotation] = {}
    order: list[RawAnnotation] = []
    deferred: list[tuple[int, str, list[str]]] = []

    for line_no, line in enumerate(content.split("\n"), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        head = fields[0]
        if _SPAN_ID.match(head):
            if len(fields) != 3:
                raise MalformedLineError(line_no, "span line needs 3 tab-separated fields")
            if head in by_id:
                raise MalformedLineError(line_no, f"duplicate annotation id {head}")
            type_part, surface = fields[1], fields[2]
            label, _, frag_spec = type_part.partition(" ")
            if not label or not frag_spec:
                raise MalformedLineError(line_no, "span line missing label or offsets")
            fragments = _parse_fragments(head, frag_spec, line_no, len(doc.text))
            expected = surface_of(doc, fragments)
            if surface != expected:
                raise SurfaceMismatchError(head, expected, surface)
            ann = RawAnnotation(ann_id=head, label=label,
                                fragments=fragments, surface=surface)
            by_id[head] = ann
            order.append(ann)
        elif _ATTR_ID.match(head) or _NOTE_ID.match(head):
            # Attributes and notes may precede their target span; resolve after.
            deferred.append((line_no, head, fields))
        else:
            if on_unknown_line == "skip":
                continue
            raise MalformedLineError(line_no, f"unrecognized line type {head!r}")

    for line_no, head, fields in deferred:
        if _ATTR_ID.match(head):
            if len(fields) != 2:
                raise MalformedLineError(line_no, "attribute line needs 2 tab-separated fields")
            bits = fields[1].split(" ")
            if len(bits) not in (2, 3):
                raise MalformedLineError(line_no, "attribute body must be 'ATTR Tn [VALUE]'")
            attr_name, target = bits[0], bits[1]
            value = bits[2] if len(bits) == 3 else ""
            if target not in by_id:
                raise MalformedLineError(line_no, f"attribute references unknown span {target}")
            by_id[target].attributes[attr_name] = value
        else:
            if len(fields) != 3:
                raise MalformedLineError(line_no, "note line needs 3 tab-separated fields")
            bits = fields[1].split(" ")
            if len(bits) != 2:
                raise MalformedLineError(line_no, "note body must be 'TYPE Tn'")
            note_type, target = bits
            if target not in by_id:
                raise MalformedLineError(line_no, f"note references unknown span {target}")
            by_id[target].notes.append((note_type, fields[2]))

    return order


def serialize_annotations(annotations: list[RawAnnotation]) -> bytes:
    """Write annotations back to the standoff format.

    Span lines come first in list order, then attribute lines, then note
    lines, with attribute/note ids renumbered sequentially. For any valid
    input, ``parse_annotations(serialize_annotations(x), doc) == x``.
    """
    lines: list[str] = []
    attr_lines: list[str] = []
    note_lines: list[str] = []
    n_attr = n_note = 0
    for ann in annotations:
        if "\n" in ann.surface or "\t" in ann.surface:
            raise ValueError(f"{ann.ann_id}: surface with tab/newline cannot be serialized")
        frag_spec = ";".join(f"{s} {e}" for s, e in ann.fragments)
        lines.append(f"{ann.ann_id}\t{ann.label} {frag_spec}\t{ann.surface}")
        for attr_name, value in ann.attributes.items():
            n_attr += 1
            body = f"{attr_name} {ann.ann_id}"
            if value:
                body += f" {value}"
            attr_lines.append(f"A{n_attr}\t{body}")
        for note_type, text in ann.notes:
            if "\n" in text:
                raise ValueError(f"{ann.ann_id}: note text with newline cannot be serialized")
            n_note += 1
            note_lines.append(f"#{n_note}\t{note_type} {ann.ann_id}\t{text}")
    out = "".join(line + "\n" for line in lines + attr_lines + note_lines)
    return out.encode("utf-8")
