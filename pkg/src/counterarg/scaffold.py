"""Rule-based counter-narrative scaffolds built from annotated components.

Scaffolds are prompts for a human writer (or a downstream generator), not
finished counter-narratives. Three strategies are covered:

- type A challenges the inferential link between justification and
  conclusion, additionally questioning the pivot pairing when one exists;
- type B disputes the association between the targeted collective and the
  property ascribed to it, so it exists only when both are explicit;
- type C attacks the justification through its proposition type: facts get a
  demand for sources, values are flagged as opinion, policies get a
  counter-policy prompt.

The free fourth strategy has no structure to scaffold. Templates live in an
editable JSON file with named slots; every emitted prompt quotes only tweet
text plus fixed template words.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .scheme import AnnotatedTweet, ComponentKind


class NotArgumentativeError(ValueError):
    pass


class MissingTypeError(ValueError):
    pass


@dataclass(frozen=True)
class Scaffold:
    cn_type: str
    prompt_text: str
    slots_used: tuple[str, ...]


def load_templates(path: str | Path | None = None) -> dict:
    if path is not None:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    ref = resources.files("counterarg").joinpath("templates/scaffold_templates.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def _surface(tweet: AnnotatedTweet, kind: ComponentKind) -> str | None:
    text = tweet.component_text(kind)
    if text is None or not text.strip():
        return None
    return text


def _require_argumentative(tweet: AnnotatedTweet) -> None:
    if not tweet.argumentative:
        raise NotArgumentativeError(
            f"{tweet.doc.id}: scaffolds exist only for argumentative tweets")


def scaffold_type_a(tweet: AnnotatedTweet,
                    templates: dict | None = None) -> Scaffold | None:
    """Challenge that the justification entails the conclusion."""
    _require_argumentative(tweet)
    templates = templates or load_templates()
    justification = _surface(tweet, ComponentKind.JUSTIFICATION)
    conclusion = _surface(tweet, ComponentKind.CONCLUSION)
    if justification is None or conclusion is None:
        return None
    prompt = templates["A"]["base"].format(
        justification=justification, conclusion=conclusion)
    slots = [ComponentKind.JUSTIFICATION.value, ComponentKind.CONCLUSION.value]
    pivot_j = _surface(tweet, ComponentKind.PIVOT_JUSTIFICATION_SIDE)
    pivot_c = _surface(tweet, ComponentKind.PIVOT_CONCLUSION_SIDE)
    if pivot_j is not None and pivot_c is not None:
        prompt += templates["A"]["pivot"].format(
            pivot_justification=pivot_j, pivot_conclusion=pivot_c)
        slots += [ComponentKind.PIVOT_JUSTIFICATION_SIDE.value,
                  ComponentKind.PIVOT_CONCLUSION_SIDE.value]
    return Scaffold(cn_type="A", prompt_text=prompt, slots_used=tuple(slots))


def scaffold_type_b(tweet: AnnotatedTweet,
                    templates: dict | None = None) -> Scaffold | None:
    """Dispute the collective-property association; needs both explicit."""
    _require_argumentative(tweet)
    templates = templates or load_templates()
    has_collective = bool(tweet.of_kind(ComponentKind.COLLECTIVE))
    has_property = bool(tweet.of_kind(ComponentKind.PROPERTY))
    if not (has_collective and has_property):
        return None
    collective = _surface(tweet, ComponentKind.COLLECTIVE)
    prop = _surface(tweet, ComponentKind.PROPERTY)
    if collective is None or prop is None:
        warnings.warn(f"{tweet.doc.id}: collective/property surface is blank; "
                      "no type-B scaffold emitted")
        return None
    prompt = templates["B"].format(collective=collective, property=prop)
    return Scaffold(cn_type="B", prompt_text=prompt,
                    slots_used=(ComponentKind.COLLECTIVE.value,
                                ComponentKind.PROPERTY.value))


def scaffold_type_c(tweet: AnnotatedTweet,
                    templates: dict | None = None) -> Scaffold | None:
    """Attack the justification through its proposition type."""
    _require_argumentative(tweet)
    templates = templates or load_templates()
    if tweet.justification_type is None:
        raise MissingTypeError(
            f"{tweet.doc.id}: justification has no proposition type")
    justification = _surface(tweet, ComponentKind.JUSTIFICATION)
    if justification is None:
        return None
    type_name = tweet.justification_type.value
    prompt = templates["C"][type_name].format(justification=justification)
    return Scaffold(cn_type="C", prompt_text=prompt,
                    slots_used=(ComponentKind.JUSTIFICATION.value,
                                f"type:{type_name}"))


def scaffold_tweet(tweet: AnnotatedTweet,
                   templates: dict | None = None,
                   types: tuple[str, ...] = ("A", "B", "C")) -> list[Scaffold]:
    """All requested scaffolds for one tweet; non-argumentative yields none."""
    if not tweet.argumentative:
        return []
    templates = templates or load_templates()
    out = []
    for cn_type in types:
        if cn_type == "A":
            scaffold = scaffold_type_a(tweet, templates)
        elif cn_type == "B":
            scaffold = scaffold_type_b(tweet, templates)
        elif cn_type == "C":
            scaffold = (scaffold_type_c(tweet, templates)
                        if tweet.justification_type is not None else None)
        else:
            raise ValueError(f"no scaffold strategy for type {cn_type!r}")
        if scaffold is not None:
            out.append(scaffold)
    return out


def corpus_scaffolds(corpus: list[AnnotatedTweet],
                     templates: dict | None = None,
                     types: tuple[str, ...] = ("A", "B", "C")
                     ) -> list[tuple[str, Scaffold]]:
    templates = templates or load_templates()
    records = []
    for tweet in corpus:
        for scaffold in scaffold_tweet(tweet, templates, types):
            records.append((tweet.doc.id, scaffold))
    return records


def scaffolds_to_jsonl(records: list[tuple[str, Scaffold]]) -> str:
    lines = [
        json.dumps({"tweet_id": tweet_id, "cn_type": s.cn_type,
                    "prompt": s.prompt_text, "slots": list(s.slots_used)},
                   ensure_ascii=False, sort_keys=True)
        for tweet_id, s in records
    ]
    return "".join(line + "\n" for line in lines)


def scaffolds_to_text(records: list[tuple[str, Scaffold]],
                      corpus: list[AnnotatedTweet]) -> str:
    """Side-by-side report: tweet text, then its scaffold prompts."""
    by_id = {t.doc.id: t for t in corpus}
    blocks = []
    last_id = None
    for tweet_id, scaffold in records:
        if tweet_id != last_id:
            blocks.append(f"== {tweet_id}\n   {by_id[tweet_id].doc.text}")
            last_id = tweet_id
        blocks.append(f"   [{scaffold.cn_type}] {scaffold.prompt_text}")
    return "\n".join(blocks) + ("\n" if blocks else "")
