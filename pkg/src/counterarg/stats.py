"""Corpus statistics: per-language counts of tweets, components, types and
counter-narratives.

Word totals count whitespace-delimited tokens inside component fragments
(each fragment counted separately, then summed). That convention is applied
consistently here and is the one documented caveat when comparing against
externally reported totals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .scheme import AnnotatedTweet, CnType, ComponentKind, PropositionType
from .standoff import Lang


def fragment_word_count(text: str, fragments: tuple[tuple[int, int], ...]) -> int:
    return sum(len(text[s:e].split()) for s, e in fragments)


@dataclass
class LanguageStats:
    language: str
    n_tweets: int = 0
    n_argumentative: int = 0
    n_non_argumentative: int = 0
    n_collective_property: int = 0
    n_pivot: int = 0
    total_words: int = 0
    component_words: dict[str, int] = field(default_factory=dict)
    conclusion_types: dict[str, int] = field(default_factory=dict)
    justification_types: dict[str, int] = field(default_factory=dict)
    counter_narratives: dict[str, int] = field(default_factory=dict)

    def pct_argumentative(self) -> float:
        return 100.0 * self.n_argumentative / self.n_tweets if self.n_tweets else 0.0

    def pct_non_argumentative(self) -> float:
        return 100.0 * self.n_non_argumentative / self.n_tweets if self.n_tweets else 0.0


@dataclass
class StatsReport:
    per_language: dict[str, LanguageStats] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            lang: {
                "tweets": s.n_tweets,
                "argumentative": s.n_argumentative,
                "non_argumentative": s.n_non_argumentative,
                "collective_property": s.n_collective_property,
                "pivot": s.n_pivot,
                "total_words": s.total_words,
                "component_words": dict(sorted(s.component_words.items())),
                "conclusion_types": dict(sorted(s.conclusion_types.items())),
                "justification_types": dict(sorted(s.justification_types.items())),
                "counter_narratives": dict(sorted(s.counter_narratives.items())),
            }
            for lang, s in sorted(self.per_language.items())
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for lang, s in sorted(self.per_language.items()):
            lines.append(f"[{lang}]")
            lines.append(f"  tweets               {s.n_tweets}")
            lines.append(f"  argumentative        {s.n_argumentative}"
                         f" ({s.pct_argumentative():.1f}%)")
            lines.append(f"  non-argumentative    {s.n_non_argumentative}"
                         f" ({s.pct_non_argumentative():.1f}%)")
            lines.append(f"  collective+property  {s.n_collective_property}")
            lines.append(f"  with pivot           {s.n_pivot}")
            lines.append(f"  total words          {s.total_words}")
            lines.append("  component words      "
                         + "  ".join(f"{k}={v}" for k, v in sorted(s.component_words.items())))
            for name, dist in (("conclusion types", s.conclusion_types),
                               ("justification types", s.justification_types)):
                total = sum(dist.values())
                parts = []
                for ptype in ("fact", "value", "policy"):
                    n = dist.get(ptype, 0)
                    pct = 100.0 * n / total if total else 0.0
                    parts.append(f"{ptype}={n} ({pct:.1f}%)")
                lines.append(f"  {name:<20} " + "  ".join(parts))
            lines.append("  counter-narratives   "
                         + "  ".join(f"{t}={s.counter_narratives.get(t, 0)}"
                                     for t in ("A", "B", "C", "D")))
        return "\n".join(lines) + "\n"


def corpus_stats(tweets: list[AnnotatedTweet]) -> StatsReport:
    """Aggregate counts per language; empty corpus yields an empty report."""
    report = StatsReport()
    for tweet in tweets:
        lang = tweet.doc.source_lang.value
        if lang not in report.per_language:
            stats = LanguageStats(language=lang)
            stats.component_words = {k.value: 0 for k in ComponentKind}
            stats.component_words["Pivot"] = 0
            stats.conclusion_types = {p.value: 0 for p in PropositionType}
            stats.justification_types = {p.value: 0 for p in PropositionType}
            stats.counter_narratives = {c.value: 0 for c in CnType}
            report.per_language[lang] = stats
        s = report.per_language[lang]

        s.n_tweets += 1
        s.total_words += len(tweet.doc.text.split())
        if tweet.argumentative:
            s.n_argumentative += 1
        else:
            s.n_non_argumentative += 1
            continue

        if tweet.has_collective_property():
            s.n_collective_property += 1
        if tweet.has_pivot():
            s.n_pivot += 1
        for comp in tweet.components:
            words = fragment_word_count(tweet.doc.text, comp.fragments)
            s.component_words[comp.kind.value] += words
            if comp.kind in (ComponentKind.PIVOT_JUSTIFICATION_SIDE,
                             ComponentKind.PIVOT_CONCLUSION_SIDE):
                s.component_words["Pivot"] += words
        if tweet.conclusion_type is not None:
            s.conclusion_types[tweet.conclusion_type.value] += 1
        if tweet.justification_type is not None:
            s.justification_types[tweet.justification_type.value] += 1
        for cn in tweet.counter_narratives:
            s.counter_narratives[cn.cn_type.value] += 1
    return report


def stats_for_language(report: StatsReport, lang: Lang) -> LanguageStats | None:
    return report.per_language.get(lang.value)
