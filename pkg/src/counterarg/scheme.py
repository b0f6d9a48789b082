"""Typed domain model for the annotation scheme, plus the rule validator.

An argumentative tweet carries exactly one Justification and one Conclusion
(each possibly discontinuous), optionally a targeted Collective with the
Property ascribed to it, and optionally a pivot: the pair of word sequences,
one per premise, that carry the reasoning from justification to conclusion.
Justification and conclusion are each typed as a policy, fact or value
proposition, and the tweet may carry counter-narratives of four types.

``validate`` turns every structural rule into a
:class:`ValidationIssue`; issues are data, not exceptions, so a whole corpus
can be swept in one pass.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .standoff import Document, surface_of


class ComponentKind(enum.Enum):
    JUSTIFICATION = "Justification"
    CONCLUSION = "Conclusion"
    COLLECTIVE = "Collective"
    PROPERTY = "Property"
    PIVOT_JUSTIFICATION_SIDE = "PivotJustificationSide"
    PIVOT_CONCLUSION_SIDE = "PivotConclusionSide"


PIVOT_SIDES = (ComponentKind.PIVOT_JUSTIFICATION_SIDE,
               ComponentKind.PIVOT_CONCLUSION_SIDE)


class PropositionType(enum.Enum):
    POLICY = "policy"
    FACT = "fact"
    VALUE = "value"


class CnType(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


@dataclass(frozen=True)
class Component:
    """A labeled, possibly discontinuous character-span annotation."""

    kind: ComponentKind
    fragments: tuple[tuple[int, int], ...]

    def char_set(self) -> set[int]:
        covered: set[int] = set()
        for start, end in self.fragments:
            covered.update(range(start, end))
        return covered


@dataclass(frozen=True)
class CounterNarrative:
    cn_type: CnType
    text: str


@dataclass
class AnnotatedTweet:
    """One tweet with its full set of scheme components and counter-narratives."""

    doc: Document
    argumentative: bool
    components: list[Component] = field(default_factory=list)
    justification_type: PropositionType | None = None
    conclusion_type: PropositionType | None = None
    counter_narratives: list[CounterNarrative] = field(default_factory=list)

    def of_kind(self, kind: ComponentKind) -> list[Component]:
        return [c for c in self.components if c.kind == kind]

    def component_text(self, kind: ComponentKind) -> str | None:
        """Surface of the (first) component of ``kind``, or None if absent."""
        comps = self.of_kind(kind)
        if not comps:
            return None
        return surface_of(self.doc, comps[0].fragments)

    def has_pivot(self) -> bool:
        return any(self.of_kind(k) for k in PIVOT_SIDES)

    def has_collective_property(self) -> bool:
        return bool(self.of_kind(ComponentKind.COLLECTIVE)) and bool(
            self.of_kind(ComponentKind.PROPERTY))


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class IssueCode(enum.Enum):
    # argumentative tweets must carry exactly one justification/conclusion pair
    MISSING_JUSTIFICATION = "missing-justification"
    EXTRA_JUSTIFICATION = "extra-justification"
    MISSING_CONCLUSION = "missing-conclusion"
    EXTRA_CONCLUSION = "extra-conclusion"
    EMPTY_FRAGMENTS = "empty-fragments"
    MISSING_JUSTIFICATION_TYPE = "missing-justification-type"
    MISSING_CONCLUSION_TYPE = "missing-conclusion-type"
    # non-argumentative tweets carry nothing
    NON_ARG_WITH_COMPONENTS = "non-arg-with-components"
    NON_ARG_WITH_TYPES = "non-arg-with-types"
    NON_ARG_WITH_COUNTER_NARRATIVES = "non-arg-with-counter-narratives"
    # collective and property are annotated jointly
    UNPAIRED_COLLECTIVE = "unpaired-collective"
    UNPAIRED_PROPERTY = "unpaired-property"
    # a pivot has one word sequence per premise
    UNPAIRED_PIVOT = "unpaired-pivot"
    DUPLICATE_PIVOT_SIDE = "duplicate-pivot-side"
    # span geometry
    JUSTIFICATION_CONCLUSION_OVERLAP = "justification-conclusion-overlap"
    COMPONENT_OUTSIDE_ARGUMENT = "component-outside-argument"
    PROPERTY_COLLECTIVE_OVERLAP = "property-collective-overlap"
    # counter-narratives
    EMPTY_COUNTER_NARRATIVE = "empty-counter-narrative"
    TYPE_B_WITHOUT_PROPERTY = "type-b-without-property"


@dataclass(frozen=True)
class ValidationIssue:
    tweet_id: str
    code: IssueCode
    message: str
    severity: Severity = Severity.ERROR


def _issue(tweet: AnnotatedTweet, code: IssueCode, message: str,
           severity: Severity = Severity.ERROR) -> ValidationIssue:
    return ValidationIssue(tweet.doc.id, code, message, severity)


def validate(tweet: AnnotatedTweet) -> list[ValidationIssue]:
    """Check every scheme rule; an empty list means the tweet is well-formed.

    Pure and idempotent; the issue set does not depend on component order.
    Uncovered text is never a violation (topic hashtags, links and user
    mentions may legitimately stay outside all components).
    """
    issues: list[ValidationIssue] = []
    t = tweet

    for comp in t.components:
        if not comp.fragments:
            issues.append(_issue(t, IssueCode.EMPTY_FRAGMENTS,
                                 f"{comp.kind.value} has no fragments"))

    if not t.argumentative:
        if t.components:
            issues.append(_issue(t, IssueCode.NON_ARG_WITH_COMPONENTS,
                                 "non-argumentative tweet has components"))
        if t.justification_type is not None or t.conclusion_type is not None:
            issues.append(_issue(t, IssueCode.NON_ARG_WITH_TYPES,
                                 "non-argumentative tweet has proposition types"))
        if t.counter_narratives:
            issues.append(_issue(t, IssueCode.NON_ARG_WITH_COUNTER_NARRATIVES,
                                 "non-argumentative tweet has counter-narratives"))
        return _ordered(issues)

    just = t.of_kind(ComponentKind.JUSTIFICATION)
    conc = t.of_kind(ComponentKind.CONCLUSION)
    if not just:
        issues.append(_issue(t, IssueCode.MISSING_JUSTIFICATION,
                             "argumentative tweet lacks a justification"))
    elif len(just) > 1:
        issues.append(_issue(t, IssueCode.EXTRA_JUSTIFICATION,
                             f"{len(just)} justification components, expected 1"))
    if not conc:
        issues.append(_issue(t, IssueCode.MISSING_CONCLUSION,
                             "argumentative tweet lacks a conclusion"))
    elif len(conc) > 1:
        issues.append(_issue(t, IssueCode.EXTRA_CONCLUSION,
                             f"{len(conc)} conclusion components, expected 1"))
    if t.justification_type is None:
        issues.append(_issue(t, IssueCode.MISSING_JUSTIFICATION_TYPE,
                             "justification has no proposition type"))
    if t.conclusion_type is None:
        issues.append(_issue(t, IssueCode.MISSING_CONCLUSION_TYPE,
                             "conclusion has no proposition type"))

    collective = t.of_kind(ComponentKind.COLLECTIVE)
    prop = t.of_kind(ComponentKind.PROPERTY)
    if collective and not prop:
        issues.append(_issue(t, IssueCode.UNPAIRED_COLLECTIVE,
                             "collective without a property"))
    if prop and not collective:
        issues.append(_issue(t, IssueCode.UNPAIRED_PROPERTY,
                             "property without a collective"))

    pivot_j = t.of_kind(ComponentKind.PIVOT_JUSTIFICATION_SIDE)
    pivot_c = t.of_kind(ComponentKind.PIVOT_CONCLUSION_SIDE)
    if (pivot_j or pivot_c) and not (pivot_j and pivot_c):
        issues.append(_issue(t, IssueCode.UNPAIRED_PIVOT,
                             "pivot must have one word sequence on each side"))
    if len(pivot_j) > 1 or len(pivot_c) > 1:
        issues.append(_issue(t, IssueCode.DUPLICATE_PIVOT_SIDE,
                             "more than one pivot sequence on one side"))

    just_chars = set().union(*(c.char_set() for c in just)) if just else set()
    conc_chars = set().union(*(c.char_set() for c in conc)) if conc else set()
    if just_chars & conc_chars:
        issues.append(_issue(t, IssueCode.JUSTIFICATION_CONCLUSION_OVERLAP,
                             "justification and conclusion fragments overlap"))

    argument_chars = just_chars | conc_chars
    inner = collective + prop + pivot_j + pivot_c
    for comp in inner:
        if comp.fragments and not comp.char_set() <= argument_chars:
            issues.append(_issue(
                t, IssueCode.COMPONENT_OUTSIDE_ARGUMENT,
                f"{comp.kind.value} extends outside justification/conclusion"))

    coll_chars = set().union(*(c.char_set() for c in collective)) if collective else set()
    prop_chars = set().union(*(c.char_set() for c in prop)) if prop else set()
    if coll_chars & prop_chars:
        # adjacency is common and harmless; genuine overlap is merely suspicious
        issues.append(_issue(t, IssueCode.PROPERTY_COLLECTIVE_OVERLAP,
                             "property overlaps collective", Severity.WARNING))

    has_property = bool(prop)
    for cn in t.counter_narratives:
        if not cn.text.strip():
            issues.append(_issue(t, IssueCode.EMPTY_COUNTER_NARRATIVE,
                                 f"type-{cn.cn_type.value} counter-narrative is empty"))
        if cn.cn_type == CnType.B and not has_property:
            issues.append(_issue(t, IssueCode.TYPE_B_WITHOUT_PROPERTY,
                                 "type-B counter-narrative requires an explicit property"))

    return _ordered(issues)


def _ordered(issues: list[ValidationIssue]) -> list[ValidationIssue]:
    return sorted(issues, key=lambda i: (i.tweet_id, i.code.value))


def validate_corpus(tweets: list[AnnotatedTweet]) -> list[ValidationIssue]:
    all_issues: list[ValidationIssue] = []
    for tweet in tweets:
        all_issues.extend(validate(tweet))
    return sorted(all_issues, key=lambda i: (i.tweet_id, i.code.value))
