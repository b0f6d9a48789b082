"""Toolkit for argument-component annotations on hate-speech tweets.

Parses offset-based standoff annotation files, validates them against the
annotation scheme, computes corpus statistics and inter-annotator agreement,
trains logistic-regression detection baselines, and emits rule-based
counter-narrative scaffolds.
"""

__version__ = "0.1.0"

from .corpus import MappingConfig, from_raw, load_corpus, load_corpus_dir, load_tweet
from .scheme import (
    AnnotatedTweet,
    CnType,
    Component,
    ComponentKind,
    CounterNarrative,
    PropositionType,
    ValidationIssue,
    validate,
    validate_corpus,
)
from .standoff import (
    Document,
    Lang,
    RawAnnotation,
    parse_annotations,
    parse_document,
    serialize_annotations,
)

__all__ = [
    "AnnotatedTweet",
    "CnType",
    "Component",
    "ComponentKind",
    "CounterNarrative",
    "Document",
    "Lang",
    "MappingConfig",
    "PropositionType",
    "RawAnnotation",
    "ValidationIssue",
    "__version__",
    "from_raw",
    "load_corpus",
    "load_corpus_dir",
    "load_tweet",
    "parse_annotations",
    "parse_document",
    "serialize_annotations",
    "validate",
    "validate_corpus",
]
