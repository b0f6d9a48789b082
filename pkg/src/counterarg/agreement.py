"""Inter-annotator agreement: Cohen's kappa and precision/recall/F1.

Span categories (Collective, Property, Pivot, Justification, Conclusion) are
compared per word: every token of every doubly-annotated tweet contributes one
binary item, pooled into a single contingency table. Argumentative is compared
per tweet with a binary label; the two proposition-type categories are
compared per tweet with a three-way label, restricted to tweets both
annotators marked argumentative (types are undefined otherwise).

Because kappa collapses under skewed marginals (a category used almost always
gets near-zero kappa no matter how often annotators agree), each report row
also carries both annotators' label marginals.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .scheme import AnnotatedTweet, ComponentKind
from .tokens import PIVOT_MERGED, is_punct_token, project, tokenize

TYPE_LABELS = ("fact", "value", "policy")

# Table row order: span categories, argumentativeness, proposition types.
REPORT_CATEGORIES = ("Collective", "Property", "Pivot", "Justification",
                     "Conclusion", "Argumentative", "TypeConclusion",
                     "TypeJustification")


class LengthMismatchError(Exception):
    pass


class EmptyPairError(Exception):
    pass


class TweetSetMismatchError(Exception):
    pass


@dataclass(frozen=True)
class LabelSequencePair:
    """Aligned label sequences from two annotators for one category."""

    category: str
    a: tuple
    b: tuple


def _check_pair(a, b) -> None:
    if len(a) != len(b):
        raise LengthMismatchError(f"{len(a)} vs {len(b)} labels")
    if len(a) == 0:
        raise EmptyPairError("no items to compare")


def cohen_kappa(a, b) -> float:
    """Chance-corrected agreement with marginal-product expected agreement.

    Perfect observed agreement returns exactly 1.0, sidestepping the 0/0 in
    the usual formula when both annotators are constant and identical.
    """
    _check_pair(a, b)
    n = len(a)
    p_obs = sum(1 for x, y in zip(a, b) if x == y) / n
    if p_obs == 1.0:
        return 1.0
    count_a = Counter(a)
    count_b = Counter(b)
    p_exp = sum((count_a[label] / n) * (count_b[label] / n)
                for label in set(count_a) | set(count_b))
    return (p_obs - p_exp) / (1.0 - p_exp)


def precision_recall_f1(tp: int, fp: int, fn: int,
                        empty_value: float = 0.0) -> tuple[float, float, float]:
    if tp + fp + fn == 0:
        # no positives on either side: vacuous agreement scores empty_value
        return empty_value, empty_value, empty_value
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def target_prf(truth, pred, positive=1,
               empty_value: float = 1.0) -> tuple[float, float, float]:
    """Precision/recall/F1 of the positive class only.

    When neither side contains the positive class at all there is nothing to
    miss, so the comparison scores ``empty_value`` (1.0 by default, keeping
    self-comparison at a perfect score even for unused categories).
    """
    _check_pair(truth, pred)
    tp = sum(1 for t, p in zip(truth, pred) if t == positive and p == positive)
    fp = sum(1 for t, p in zip(truth, pred) if t != positive and p == positive)
    fn = sum(1 for t, p in zip(truth, pred) if t == positive and p != positive)
    return precision_recall_f1(tp, fp, fn, empty_value=empty_value)


def macro_prf(truth, pred, labels) -> tuple[float, float, float]:
    """Unweighted mean of per-class precision/recall/F1 over ``labels``.

    Averaging always runs over the full label set; a label absent from both
    sequences contributes zeros (matching the common evaluation convention
    for fixed label inventories).
    """
    _check_pair(truth, pred)
    scores = [target_prf(truth, pred, positive=label, empty_value=0.0)
              for label in labels]
    return tuple(sum(s[i] for s in scores) / len(labels) for i in range(3))


def pairwise_f1(a, b, truth_side: str = "A",
                labels=None) -> tuple[float, float, float]:
    """P/R/F1 treating one annotator as ground truth.

    Binary sequences score the positive (1) class; passing ``labels`` switches
    to the macro average over that label set. Swapping ``truth_side`` swaps
    precision and recall and leaves F1 unchanged.
    """
    if truth_side not in ("A", "B"):
        raise ValueError(f"truth_side must be 'A' or 'B', got {truth_side!r}")
    truth, pred = (a, b) if truth_side == "A" else (b, a)
    if labels is None:
        return target_prf(truth, pred, positive=1)
    return macro_prf(truth, pred, labels)


# ---------------------------------------------------------------------------
# Corpus-level report
# ---------------------------------------------------------------------------

@dataclass
class CategoryAgreement:
    category: str
    kappa: float
    precision: float
    recall: float
    f1: float
    n_items: int
    marginals_a: dict = field(default_factory=dict)
    marginals_b: dict = field(default_factory=dict)
    model_precision: float | None = None
    model_recall: float | None = None
    model_f1: float | None = None


@dataclass
class AgreementReport:
    rows: list[CategoryAgreement]
    n_tweets: int
    n_type_tweets: int
    n_type_excluded: int
    has_model: bool = False

    def row(self, category: str) -> CategoryAgreement:
        for row in self.rows:
            if row.category == category:
                return row
        raise KeyError(category)

    def to_dict(self) -> dict:
        return {
            "n_tweets": self.n_tweets,
            "type_rows_cover": self.n_type_tweets,
            "type_rows_excluded": self.n_type_excluded,
            "rows": [
                {
                    "category": r.category,
                    "kappa": r.kappa,
                    "precision": r.precision,
                    "recall": r.recall,
                    "f1": r.f1,
                    "n_items": r.n_items,
                    "marginals_a": {str(k): v for k, v in sorted(r.marginals_a.items(), key=lambda kv: str(kv[0]))},
                    "marginals_b": {str(k): v for k, v in sorted(r.marginals_b.items(), key=lambda kv: str(kv[0]))},
                    **({"model_precision": r.model_precision,
                        "model_recall": r.model_recall,
                        "model_f1": r.model_f1} if self.has_model else {}),
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        width = max(len(r.category) for r in self.rows) + 2
        head = "".join(f"{c:>{width}}" for c in (r.category for r in self.rows))
        out = [" " * 12 + head]
        out.append(f"{'kappa':<12}" + "".join(f"{r.kappa:>{width}.2f}" for r in self.rows))
        out.append(f"{'human F1':<12}" + "".join(f"{r.f1:>{width}.2f}" for r in self.rows))
        if self.has_model:
            out.append(f"{'model F1':<12}" + "".join(
                f"{r.model_f1:>{width}.2f}" if r.model_f1 is not None else " " * width
                for r in self.rows))
        out.append(f"{'n items':<12}" + "".join(f"{r.n_items:>{width}d}" for r in self.rows))
        out.append(f"(type rows cover {self.n_type_tweets} tweets both sides"
                   f" marked argumentative; {self.n_type_excluded} excluded)")
        return "\n".join(out) + "\n"


def _match_corpora(corpus_a: list[AnnotatedTweet],
                   corpus_b: list[AnnotatedTweet]) -> list[tuple[AnnotatedTweet, AnnotatedTweet]]:
    by_id_a = {t.doc.id: t for t in corpus_a}
    by_id_b = {t.doc.id: t for t in corpus_b}
    if set(by_id_a) != set(by_id_b):
        only_a = sorted(set(by_id_a) - set(by_id_b))[:5]
        only_b = sorted(set(by_id_b) - set(by_id_a))[:5]
        raise TweetSetMismatchError(
            f"tweet ids differ (only in A: {only_a}, only in B: {only_b})")
    pairs = []
    for tweet_id in sorted(by_id_a):
        ta, tb = by_id_a[tweet_id], by_id_b[tweet_id]
        if ta.doc.text != tb.doc.text:
            raise TweetSetMismatchError(f"{tweet_id}: document texts differ")
        pairs.append((ta, tb))
    return pairs


def _pooled_span_labels(pairs, category, include_punct) -> tuple[list[int], list[int]]:
    a_labels: list[int] = []
    b_labels: list[int] = []
    for ta, tb in pairs:
        tok = tokenize(ta.doc)
        la = project(ta, tok, category).labels
        lb = project(tb, tok, category).labels
        for token, x, y in zip(tok.tokens, la, lb):
            if not include_punct and is_punct_token(token.surface):
                continue
            a_labels.append(x)
            b_labels.append(y)
    return a_labels, b_labels


def _category_row(category: str, a, b, labels=None) -> CategoryAgreement:
    if not a:
        # category absent from the whole comparison set: vacuously perfect
        return CategoryAgreement(category=category, kappa=1.0, precision=1.0,
                                 recall=1.0, f1=1.0, n_items=0)
    precision, recall, f1 = pairwise_f1(a, b, truth_side="A", labels=labels)
    return CategoryAgreement(
        category=category,
        kappa=cohen_kappa(a, b),
        precision=precision, recall=recall, f1=f1,
        n_items=len(a),
        marginals_a=dict(Counter(a)),
        marginals_b=dict(Counter(b)),
    )


def agreement_report(corpus_a: list[AnnotatedTweet],
                     corpus_b: list[AnnotatedTweet],
                     model_corpus: list[AnnotatedTweet] | None = None,
                     include_punct: bool = True,
                     pivot_merge: bool = True) -> AgreementReport:
    """Full per-category agreement between two annotations of one tweet set.

    ``model_corpus``, when given, adds a model-F1 row scored against annotator
    A. ``pivot_merge=False`` reports the two pivot sides as separate rows.
    """
    pairs = _match_corpora(corpus_a, corpus_b)
    model_pairs = _match_corpora(corpus_a, model_corpus) if model_corpus else None

    span_categories: list[str | ComponentKind] = [
        ComponentKind.COLLECTIVE, ComponentKind.PROPERTY]
    if pivot_merge:
        span_categories.append(PIVOT_MERGED)
    else:
        span_categories.extend([ComponentKind.PIVOT_JUSTIFICATION_SIDE,
                                ComponentKind.PIVOT_CONCLUSION_SIDE])
    span_categories.extend([ComponentKind.JUSTIFICATION, ComponentKind.CONCLUSION])

    rows: list[CategoryAgreement] = []
    for category in span_categories:
        a, b = _pooled_span_labels(pairs, category, include_punct)
        name = category.value if isinstance(category, ComponentKind) else category
        row = _category_row(name, a, b)
        if model_pairs:
            ta, tm = _pooled_span_labels(model_pairs, category, include_punct)
            row.model_precision, row.model_recall, row.model_f1 = \
                target_prf(ta, tm, positive=1)
        rows.append(row)

    arg_a = [1 if ta.argumentative else 0 for ta, _ in pairs]
    arg_b = [1 if tb.argumentative else 0 for _, tb in pairs]
    row = _category_row("Argumentative", arg_a, arg_b)
    if model_pairs:
        m_truth = [1 if ta.argumentative else 0 for ta, _ in model_pairs]
        m_pred = [1 if tm.argumentative else 0 for _, tm in model_pairs]
        row.model_precision, row.model_recall, row.model_f1 = \
            target_prf(m_truth, m_pred, positive=1)
    rows.append(row)

    # Proposition types exist only where both sides agree the tweet argues.
    both_arg = [(ta, tb) for ta, tb in pairs if ta.argumentative and tb.argumentative]
    n_excluded = len(pairs) - len(both_arg)
    for category, attr in (("TypeConclusion", "conclusion_type"),
                           ("TypeJustification", "justification_type")):
        type_a = [getattr(ta, attr).value for ta, _ in both_arg if getattr(ta, attr)]
        type_b = [getattr(tb, attr).value for ta, tb in both_arg if getattr(ta, attr)]
        pair_a, pair_b = [], []
        for (ta, tb) in both_arg:
            va, vb = getattr(ta, attr), getattr(tb, attr)
            if va is not None and vb is not None:
                pair_a.append(va.value)
                pair_b.append(vb.value)
        row = _category_row(category, pair_a, pair_b, labels=TYPE_LABELS)
        if model_pairs:
            m_a, m_b = [], []
            for (ta, tm) in model_pairs:
                if not (ta.argumentative and tm.argumentative):
                    continue
                va, vm = getattr(ta, attr), getattr(tm, attr)
                if va is not None and vm is not None:
                    m_a.append(va.value)
                    m_b.append(vm.value)
            row.model_precision, row.model_recall, row.model_f1 = \
                macro_prf(m_a, m_b, TYPE_LABELS)
        rows.append(row)

    return AgreementReport(rows=rows, n_tweets=len(pairs),
                           n_type_tweets=len(both_arg),
                           n_type_excluded=n_excluded,
                           has_model=model_pairs is not None)


# ---------------------------------------------------------------------------
# Optional overlap-tolerant variant (experimental)
# ---------------------------------------------------------------------------

def _spans_of(labels) -> list[tuple[int, int]]:
    spans = []
    start = None
    for i, lab in enumerate(labels):
        if lab == 1 and start is None:
            start = i
        elif lab != 1 and start is not None:
            spans.append((start, i))
            start = None
    if start is not None:
        spans.append((start, len(labels)))
    return spans


def soft_span_prf(a, b, min_jaccard: float = 0.25) -> tuple[float, float, float]:
    """Span-level P/R/F1 where spans match on token overlap, not equality.

    Experimental alternative for highly interpretive categories (pivots can
    be annotated as different but equally defensible word sequences); not
    part of the standard report.
    """
    _check_pair(a, b)
    spans_a, spans_b = _spans_of(a), _spans_of(b)

    def jaccard(x, y):
        inter = max(0, min(x[1], y[1]) - max(x[0], y[0]))
        union = (x[1] - x[0]) + (y[1] - y[0]) - inter
        return inter / union if union else 0.0

    matched_a = sum(1 for x in spans_a if any(jaccard(x, y) >= min_jaccard for y in spans_b))
    matched_b = sum(1 for y in spans_b if any(jaccard(x, y) >= min_jaccard for x in spans_a))
    precision = matched_b / len(spans_b) if spans_b else 0.0
    recall = matched_a / len(spans_a) if spans_a else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1
