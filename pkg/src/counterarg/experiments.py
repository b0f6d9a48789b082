"""Evaluation protocol for the detection baselines.

Each task is run three times with different seeded train/dev/test partitions
(the standard 770/100/100 layout for a 970-tweet corpus, largest-remainder
proportional otherwise). Per seed, the regularization grid is searched on the
dev split, the winner is scored on the test split, and runs are aggregated as
mean and population standard deviation.

Tasks follow the annotation order, so each one may be conditioned on the
components an annotator would already have at that stage: Collective on
Property, Pivot and both proposition types on Justification and Conclusion.
Conditioning always uses gold annotations, never predictions.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .agreement import TYPE_LABELS, macro_prf, target_prf
from .models import (
    EmbeddingTable,
    LogisticRegressionGD,
    TokenWindowVectorizer,
    TweetBowVectorizer,
    TweetExample,
    token_labels,
)
from .scheme import AnnotatedTweet, ComponentKind
from .tokens import PIVOT_MERGED, is_punct_token, project, to_dataset, tokenize

DEFAULT_GRID = (1.0, 0.1, 0.2, 0.5)
DEFAULT_SEEDS = (1, 2, 3)

NON_ARG_LABEL = "non-argumentative"
ARG_LABEL = "argumentative"


class CorpusTooSmallError(ValueError):
    pass


class UnknownTaskError(ValueError):
    pass


@dataclass(frozen=True)
class TaskSpec:
    name: str
    granularity: str                      # "tweet" | "token"
    metric: str                           # "target_f1" | "macro_f1"
    category: str | None = None           # span category for token tasks
    type_attr: str | None = None          # tweet attr for type tasks
    conditioning: tuple[str, ...] = ()    # components known at this stage


TASKS: dict[str, TaskSpec] = {
    "ArgVsNonArg": TaskSpec("ArgVsNonArg", "tweet", "target_f1"),
    "Justification": TaskSpec("Justification", "token", "target_f1",
                              category=ComponentKind.JUSTIFICATION.value),
    "Conclusion": TaskSpec("Conclusion", "token", "target_f1",
                           category=ComponentKind.CONCLUSION.value),
    "TypeJust": TaskSpec("TypeJust", "tweet", "macro_f1",
                         type_attr="justification_type",
                         conditioning=(ComponentKind.JUSTIFICATION.value,
                                       ComponentKind.CONCLUSION.value)),
    "TypeConc": TaskSpec("TypeConc", "tweet", "macro_f1",
                         type_attr="conclusion_type",
                         conditioning=(ComponentKind.JUSTIFICATION.value,
                                       ComponentKind.CONCLUSION.value)),
    "Collective": TaskSpec("Collective", "token", "target_f1",
                           category=ComponentKind.COLLECTIVE.value,
                           conditioning=(ComponentKind.PROPERTY.value,)),
    "Property": TaskSpec("Property", "token", "target_f1",
                         category=ComponentKind.PROPERTY.value),
    "Pivot": TaskSpec("Pivot", "token", "target_f1", category=PIVOT_MERGED,
                      conditioning=(ComponentKind.JUSTIFICATION.value,
                                    ComponentKind.CONCLUSION.value)),
}

TASK_ORDER = ("ArgVsNonArg", "Justification", "Conclusion", "TypeJust",
              "TypeConc", "Collective", "Property", "Pivot")

# Tasks with a meaningful prior-annotation variant.
CONDITIONABLE = ("TypeJust", "TypeConc", "Collective", "Pivot")


def get_task(name: str) -> TaskSpec:
    if name not in TASKS:
        raise UnknownTaskError(
            f"unknown task {name!r}; choose from {', '.join(TASK_ORDER)}")
    return TASKS[name]


def reference_reg_inverse(task: str, model_family: str = "lr",
                          conditioned: bool = False) -> float | None:
    """Best known inverse regularization strength for a task, from the
    reference settings shipped with the package; None when unrecorded."""
    ref = resources.files("counterarg").joinpath(
        "templates/reference_hyperparams.json")
    table = json.loads(ref.read_text(encoding="utf-8"))
    branch = table["conditioned" if conditioned else "unconditioned"]
    return branch.get(model_family, {}).get(task)


# ---------------------------------------------------------------------------
# Splits
# ---------------------------------------------------------------------------

def split_sizes(n: int) -> tuple[int, int, int]:
    """Train/dev/test sizes: the canonical 770/100/100 at n=970, otherwise
    79/10.5/10.5 percent with largest-remainder rounding (ties favor train,
    then dev)."""
    if n == 970:
        return 770, 100, 100
    quotas = (0.79 * n, 0.105 * n, 0.105 * n)
    sizes = [int(q) for q in quotas]
    remainders = [q - s for q, s in zip(quotas, sizes)]
    for _ in range(n - sum(sizes)):
        # stable: highest remainder wins, earlier partition breaks ties
        best = max(range(3), key=lambda i: (remainders[i], -i))
        sizes[best] += 1
        remainders[best] = -1.0
    return tuple(sizes)


def make_splits(corpus: list[AnnotatedTweet], seed: int
                ) -> tuple[list[AnnotatedTweet], list[AnnotatedTweet], list[AnnotatedTweet]]:
    """Deterministic seeded shuffle into disjoint, exhaustive partitions."""
    if len(corpus) < 10:
        raise CorpusTooSmallError(f"{len(corpus)} tweets; need at least 10")
    order = sorted(corpus, key=lambda t: t.doc.id)
    random.Random(seed).shuffle(order)
    n_train, n_dev, n_test = split_sizes(len(order))
    return (order[:n_train],
            order[n_train:n_train + n_dev],
            order[n_train + n_dev:])


# ---------------------------------------------------------------------------
# Task data assembly
# ---------------------------------------------------------------------------

def _tweet_tokens(tweet: AnnotatedTweet, include_punct: bool) -> tuple[str, ...]:
    tok = tokenize(tweet.doc)
    return tuple(t.surface for t in tok.tokens
                 if include_punct or not is_punct_token(t.surface))


def _tweet_examples(tweets: list[AnnotatedTweet], task: TaskSpec,
                    conditioning: tuple[str, ...],
                    include_punct: bool) -> list[TweetExample]:
    examples = []
    for tweet in tweets:
        if task.type_attr is None:
            label = ARG_LABEL if tweet.argumentative else NON_ARG_LABEL
        else:
            value = getattr(tweet, task.type_attr)
            if not tweet.argumentative or value is None:
                continue
            label = value.value
        cond_tokens: dict[str, tuple[str, ...]] = {}
        if conditioning:
            tok = tokenize(tweet.doc)
            for kind in conditioning:
                labels = project(tweet, tok, kind).labels
                cond_tokens[kind] = tuple(
                    t.surface for t, flag in zip(tok.tokens, labels)
                    if flag and (include_punct or not is_punct_token(t.surface)))
        examples.append(TweetExample(
            tweet_id=tweet.doc.id,
            tokens=_tweet_tokens(tweet, include_punct),
            label=label,
            conditioning_tokens=cond_tokens))
    return examples


def _token_split(tweets: list[AnnotatedTweet], task: TaskSpec,
                 conditioning: tuple[str, ...], include_punct: bool):
    # taggers see argumentative tweets only: at every span-tagging stage the
    # annotator has already decided the tweet argues
    arg_tweets = [t for t in tweets if t.argumentative]
    return to_dataset(arg_tweets, task.category, conditioning=conditioning,
                      include_punct=include_punct)


# ---------------------------------------------------------------------------
# Runs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunRecord:
    seed: int
    best_reg_inverse: float
    dev_f1: float
    f1: float
    precision: float
    recall: float


@dataclass
class ExperimentResult:
    task: str
    model_family: str
    conditioned: bool
    runs: list[RunRecord] = field(default_factory=list)

    @property
    def mean_f1(self) -> float:
        return float(np.mean([r.f1 for r in self.runs]))

    @property
    def std_f1(self) -> float:
        return float(np.std([r.f1 for r in self.runs]))  # population std

    @property
    def mean_precision(self) -> float:
        return float(np.mean([r.precision for r in self.runs]))

    @property
    def mean_recall(self) -> float:
        return float(np.mean([r.recall for r in self.runs]))

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "model_family": self.model_family,
            "conditioned": self.conditioned,
            "mean_f1": self.mean_f1,
            "std_f1": self.std_f1,
            "mean_precision": self.mean_precision,
            "mean_recall": self.mean_recall,
            "runs": [
                {"seed": r.seed, "best_reg_inverse": r.best_reg_inverse,
                 "dev_f1": r.dev_f1, "f1": r.f1,
                 "precision": r.precision, "recall": r.recall}
                for r in self.runs
            ],
        }


@dataclass
class RunConfig:
    model_family: str = "lr"              # "lr" | "lr_embed"
    grid: tuple[float, ...] = DEFAULT_GRID
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    window: int = 2
    min_count: int = 1
    include_punct: bool = True
    max_epochs: int = 1000
    tol: float = 1e-6
    embeddings: EmbeddingTable | None = None

    def embedding_table(self) -> EmbeddingTable | None:
        if self.model_family == "lr_embed":
            if self.embeddings is None:
                raise ValueError("model_family 'lr_embed' needs an embedding table")
            return self.embeddings
        return None


def _evaluate(task: TaskSpec, truth, pred) -> tuple[float, float, float]:
    if task.metric == "macro_f1":
        return macro_prf(truth, pred, TYPE_LABELS)
    positive = NON_ARG_LABEL if task.granularity == "tweet" else 1
    return target_prf(truth, pred, positive=positive)


def run_single_seed(corpus: list[AnnotatedTweet], task: TaskSpec, seed: int,
                    config: RunConfig, conditioned: bool = False
                    ) -> tuple[RunRecord, LogisticRegressionGD]:
    """One seeded run: split, fit over the grid, select on dev, score on test.

    Returns the record plus the selected model, so callers can inspect or
    persist exactly what was evaluated.
    """
    train, dev, test = make_splits(corpus, seed)
    conditioning = task.conditioning if conditioned else ()
    embeddings = config.embedding_table()

    if task.granularity == "token":
        vectorizer = TokenWindowVectorizer(
            window=config.window, min_count=config.min_count,
            embeddings=embeddings)
        parts = [_token_split(split, task, conditioning, config.include_punct)
                 for split in (train, dev, test)]
        vectorizer.fit(parts[0])
        X_train, X_dev, X_test = (vectorizer.transform(p) for p in parts)
        y_train, y_dev, y_test = (token_labels(p) for p in parts)
    else:
        vectorizer = TweetBowVectorizer(
            min_count=config.min_count, embeddings=embeddings,
            conditioning=conditioning)
        parts = [_tweet_examples(split, task, conditioning, config.include_punct)
                 for split in (train, dev, test)]
        vectorizer.fit(parts[0])
        X_train, X_dev, X_test = (vectorizer.transform(p) for p in parts)
        y_train, y_dev, y_test = ([ex.label for ex in p] for p in parts)

    best = None
    for reg_inverse in config.grid:
        model = LogisticRegressionGD(
            reg_inverse=reg_inverse, class_weight="balanced",
            tol=config.tol, max_epochs=config.max_epochs, random_state=seed)
        model.fit(X_train, y_train)
        dev_f1 = _evaluate(task, y_dev, model.predict(X_dev))[2]
        if best is None or dev_f1 > best[0]:
            best = (dev_f1, reg_inverse, model)

    dev_f1, reg_inverse, model = best
    precision, recall, f1 = _evaluate(task, y_test, model.predict(X_test))
    record = RunRecord(seed=seed, best_reg_inverse=reg_inverse, dev_f1=dev_f1,
                       f1=f1, precision=precision, recall=recall)
    return record, model


def run_task(corpus: list[AnnotatedTweet], task: str | TaskSpec,
             config: RunConfig | None = None,
             conditioned: bool = False) -> ExperimentResult:
    """Run one task over all seeds; see :class:`RunConfig` for the knobs."""
    config = config or RunConfig()
    spec = get_task(task) if isinstance(task, str) else task
    result = ExperimentResult(task=spec.name, model_family=config.model_family,
                              conditioned=conditioned)
    for seed in config.seeds:
        record, _ = run_single_seed(corpus, spec, seed, config, conditioned)
        result.runs.append(record)
    return result


def run_suite(corpus: list[AnnotatedTweet], config: RunConfig | None = None,
              tasks: tuple[str, ...] = TASK_ORDER) -> list[ExperimentResult]:
    return [run_task(corpus, name, config) for name in tasks]


def run_conditioned_suite(corpus: list[AnnotatedTweet],
                          config: RunConfig | None = None,
                          tasks: tuple[str, ...] = CONDITIONABLE
                          ) -> list[tuple[ExperimentResult, ExperimentResult]]:
    """Paired (unconditioned, conditioned) results for the staged tasks."""
    pairs = []
    for name in tasks:
        plain = run_task(corpus, name, config, conditioned=False)
        extra = run_task(corpus, name, config, conditioned=True)
        pairs.append((plain, extra))
    return pairs


# ---------------------------------------------------------------------------
# Reporting
# ---------------------------------------------------------------------------

def _sort_key(result: ExperimentResult) -> tuple:
    order = (TASK_ORDER.index(result.task)
             if result.task in TASK_ORDER else len(TASK_ORDER))
    return (order, result.model_family, result.conditioned)


def emit_report(results: list[ExperimentResult]) -> str:
    """Fixed-width summary table, rows in the canonical task order."""
    header = (f"{'task':<14}{'family':<10}{'cond':<6}"
              f"{'F1':>7}{'±std':>7}{'P':>7}{'R':>7}  per-run F1")
    lines = [header, "-" * len(header)]
    for result in sorted(results, key=_sort_key):
        per_run = " ".join(f"{r.f1:.3f}" for r in result.runs)
        lines.append(
            f"{result.task:<14}{result.model_family:<10}"
            f"{'yes' if result.conditioned else 'no':<6}"
            f"{result.mean_f1:>7.3f}{result.std_f1:>7.3f}"
            f"{result.mean_precision:>7.3f}{result.mean_recall:>7.3f}  {per_run}")
    return "\n".join(lines) + "\n"


def results_to_json(results: list[ExperimentResult]) -> str:
    payload = [r.to_dict() for r in sorted(results, key=_sort_key)]
    return json.dumps(payload, indent=2, sort_keys=True)
