"""Feature extraction and the L2-regularized logistic-regression baseline.

Estimators follow the scikit-learn protocol (``fit``/``transform``/
``predict`` plus ``get_params``) so they compose with pipelines and
``sklearn.base.clone``; the optimizer itself is implemented here as
full-batch gradient descent with a backtracking line search on the convex
class-weighted objective, which keeps training deterministic and the gradient
available for independent checking.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin

from .tokens import SequenceDataset
from .validation import (
    DimensionMismatchError,
    as_float_matrix,
    check_consistent_length,
    check_feature_dim,
    check_is_fitted,
)

UNK = "<unk>"


class SingleClassError(ValueError):
    pass


class NonFiniteLossError(ArithmeticError):
    pass


class VocabMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Vocabulary and embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vocabulary:
    """Token-to-index map built from a training split only.

    Index 0 is reserved for the unknown token; all other indices are dense in
    ``[1, len)`` in frequency-then-lexicographic order, so identical counts
    always produce the identical vocabulary.
    """

    index: dict[str, int]
    min_count: int = 1
    lowercase: bool = True

    @classmethod
    def build(cls, token_lists, min_count: int = 1,
              lowercase: bool = True) -> "Vocabulary":
        counts: Counter[str] = Counter()
        for tokens in token_lists:
            for token in tokens:
                counts[token.lower() if lowercase else token] += 1
        kept = sorted((t for t, c in counts.items() if c >= min_count),
                      key=lambda t: (-counts[t], t))
        index = {UNK: 0}
        for token in kept:
            index[token] = len(index)
        return cls(index=index, min_count=min_count, lowercase=lowercase)

    def lookup(self, token: str) -> int:
        if self.lowercase:
            token = token.lower()
        return self.index.get(token, 0)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, token: str) -> bool:
        if self.lowercase:
            token = token.lower()
        return token in self.index

    def content_hash(self) -> str:
        payload = json.dumps(
            {"index": self.index, "min_count": self.min_count,
             "lowercase": self.lowercase},
            sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()


class EmbeddingTable:
    """Dense token vectors read from the standard text format:
    a ``"<n> <d>"`` header line, then one ``"<token> <d floats>"`` per line.
    Missing tokens fall back to the zero vector."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.vectors = vectors
        self.dim = dim
        self._zero = np.zeros(dim)

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines:
            raise ValueError(f"{path}: empty embedding file")
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"{path}: header must be '<n> <d>'")
        n, dim = int(header[0]), int(header[1])
        vectors: dict[str, np.ndarray] = {}
        for line_no, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise DimensionMismatchError(
                    f"{path}:{line_no}: expected {dim} values, got {len(parts) - 1}")
            vectors[parts[0]] = np.array([float(x) for x in parts[1:]])
        if len(vectors) != n:
            raise ValueError(f"{path}: header says {n} vectors, found {len(vectors)}")
        return cls(vectors, dim)

    def get(self, token: str) -> np.ndarray:
        return self.vectors.get(token, self._zero)

    def mean(self, tokens) -> np.ndarray:
        if not tokens:
            return self._zero.copy()
        return np.mean([self.get(t) for t in tokens], axis=0)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self.vectors)} {self.dim}\n")
            for token, vec in self.vectors.items():
                fh.write(token + " " + " ".join(repr(float(x)) for x in vec) + "\n")


# ---------------------------------------------------------------------------
# Vectorizers
# ---------------------------------------------------------------------------

class TokenWindowVectorizer(BaseEstimator):
    """Features for token-level tagging over a :class:`SequenceDataset`.

    Column layout, in order:

    - one block of ``len(vocab)`` one-hot columns per window offset
      ``-window .. +window`` (out-of-bounds offsets contribute nothing),
    - one column per (conditioning component, window offset) marking span
      membership of the token at that offset,
    - ``embeddings.dim`` dense columns for the current token, when an
      embedding table is supplied.
    """

    def __init__(self, window: int = 2, min_count: int = 1,
                 lowercase: bool = True, embeddings: EmbeddingTable | None = None):
        self.window = window
        self.min_count = min_count
        self.lowercase = lowercase
        self.embeddings = embeddings

    def fit(self, dataset: SequenceDataset, y=None) -> "TokenWindowVectorizer":
        self.vocabulary_ = Vocabulary.build(
            ([row.surface for row in tweet.rows] for tweet in dataset.tweets),
            min_count=self.min_count, lowercase=self.lowercase)
        self.conditioning_ = dataset.conditioning
        offsets = 2 * self.window + 1
        self.n_features_ = (offsets * len(self.vocabulary_)
                            + offsets * len(self.conditioning_)
                            + (self.embeddings.dim if self.embeddings else 0))
        return self

    def transform(self, dataset: SequenceDataset):
        check_is_fitted(self, "vocabulary_")
        if dataset.conditioning != self.conditioning_:
            raise DimensionMismatchError(
                f"dataset conditioning {dataset.conditioning} does not match "
                f"fit-time conditioning {self.conditioning_}")
        vocab_size = len(self.vocabulary_)
        offsets = list(range(-self.window, self.window + 1))
        ind_base = len(offsets) * vocab_size
        emb_base = ind_base + len(offsets) * len(self.conditioning_)

        rows_idx: list[int] = []
        cols_idx: list[int] = []
        values: list[float] = []
        emb_rows: list[np.ndarray] = []
        row_no = 0
        for tweet in dataset.tweets:
            n = len(tweet.rows)
            for i, token_row in enumerate(tweet.rows):
                for slot, off in enumerate(offsets):
                    j = i + off
                    if not 0 <= j < n:
                        continue
                    neighbor = tweet.rows[j]
                    col = slot * vocab_size + self.vocabulary_.lookup(neighbor.surface)
                    rows_idx.append(row_no)
                    cols_idx.append(col)
                    values.append(1.0)
                    for k, flag in enumerate(neighbor.indicators):
                        if flag:
                            rows_idx.append(row_no)
                            cols_idx.append(ind_base + k * len(offsets) + slot)
                            values.append(1.0)
                if self.embeddings:
                    emb_rows.append(self.embeddings.get(token_row.surface))
                row_no += 1

        X = sp.csr_matrix((values, (rows_idx, cols_idx)),
                          shape=(row_no, emb_base))
        if self.embeddings:
            dense = np.vstack(emb_rows) if row_no else np.zeros((0, self.embeddings.dim))
            X = sp.hstack([X, sp.csr_matrix(dense)], format="csr")
        return X

    def fit_transform(self, dataset: SequenceDataset, y=None):
        return self.fit(dataset).transform(dataset)


def token_labels(dataset: SequenceDataset) -> np.ndarray:
    return np.array([row.label for tweet in dataset.tweets for row in tweet.rows])


@dataclass(frozen=True)
class TweetExample:
    """One tweet-level classification item: the token surfaces, the gold
    label, and per conditioning component the tokens inside its spans."""

    tweet_id: str
    tokens: tuple[str, ...]
    label: str
    conditioning_tokens: dict[str, tuple[str, ...]] = field(default_factory=dict)


class TweetBowVectorizer(BaseEstimator):
    """Bag-of-words features for tweet-level classification.

    Column layout: ``len(vocab)`` token counts over the whole tweet, then one
    ``len(vocab)`` count block per conditioning component restricted to the
    tokens inside that component's spans, then the embedding block. The
    embedding table may be keyed by tweet id (one precomputed vector per
    tweet); otherwise the mean of the token vectors is used.
    """

    def __init__(self, min_count: int = 1, lowercase: bool = True,
                 embeddings: EmbeddingTable | None = None,
                 conditioning: tuple[str, ...] = ()):
        self.min_count = min_count
        self.lowercase = lowercase
        self.embeddings = embeddings
        self.conditioning = conditioning

    def fit(self, examples: list[TweetExample], y=None) -> "TweetBowVectorizer":
        self.vocabulary_ = Vocabulary.build(
            (ex.tokens for ex in examples),
            min_count=self.min_count, lowercase=self.lowercase)
        self.n_features_ = (len(self.vocabulary_) * (1 + len(self.conditioning))
                            + (self.embeddings.dim if self.embeddings else 0))
        return self

    def transform(self, examples: list[TweetExample]):
        check_is_fitted(self, "vocabulary_")
        vocab_size = len(self.vocabulary_)
        emb_base = vocab_size * (1 + len(self.conditioning))
        rows_idx: list[int] = []
        cols_idx: list[int] = []
        values: list[float] = []
        emb_rows: list[np.ndarray] = []
        for row_no, ex in enumerate(examples):
            blocks = [(0, ex.tokens)]
            for k, kind in enumerate(self.conditioning):
                if kind not in ex.conditioning_tokens:
                    raise DimensionMismatchError(
                        f"{ex.tweet_id}: no conditioning tokens for {kind!r}")
                blocks.append(((k + 1) * vocab_size, ex.conditioning_tokens[kind]))
            for base, tokens in blocks:
                counts = Counter(self.vocabulary_.lookup(t) for t in tokens)
                for idx, count in counts.items():
                    rows_idx.append(row_no)
                    cols_idx.append(base + idx)
                    values.append(float(count))
            if self.embeddings:
                if ex.tweet_id in self.embeddings.vectors:
                    emb_rows.append(self.embeddings.get(ex.tweet_id))
                else:
                    emb_rows.append(self.embeddings.mean(list(ex.tokens)))
        X = sp.csr_matrix((values, (rows_idx, cols_idx)),
                          shape=(len(examples), emb_base))
        if self.embeddings:
            dense = (np.vstack(emb_rows) if examples
                     else np.zeros((0, self.embeddings.dim)))
            X = sp.hstack([X, sp.csr_matrix(dense)], format="csr")
        return X

    def fit_transform(self, examples: list[TweetExample], y=None):
        return self.fit(examples).transform(examples)


# ---------------------------------------------------------------------------
# Objective and gradient (module level so they can be checked independently)
# ---------------------------------------------------------------------------

def _scores(weights, bias, X):
    return (X @ weights.T) + bias


def _log_softmax(scores):
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def nll_loss(weights: np.ndarray, bias: np.ndarray, X, y_idx: np.ndarray,
             sample_weight: np.ndarray, l2: float) -> float:
    """Class-weighted negative log-likelihood plus L2 penalty on the weights
    (the bias is unpenalized)."""
    log_probs = _log_softmax(_scores(weights, bias, X))
    data_term = -(sample_weight * log_probs[np.arange(len(y_idx)), y_idx]).sum()
    return float(data_term + 0.5 * l2 * (weights ** 2).sum())


def nll_grad(weights: np.ndarray, bias: np.ndarray, X, y_idx: np.ndarray,
             sample_weight: np.ndarray, l2: float) -> tuple[np.ndarray, np.ndarray]:
    probs = np.exp(_log_softmax(_scores(weights, bias, X)))
    residual = probs.copy()
    residual[np.arange(len(y_idx)), y_idx] -= 1.0
    residual *= sample_weight[:, None]
    grad_w = residual.T @ X + l2 * weights
    grad_w = np.asarray(grad_w)
    grad_b = residual.sum(axis=0)
    return grad_w, grad_b


def balanced_class_weights(y_idx: np.ndarray, n_classes: int) -> np.ndarray:
    counts = np.bincount(y_idx, minlength=n_classes)
    return len(y_idx) / (n_classes * counts.astype(np.float64))


class LogisticRegressionGD(BaseEstimator, ClassifierMixin):
    """Multinomial logistic regression trained by full-batch gradient descent
    with an Armijo backtracking line search.

    ``reg_inverse`` is the inverse of the L2 regularization strength. Training
    stops when the gradient norm drops under ``tol`` or after ``max_epochs``
    passes; with the deterministic zero initialization, identical data always
    produces bit-identical weights. Prediction ties break toward the lowest
    class index.
    """

    def __init__(self, reg_inverse: float = 1.0, class_weight: str | None = "balanced",
                 tol: float = 1e-6, max_epochs: int = 1000, random_state: int = 0):
        self.reg_inverse = reg_inverse
        self.class_weight = class_weight
        self.tol = tol
        self.max_epochs = max_epochs
        self.random_state = random_state

    def fit(self, X, y) -> "LogisticRegressionGD":
        X = as_float_matrix(X)
        y = np.asarray(y)
        check_consistent_length(X, y)
        classes, y_idx = np.unique(y, return_inverse=True)
        if len(classes) < 2:
            raise SingleClassError("training data contains a single class")
        n_classes = len(classes)

        if self.class_weight == "balanced":
            class_w = balanced_class_weights(y_idx, n_classes)
        elif self.class_weight is None:
            class_w = np.ones(n_classes)
        elif isinstance(self.class_weight, dict):
            class_w = np.array([self.class_weight.get(c, 1.0) for c in classes],
                               dtype=np.float64)
        else:
            raise ValueError(f"unsupported class_weight {self.class_weight!r}")
        sample_weight = class_w[y_idx]

        l2 = 1.0 / self.reg_inverse
        weights = np.zeros((n_classes, X.shape[1]))
        bias = np.zeros(n_classes)
        loss = nll_loss(weights, bias, X, y_idx, sample_weight, l2)
        grad_w, grad_b = nll_grad(weights, bias, X, y_idx, sample_weight, l2)
        step = 1.0
        epoch = 0
        for epoch in range(1, self.max_epochs + 1):
            grad_sq = float((grad_w ** 2).sum() + (grad_b ** 2).sum())
            if np.sqrt(grad_sq) < self.tol:
                epoch -= 1
                break
            step = min(step * 2.0, 1e10)
            while True:
                new_w = weights - step * grad_w
                new_b = bias - step * grad_b
                new_loss = nll_loss(new_w, new_b, X, y_idx, sample_weight, l2)
                if np.isfinite(new_loss) and new_loss <= loss - 1e-4 * step * grad_sq:
                    break
                step *= 0.5
                if step < 1e-20:
                    raise NonFiniteLossError(
                        "line search stalled; objective not decreasing")
            weights, bias, loss = new_w, new_b, new_loss
            if not np.isfinite(loss):
                raise NonFiniteLossError(f"loss became non-finite at epoch {epoch}")
            grad_w, grad_b = nll_grad(weights, bias, X, y_idx, sample_weight, l2)

        self.classes_ = classes
        self.weights_ = weights
        self.bias_ = bias
        self.loss_ = loss
        self.grad_norm_ = float(np.sqrt((grad_w ** 2).sum() + (grad_b ** 2).sum()))
        self.n_epochs_ = epoch
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "weights_")
        X = as_float_matrix(X)
        check_feature_dim(X, self.weights_.shape[1])
        return np.asarray(_scores(self.weights_, self.bias_, X))

    def predict_proba(self, X) -> np.ndarray:
        return np.exp(_log_softmax(self.decision_function(X)))

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


# ---------------------------------------------------------------------------
# Model persistence
# ---------------------------------------------------------------------------

MODEL_FORMAT_VERSION = 1


def save_model(model: LogisticRegressionGD, path: str | Path,
               vocab_hash: str = "", extra_meta: dict | None = None) -> None:
    check_is_fitted(model, "weights_")
    meta = {
        "format_version": MODEL_FORMAT_VERSION,
        "vocab_hash": vocab_hash,
        "params": model.get_params(),
        "classes_kind": model.classes_.dtype.kind,
        **(extra_meta or {}),
    }
    np.savez(path,
             weights=model.weights_,
             bias=model.bias_,
             classes=model.classes_.astype(str),
             meta=np.array(json.dumps(meta, sort_keys=True)))


def load_model(path: str | Path,
               expected_vocab_hash: str | None = None) -> tuple[LogisticRegressionGD, dict]:
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["meta"]))
        if meta.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported model format "
                             f"{meta.get('format_version')}")
        if expected_vocab_hash is not None and meta["vocab_hash"] != expected_vocab_hash:
            raise VocabMismatchError(
                f"{path}: model was trained with a different vocabulary")
        model = LogisticRegressionGD(**{
            k: v for k, v in meta["params"].items()
            if k in LogisticRegressionGD().get_params()})
        model.weights_ = data["weights"]
        model.bias_ = data["bias"]
        classes = data["classes"]
        if meta.get("classes_kind") in ("i", "u"):
            classes = classes.astype(int)
        model.classes_ = classes
        model.n_features_in_ = model.weights_.shape[1]
    return model, meta
