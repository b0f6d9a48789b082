"""Brute-force reference implementations used to check the fast paths.

Everything here is written as plainly as possible (explicit enumeration,
central finite differences) and must stay independent of the library code it
checks.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from counterarg.models import balanced_class_weights, nll_loss


def kappa_oracle(a, b):
    """Kappa from an explicitly enumerated confusion matrix."""
    n = len(a)
    confusion = Counter(zip(a, b))
    labels = sorted(set(a) | set(b), key=str)
    p_obs = sum(confusion[(label, label)] for label in labels) / n
    p_exp = 0.0
    for label in labels:
        row = sum(v for (x, _), v in confusion.items() if x == label)
        col = sum(v for (_, y), v in confusion.items() if y == label)
        p_exp += (row / n) * (col / n)
    if p_obs == 1.0:
        return 1.0
    return (p_obs - p_exp) / (1.0 - p_exp)


def prf_oracle(truth, pred, positive, empty_value=1.0):
    """Target-class precision/recall/F1 by direct counting.

    Mirrors the documented convention: no positives on either side scores
    ``empty_value``.
    """
    tp = fp = fn = 0
    for t, p in zip(truth, pred):
        if p == positive and t == positive:
            tp += 1
        elif p == positive:
            fp += 1
        elif t == positive:
            fn += 1
    if tp + fp + fn == 0:
        return empty_value, empty_value, empty_value
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def macro_oracle(truth, pred, labels):
    scores = [prf_oracle(truth, pred, label, empty_value=0.0) for label in labels]
    return tuple(sum(s[i] for s in scores) / len(labels) for i in range(3))


def random_metric_instance(rng: np.random.Generator, n_classes: int = 2):
    """Random small training instance for gradient checking; every class
    occurs at least once so balanced weights stay finite."""
    n, n_features = int(rng.integers(4, 20)), int(rng.integers(2, 6))
    X = rng.normal(size=(n, n_features))
    y_idx = np.concatenate([np.arange(n_classes),
                            rng.integers(0, n_classes, size=n - n_classes)])
    rng.shuffle(y_idx)
    weights = rng.normal(size=(n_classes, n_features))
    bias = rng.normal(size=n_classes)
    sample_weight = balanced_class_weights(y_idx, n_classes)[y_idx]
    l2 = float(rng.choice([1.0, 2.0, 5.0, 10.0]))
    return X, y_idx, weights, bias, sample_weight, l2


def finite_difference_grad(weights, bias, X, y_idx, sample_weight, l2, h=1e-5):
    """Central-difference gradient of the training objective."""
    grad_w = np.zeros_like(weights)
    grad_b = np.zeros_like(bias)
    for idx in np.ndindex(weights.shape):
        plus = weights.copy(); plus[idx] += h
        minus = weights.copy(); minus[idx] -= h
        grad_w[idx] = (nll_loss(plus, bias, X, y_idx, sample_weight, l2)
                       - nll_loss(minus, bias, X, y_idx, sample_weight, l2)) / (2 * h)
    for k in range(len(bias)):
        plus = bias.copy(); plus[k] += h
        minus = bias.copy(); minus[k] -= h
        grad_b[k] = (nll_loss(weights, plus, X, y_idx, sample_weight, l2)
                     - nll_loss(weights, minus, X, y_idx, sample_weight, l2)) / (2 * h)
    return grad_w, grad_b
