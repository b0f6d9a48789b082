"""Split protocol, seeded runs and reporting."""

from __future__ import annotations

import json

import numpy as np
import pytest

from counterarg.experiments import (
    CorpusTooSmallError,
    DEFAULT_GRID,
    ExperimentResult,
    RunConfig,
    RunRecord,
    TASKS,
    TaskSpec,
    UnknownTaskError,
    emit_report,
    get_task,
    make_splits,
    results_to_json,
    run_conditioned_suite,
    run_single_seed,
    run_task,
    split_sizes,
)
from counterarg.scheme import AnnotatedTweet

from corpusgen import synthetic_corpus

FAST = RunConfig(grid=(1.0, 0.1), seeds=(1, 2), max_epochs=150)


@pytest.fixture(scope="module")
def corpus():
    return synthetic_corpus(120, seed=7)


class TestSplits:
    def test_canonical_970(self):
        assert split_sizes(970) == (770, 100, 100)

    def test_largest_remainder_20(self):
        assert split_sizes(20) == (16, 2, 2)

    def test_sizes_always_sum(self):
        for n in range(10, 400, 7):
            assert sum(split_sizes(n)) == n

    def test_same_seed_same_membership(self, corpus):
        first = make_splits(corpus, seed=3)
        second = make_splits(corpus, seed=3)
        for a, b in zip(first, second):
            assert [t.doc.id for t in a] == [t.doc.id for t in b]

    def test_different_seed_different_membership(self, corpus):
        a = make_splits(corpus, seed=1)[0]
        b = make_splits(corpus, seed=2)[0]
        assert [t.doc.id for t in a] != [t.doc.id for t in b]

    def test_disjoint_and_exhaustive(self, corpus):
        train, dev, test = make_splits(corpus, seed=5)
        ids = [t.doc.id for part in (train, dev, test) for t in part]
        assert len(ids) == len(set(ids)) == len(corpus)

    def test_too_small(self):
        with pytest.raises(CorpusTooSmallError):
            make_splits([], seed=1)


class TestTaskTable:
    def test_unknown_task(self):
        with pytest.raises(UnknownTaskError):
            get_task("Nope")

    def test_inventory(self):
        assert set(TASKS) == {"ArgVsNonArg", "Justification", "Conclusion",
                              "TypeJust", "TypeConc", "Collective",
                              "Property", "Pivot"}
        assert TASKS["TypeJust"].metric == "macro_f1"
        assert TASKS["Collective"].conditioning == ("Property",)
        assert TASKS["Pivot"].conditioning == ("Justification", "Conclusion")
        assert DEFAULT_GRID == (1.0, 0.1, 0.2, 0.5)


class TestRunTask:
    def test_learnable_span_task(self, corpus):
        result = run_task(corpus, "Justification", FAST)
        assert len(result.runs) == 2
        assert result.mean_f1 > 0.6  # spans are lexically learnable here
        assert 0.0 <= result.std_f1

    def test_tweet_level_task_runs(self, corpus):
        result = run_task(corpus, "ArgVsNonArg", FAST)
        assert result.task == "ArgVsNonArg"
        assert all(r.best_reg_inverse in FAST.grid for r in result.runs)

    def test_macro_task_runs(self, corpus):
        result = run_task(corpus, "TypeConc", FAST)
        assert 0.0 <= result.mean_f1 <= 1.0

    def test_deterministic(self, corpus):
        a = run_task(corpus, "Collective", FAST)
        b = run_task(corpus, "Collective", FAST)
        assert a.to_dict() == b.to_dict()

    def test_gold_labels_in_features_give_perfect_f1(self, corpus):
        leak = TaskSpec("CollectiveLeak", "token", "target_f1",
                        category="Collective", conditioning=("Collective",))
        result = run_task(corpus, leak, FAST, conditioned=True)
        assert result.mean_f1 == 1.0

    def test_empty_conditioning_reduces_to_plain(self, corpus):
        plain = run_task(corpus, "ArgVsNonArg", FAST, conditioned=False)
        conditioned = run_task(corpus, "ArgVsNonArg", FAST, conditioned=True)
        for key in ("runs", "mean_f1", "std_f1", "mean_precision", "mean_recall"):
            assert plain.to_dict()[key] == conditioned.to_dict()[key]

    def test_no_test_set_leakage(self, corpus):
        task = get_task("Justification")
        record, model = run_single_seed(corpus, task, 1, FAST)
        _, _, test = make_splits(corpus, 1)
        test_ids = {t.doc.id for t in test}
        perturbed = [
            AnnotatedTweet(doc=t.doc, argumentative=t.argumentative,
                           components=[],
                           justification_type=t.justification_type,
                           conclusion_type=t.conclusion_type)
            if t.doc.id in test_ids else t
            for t in corpus
        ]
        record2, model2 = run_single_seed(perturbed, task, 1, FAST)
        assert np.array_equal(model.weights_, model2.weights_)
        assert np.array_equal(model.bias_, model2.bias_)
        assert record2.f1 != record.f1  # the evaluation did change


class TestConditionedSuite:
    def test_pairs_structure(self, corpus):
        pairs = run_conditioned_suite(corpus, FAST, tasks=("Collective",))
        (plain, conditioned), = pairs
        assert plain.task == conditioned.task == "Collective"
        assert not plain.conditioned
        assert conditioned.conditioned

    def test_lr_embed_requires_table(self, corpus):
        config = RunConfig(model_family="lr_embed", seeds=(1,), grid=(1.0,))
        with pytest.raises(ValueError):
            run_task(corpus, "Justification", config)

    def test_lr_embed_end_to_end(self, corpus, tmp_path):
        from counterarg.models import EmbeddingTable
        from counterarg.tokens import tokenize
        import numpy as np

        rng = np.random.default_rng(0)
        words = sorted({t.surface for tw in corpus for t in tokenize(tw.doc).tokens})
        table = EmbeddingTable({w: rng.normal(size=6) for w in words}, 6)
        table.save(tmp_path / "vec.txt")
        config = RunConfig(model_family="lr_embed", grid=(1.0,), seeds=(1,),
                           max_epochs=80,
                           embeddings=EmbeddingTable.load(tmp_path / "vec.txt"))
        result = run_task(corpus, "Conclusion", config)
        assert result.model_family == "lr_embed"
        assert 0.0 <= result.mean_f1 <= 1.0


class TestReferenceHyperparams:
    def test_lookup(self):
        from counterarg.experiments import reference_reg_inverse

        assert reference_reg_inverse("Conclusion", "lr") == 0.1
        assert reference_reg_inverse("Pivot", "lr_embed", conditioned=True) == 0.2
        assert reference_reg_inverse("Property", "lr_embed") == 0.1
        assert reference_reg_inverse("Property", "lr_embed", conditioned=True) is None
        for task, value in ((t, reference_reg_inverse(t)) for t in
                            ("ArgVsNonArg", "Justification", "Collective")):
            assert value in DEFAULT_GRID, task


class TestReporting:
    def _fixed_results(self):
        return [
            ExperimentResult("Justification", "lr", False, [
                RunRecord(1, 1.0, 0.50, 0.50, 0.45, 0.60),
                RunRecord(2, 0.1, 0.52, 0.54, 0.50, 0.58)]),
            ExperimentResult("ArgVsNonArg", "lr", False, [
                RunRecord(1, 0.5, 0.10, 0.00, 0.00, 0.00)]),
        ]

    def test_emit_report_sorted_and_formatted(self):
        text = emit_report(self._fixed_results())
        lines = text.splitlines()
        assert lines[0].startswith("task")
        # canonical order: ArgVsNonArg before Justification
        assert lines[2].startswith("ArgVsNonArg")
        assert lines[3].startswith("Justification")
        assert "0.520" in lines[3]  # mean F1
        assert "0.020" in lines[3]  # population std
        assert emit_report(self._fixed_results()) == text

    def test_emit_report_empty(self):
        text = emit_report([])
        assert text.splitlines()[0].startswith("task")

    def test_results_json_recomputable(self):
        payload = json.loads(results_to_json(self._fixed_results()))
        just = next(r for r in payload if r["task"] == "Justification")
        run_f1 = [run["f1"] for run in just["runs"]]
        assert np.mean(run_f1) == pytest.approx(just["mean_f1"])
        assert np.std(run_f1) == pytest.approx(just["std_f1"])
