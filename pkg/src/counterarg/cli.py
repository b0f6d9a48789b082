"""Command-line entry point wiring the whole toolkit together.

Exit codes: 0 on success, 1 when the data fails validation or a metric
condition, 2 for usage and I/O problems. stdout carries the primary report so
commands can be piped; diagnostics go to stderr. Every artifact-producing run
drops a ``manifest.json`` (tool version, resolved configuration, corpus hash)
next to its outputs so reruns can be compared.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .agreement import TweetSetMismatchError, agreement_report
from .corpus import (
    MappingConfig,
    UnknownLabelError,
    load_corpus,
    save_corpus,
    tweet_to_dict,
)
from .experiments import (
    RunConfig,
    TASK_ORDER,
    UnknownTaskError,
    emit_report,
    get_task,
    results_to_json,
    run_conditioned_suite,
    run_single_seed,
    run_suite,
    run_task,
)
from .models import EmbeddingTable, save_model
from .scaffold import (
    corpus_scaffolds,
    load_templates,
    scaffolds_to_jsonl,
    scaffolds_to_text,
)
from .scheme import Severity, validate_corpus
from .standoff import StandoffError
from .stats import corpus_stats

CORPUS_ENV_VAR = "COUNTERARG_CORPUS"

_DATA_ERRORS = (StandoffError, UnknownLabelError, TweetSetMismatchError)


class UsageError(ValueError):
    """Bad option combination; maps to exit code 2."""


def _corpus_hash(tweets) -> str:
    payload = json.dumps([tweet_to_dict(t) for t in tweets],
                         sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def _write_manifest(out_dir: Path, command: str, args: argparse.Namespace,
                    corpus_hash: str) -> None:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "out_dir") and v is not None}
    config = {k: (str(v) if isinstance(v, Path) else v) for k, v in config.items()}
    manifest = {
        "tool": "counterarg",
        "version": __version__,
        "command": command,
        "config": config,
        "corpus_hash": corpus_hash,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_mapping(args) -> MappingConfig | None:
    if getattr(args, "mapping", None):
        return MappingConfig.from_json(args.mapping)
    return None


def _load_the_corpus(args):
    path = getattr(args, "corpus", None) or os.environ.get(CORPUS_ENV_VAR)
    if not path:
        raise FileNotFoundError(
            f"no corpus given: pass --corpus or set {CORPUS_ENV_VAR}")
    on_unknown = "skip" if getattr(args, "skip_unknown_lines", False) else "error"
    return load_corpus(path, mapping=_load_mapping(args), on_unknown_line=on_unknown)


def _run_config(args) -> RunConfig:
    embeddings = None
    if getattr(args, "embeddings", None):
        embeddings = EmbeddingTable.load(args.embeddings)
    family = getattr(args, "family", "lr")
    if family == "lr_embed" and embeddings is None:
        raise UsageError("--family lr_embed needs --embeddings")
    return RunConfig(
        model_family=family,
        grid=tuple(args.grid),
        seeds=tuple(args.seeds),
        window=args.window,
        min_count=args.min_count,
        include_punct=args.include_punct,
        max_epochs=args.max_epochs,
        embeddings=embeddings,
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    corpus = _load_the_corpus(args)
    out_dir = _out_dir(args)
    save_corpus(corpus, out_dir / "corpus.json")
    _write_manifest(out_dir, "ingest", args, _corpus_hash(corpus))
    print(f"{len(corpus)} tweets -> {out_dir / 'corpus.json'}")
    return 0


def cmd_validate(args) -> int:
    corpus = _load_the_corpus(args)
    issues = validate_corpus(corpus)
    out_dir = _out_dir(args)
    report_lines = [
        f"{i.severity.value.upper():<8} {i.tweet_id:<24} {i.code.value:<36} {i.message}"
        for i in issues
    ]
    report = "\n".join(report_lines) + ("\n" if report_lines else "")
    (out_dir / "issues.txt").write_text(report, encoding="utf-8")
    (out_dir / "issues.json").write_text(json.dumps([
        {"tweet_id": i.tweet_id, "code": i.code.value,
         "severity": i.severity.value, "message": i.message}
        for i in issues], indent=2, sort_keys=True), encoding="utf-8")
    _write_manifest(out_dir, "validate", args, _corpus_hash(corpus))
    sys.stdout.write(report)
    n_errors = sum(1 for i in issues if i.severity == Severity.ERROR)
    print(f"{len(corpus)} tweets, {n_errors} errors, {len(issues) - n_errors} warnings")
    return 1 if n_errors else 0


def cmd_stats(args) -> int:
    corpus = _load_the_corpus(args)
    report = corpus_stats(corpus)
    out_dir = _out_dir(args)
    (out_dir / "stats.txt").write_text(report.to_text(), encoding="utf-8")
    (out_dir / "stats.json").write_text(report.to_json(), encoding="utf-8")
    _write_manifest(out_dir, "stats", args, _corpus_hash(corpus))
    sys.stdout.write(report.to_text())
    return 0


def cmd_agreement(args) -> int:
    mapping = _load_mapping(args)
    corpus_a = load_corpus(args.corpus_a, mapping=mapping)
    corpus_b = load_corpus(args.corpus_b, mapping=mapping)
    model = load_corpus(args.model, mapping=mapping) if args.model else None
    report = agreement_report(corpus_a, corpus_b, model_corpus=model,
                              include_punct=args.include_punct,
                              pivot_merge=not args.pivot_per_side)
    out_dir = _out_dir(args)
    (out_dir / "agreement.txt").write_text(report.to_text(), encoding="utf-8")
    (out_dir / "agreement.json").write_text(report.to_json(), encoding="utf-8")
    _write_manifest(out_dir, "agreement", args, _corpus_hash(corpus_a))
    sys.stdout.write(report.to_text())
    return 0


def cmd_train(args) -> int:
    corpus = _load_the_corpus(args)
    task = get_task(args.task)
    config = _run_config(args)
    seed = args.seeds[0]
    record, model = run_single_seed(corpus, task, seed, config,
                                    conditioned=args.conditioned)
    out_dir = _out_dir(args)
    save_model(model, out_dir / f"{task.name}.npz",
               extra_meta={"task": task.name, "seed": seed,
                           "conditioned": args.conditioned,
                           "model_family": config.model_family})
    (out_dir / f"{task.name}.metrics.json").write_text(json.dumps({
        "task": task.name, "seed": seed, "conditioned": args.conditioned,
        "best_reg_inverse": record.best_reg_inverse, "dev_f1": record.dev_f1,
        "test_f1": record.f1, "test_precision": record.precision,
        "test_recall": record.recall}, indent=2, sort_keys=True),
        encoding="utf-8")
    _write_manifest(out_dir, "train", args, _corpus_hash(corpus))
    print(f"{task.name} seed={seed} reg_inverse={record.best_reg_inverse} "
          f"dev_f1={record.dev_f1:.3f} test_f1={record.f1:.3f}")
    return 0


def cmd_eval(args) -> int:
    corpus = _load_the_corpus(args)
    config = _run_config(args)
    if args.conditioned_suite:
        pairs = run_conditioned_suite(corpus, config)
        results = [r for pair in pairs for r in pair]
    elif args.conditioned:
        results = [run_task(corpus, name, config, conditioned=True)
                   for name in args.tasks]
    else:
        results = run_suite(corpus, config, tasks=tuple(args.tasks))
    out_dir = _out_dir(args)
    (out_dir / "results.txt").write_text(emit_report(results), encoding="utf-8")
    (out_dir / "results.json").write_text(results_to_json(results), encoding="utf-8")
    _write_manifest(out_dir, "eval", args, _corpus_hash(corpus))
    sys.stdout.write(emit_report(results))
    return 0


def cmd_scaffold(args) -> int:
    corpus = _load_the_corpus(args)
    templates = load_templates(args.templates) if args.templates else None
    records = corpus_scaffolds(corpus, templates, types=tuple(args.types))
    out_dir = _out_dir(args)
    (out_dir / "scaffolds.jsonl").write_text(
        scaffolds_to_jsonl(records), encoding="utf-8")
    (out_dir / "scaffolds.txt").write_text(
        scaffolds_to_text(records, corpus), encoding="utf-8")
    _write_manifest(out_dir, "scaffold", args, _corpus_hash(corpus))
    print(f"{len(records)} scaffolds for {len(corpus)} tweets "
          f"-> {out_dir / 'scaffolds.jsonl'}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="counterarg",
        description="Argument-component annotation toolkit for hate-speech "
                    "counter-narratives.")
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True):
        if corpus:
            p.add_argument("--corpus",
                           help=f"corpus directory or corpus JSON "
                                f"(default: ${CORPUS_ENV_VAR})")
        p.add_argument("--mapping", help="JSON mapping config for ingest")
        p.add_argument("--out-dir", default="counterarg-out",
                       help="directory for artifacts (default: %(default)s)")

    def experiment_opts(p):
        p.add_argument("--family", choices=("lr", "lr_embed"), default="lr")
        p.add_argument("--embeddings", help="token embedding file (text format)")
        p.add_argument("--grid", type=float, nargs="+",
                       default=[1.0, 0.1, 0.2, 0.5],
                       help="inverse regularization strengths to try")
        p.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
        p.add_argument("--window", type=int, default=2,
                       help="context window for token features")
        p.add_argument("--min-count", type=int, default=1)
        p.add_argument("--max-epochs", type=int, default=1000)
        p.add_argument("--include-punct", action=argparse.BooleanOptionalAction,
                       default=True,
                       help="keep punctuation tokens in token-level tasks")

    p = sub.add_parser("ingest", help="normalize a standoff corpus directory")
    common(p)
    p.add_argument("--skip-unknown-lines", action="store_true",
                   help="ignore annotation line types outside T/A/#")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check every tweet against the scheme rules")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="per-language corpus statistics")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("agreement", help="agreement between two annotations")
    common(p, corpus=False)
    p.add_argument("--corpus-a", required=True)
    p.add_argument("--corpus-b", required=True)
    p.add_argument("--model", help="optional model-predicted corpus for a model-F1 row")
    p.add_argument("--include-punct", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--pivot-per-side", action="store_true",
                   help="report the two pivot sides as separate rows")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("train", help="train and save one task model")
    common(p)
    experiment_opts(p)
    p.add_argument("--task", required=True, choices=TASK_ORDER)
    p.add_argument("--conditioned", action="store_true",
                   help="append gold prior-annotation features")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="run the seeded evaluation protocol")
    common(p)
    experiment_opts(p)
    p.add_argument("--tasks", nargs="+", default=list(TASK_ORDER),
                   choices=TASK_ORDER)
    p.add_argument("--conditioned", action="store_true")
    p.add_argument("--conditioned-suite", action="store_true",
                   help="paired unconditioned/conditioned runs for the staged tasks")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scaffold", help="emit counter-narrative scaffolds")
    common(p)
    p.add_argument("--types", nargs="+", default=["A", "B", "C"],
                   choices=["A", "B", "C"])
    p.add_argument("--templates", help="alternative scaffold template file")
    p.set_defaults(func=cmd_scaffold)

    # config-file defaults must reach the subparsers as well: a subparser's
    # own defaults would otherwise overwrite anything set on the parent
    parser._command_parsers = list(sub.choices.values())
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    # --config supplies defaults; explicit flags still win because argparse
    # applies set_defaults before parsing the actual arguments
    preliminary, _ = parser.parse_known_args(argv)
    if preliminary.config:
        try:
            defaults = json.loads(Path(preliminary.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        parser.set_defaults(**defaults)
        for command_parser in parser._command_parsers:
            command_parser.set_defaults(**defaults)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UnknownTaskError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, NotADirectoryError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
