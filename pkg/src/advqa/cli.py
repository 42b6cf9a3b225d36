"""Single-executable pipeline frontend.

Every subcommand writes a run-manifest JSON next to its outputs holding the
fully resolved configuration (seed, policy, paths, jobs); rerunning a command
with the same configuration reproduces every output byte for byte, for any
`--jobs` value. All randomness flows from `--seed`.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 external-service
error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import __version__
from .annotation import read_annotations, write_annotations
from .attacks import (
    AttackConfig,
    AttackKind,
    StatementLanguagePolicy,
    attack_corpus,
    write_sidecar,
    write_skip_report,
)
from .corpus import read_corpus, write_corpus
from .defense import build_defense_set, build_defense_union
from .entity_pool import build_pool, read_pool, write_pool
from .errors import AdvqaError, TranslationError
from .evaluation import (
    attack_impact,
    gxlt,
    load_normalization_config,
    read_gxlt_report,
    render_gxlt_table,
    render_impact_table,
    write_gxlt_report,
)
from .patterns import pattern_stats, write_pattern_stats
from .translation import (
    DictionaryTranslator,
    HttpTranslator,
    IdentityTranslator,
    build_mt_squad,
    max_inflight,
    write_alignment_report,
)

_PAIR_NAME = re.compile(r"context-([a-z]{2})-question-([a-z]{2})\.json$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _comma_list(text: str) -> list[str]:
    return [part for part in text.split(",") if part]


def _translator(name: str):
    if name == "identity":
        return IdentityTranslator()
    if name == "dict":
        return DictionaryTranslator()
    if name == "http":
        return HttpTranslator()
    raise UsageError(f"unknown translator {name!r}")


def _read_answer_entities(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        record_id, _, label = line.partition("\t")
        out[record_id] = label
    return out


def _read_predictions(path) -> dict[str, str]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _write_manifest(primary_out: Path, command: str, options: dict) -> None:
    manifest = {"command": command, "options": options}
    path = primary_out.with_name(primary_out.stem + ".manifest.json")
    path.write_text(
        json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def _options(args, keys) -> dict:
    return {key: getattr(args, key) for key in keys}


def _detect_pair(path: Path, question_lang, context_lang) -> tuple[str, str]:
    m = _PAIR_NAME.search(path.name)
    if m:
        detected = (m.group(2), m.group(1))
    else:
        detected = ("en", "en")
    return question_lang or detected[0], context_lang or detected[1]


def _cmd_import_annotations(args) -> int:
    annotations = read_annotations(args.inp)
    write_annotations(annotations, args.out)
    _write_manifest(Path(args.out), "import-annotations", _options(args, ["inp", "out"]))
    print(f"imported {len(annotations)} annotation records -> {args.out}")
    return 0


def _cmd_mine_patterns(args) -> int:
    annotations = read_annotations(args.annotations)
    stats = pattern_stats(annotations)
    write_pattern_stats(stats, args.out)
    _write_manifest(Path(args.out), "mine-patterns", _options(args, ["annotations", "out"]))
    print(f"mined {len(stats)} distinct patterns from {len(annotations)} questions -> {args.out}")
    return 0


def _cmd_build_pool(args) -> int:
    annotations = read_annotations(args.annotations)
    contexts = read_annotations(args.contexts) if args.contexts else None
    pool = build_pool(annotations, contexts)
    write_pool(pool, args.out)
    _write_manifest(Path(args.out), "build-pool", _options(args, ["annotations", "contexts", "out"]))
    total = sum(len(v) for v in pool.by_type.values())
    print(f"pooled {total} entities across {len(pool.by_type)} types -> {args.out}")
    return 0


def _cmd_attack(args) -> int:
    question_lang, context_lang = _detect_pair(Path(args.inp), args.question_lang, args.context_lang)
    corpus = read_corpus(args.inp, question_lang, context_lang)
    annotations = read_annotations(args.annotations)
    pool = read_pool(args.pool)
    config = AttackConfig(
        kind=AttackKind(args.kind),
        policy=StatementLanguagePolicy.parse(args.statement_lang),
        seed=args.seed,
        answer_type_source=args.answer_type_source,
    )
    predictions = _read_predictions(args.predictions) if args.predictions else None
    answer_entities = _read_answer_entities(args.answer_entities) if args.answer_entities else None
    result = attack_corpus(
        corpus,
        annotations,
        pool,
        config,
        translator=_translator(args.translator),
        predictions=predictions,
        answer_entities=answer_entities,
        jobs=args.jobs,
    )
    out = Path(args.out)
    write_corpus(result.corpus, out)
    write_sidecar(result.metadata, out.with_name(out.stem + ".meta.json"))
    write_skip_report(result.skips, out.with_name(out.stem + ".skips.tsv"))
    _write_manifest(
        out,
        "attack",
        _options(
            args,
            [
                "kind", "statement_lang", "seed", "inp", "annotations", "pool",
                "out", "question_lang", "context_lang", "answer_type_source",
                "predictions", "answer_entities", "translator", "jobs",
            ],
        ),
    )
    print(
        f"attacked {len(result.metadata)}/{len(corpus)} instances "
        f"({len(result.skips)} skipped) -> {args.out}"
    )
    return 0


def _cmd_mt_augment(args) -> int:
    corpus = read_corpus(args.inp, "en", "en")
    targets = _comma_list(args.targets)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_dir = out_dir / "checkpoints" if args.checkpoint else None
    jobs = args.jobs
    if args.translator == "http":
        jobs = min(jobs, max_inflight())  # cap concurrent requests to the service
    corpora, report = build_mt_squad(
        corpus,
        targets,
        _translator(args.translator),
        checkpoint_dir=checkpoint_dir,
        shard_size=args.shard_size,
        jobs=jobs,
    )
    for lang, translated in corpora.items():
        write_corpus(translated, out_dir / f"context-{lang}-question-{lang}.json")
    write_alignment_report(report, out_dir / "alignment.tsv")
    _write_manifest(
        out_dir / "run.json",
        "mt-augment",
        _options(args, ["inp", "targets", "translator", "out_dir", "checkpoint", "shard_size", "jobs"]),
    )
    for lang, attempted, succeeded in report.rows:
        print(f"{lang}: aligned {succeeded}/{attempted}")
    return 0


def _cmd_defend(args) -> int:
    corpus = read_corpus(args.inp, "en", "en")
    annotations = read_annotations(args.annotations)
    pool = read_pool(args.pool)
    languages = _comma_list(args.languages)
    answer_entities = _read_answer_entities(args.answer_entities) if args.answer_entities else None
    translator = _translator(args.translator)
    if args.kind == "all":
        result = build_defense_union(
            corpus, annotations, pool, languages, translator, args.seed,
            answer_entities, args.fraction, args.jobs,
        )
    else:
        result = build_defense_set(
            corpus, annotations, pool, AttackKind(args.kind), languages, translator,
            args.seed, answer_entities, args.fraction, args.jobs,
        )
    if args.out:
        out = Path(args.out)
    else:
        out = Path(args.out_dir) / f"defense-{args.kind}-{'-'.join(languages)}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_corpus(result.corpus, out)
    write_sidecar(result.metadata, out.with_name(out.stem + ".meta.json"))
    write_skip_report(result.skips, out.with_name(out.stem + ".skips.tsv"))
    _write_manifest(
        out,
        "defend",
        _options(
            args,
            [
                "kind", "languages", "seed", "inp", "annotations", "pool", "out",
                "out_dir", "answer_entities", "translator", "fraction", "jobs",
            ],
        ),
    )
    print(f"defense corpus: {len(result.corpus)} instances -> {out}")
    return 0


def _cmd_evaluate(args) -> int:
    config = load_normalization_config(args.normalization) if args.normalization else None
    corpora = {}
    if args.pairs:
        for path in sorted(Path(args.pairs).iterdir()):
            m = _PAIR_NAME.search(path.name)
            if not m:
                continue
            context_lang, question_lang = m.group(1), m.group(2)
            corpora[(question_lang, context_lang)] = read_corpus(path, question_lang, context_lang)
    else:
        if not args.inp:
            raise UsageError("evaluate needs --pairs or --in")
        question_lang, context_lang = _detect_pair(
            Path(args.inp), args.question_lang, args.context_lang
        )
        corpora[(question_lang, context_lang)] = read_corpus(args.inp, question_lang, context_lang)
    if not corpora:
        raise UsageError("no corpora found to evaluate")
    predictions = _read_predictions(args.preds)
    report = gxlt(corpora, predictions, config)
    out = Path(args.out)
    write_gxlt_report(report, out)
    out.with_name(out.stem + ".txt").write_text(
        render_gxlt_table(report) + "\n", encoding="utf-8"
    )
    _write_manifest(
        out,
        "evaluate",
        _options(args, ["pairs", "inp", "question_lang", "context_lang", "preds", "out", "normalization", "jobs"]),
    )
    print(f"mean F1 = {report.mean_f1:.1f}, mean EM = {report.mean_em:.1f} -> {args.out}")
    return 0


def _cmd_report(args) -> int:
    baseline = read_gxlt_report(args.baseline)
    attacked = {}
    for spec_text in args.attacked:
        head, _, path = spec_text.partition("=")
        kind, _, policy = head.partition(":")
        if not path or not policy:
            raise UsageError(f"--attacked expects KIND:POLICY=path, got {spec_text!r}")
        attacked[(kind, policy)] = read_gxlt_report(path)
    impact = attack_impact(baseline, attacked)
    out = Path(args.out)
    doc = {
        "baseline_mean_f1": impact.baseline_mean_f1,
        "attacked": [
            {
                "kind": kind,
                "policy": policy,
                "mean_f1": mean_f1,
                "delta": impact.baseline_mean_f1 - mean_f1,
            }
            for (kind, policy), mean_f1 in sorted(impact.attacked.items())
        ],
    }
    out.write_text(json.dumps(doc, ensure_ascii=False) + "\n", encoding="utf-8")
    out.with_name(out.stem + ".txt").write_text(
        render_impact_table(impact) + "\n", encoding="utf-8"
    )
    _write_manifest(out, "report", _options(args, ["baseline", "attacked", "out"]))
    print(f"impact table over {len(attacked)} attacked reports -> {args.out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="advqa", description=__doc__)
    parser.add_argument("--version", action="version", version=f"advqa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    jobs_default = os.cpu_count() or 1

    p = sub.add_parser("import-annotations", help="validate and canonicalize a CoNLL-U file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_import_annotations)

    p = sub.add_parser("mine-patterns", help="emit the question-pattern frequency table")
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_mine_patterns)

    p = sub.add_parser("build-pool", help="harvest the typed entity pool")
    p.add_argument("--annotations", required=True)
    p.add_argument("--contexts", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_build_pool)

    p = sub.add_parser("attack", help="mutate a corpus with adversarial statements")
    p.add_argument("--kind", required=True, choices=[k.value for k in AttackKind])
    p.add_argument("--statement-lang", default="context")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--question-lang", default=None)
    p.add_argument("--context-lang", default=None)
    p.add_argument("--annotations", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--answer-type-source", default="gold", choices=["gold", "predictions"])
    p.add_argument("--predictions", default=None)
    p.add_argument("--answer-entities", default=None)
    p.add_argument("--translator", default="identity", choices=["identity", "dict", "http"])
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(handler=_cmd_attack)

    p = sub.add_parser("mt-augment", help="translate a corpus with answer alignment")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--targets", required=True, help="comma-separated language codes")
    p.add_argument("--translator", default="http", choices=["identity", "dict", "http"])
    p.add_argument("--out-dir", required=True)
    p.add_argument("--checkpoint", action="store_true")
    p.add_argument("--shard-size", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(handler=_cmd_mt_augment)

    p = sub.add_parser("defend", help="build an adversarially augmented training set")
    p.add_argument("--kind", required=True, choices=[k.value for k in AttackKind] + ["all"])
    p.add_argument("--languages", default="en")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--answer-entities", default=None)
    p.add_argument("--translator", default="identity", choices=["identity", "dict", "http"])
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(handler=_cmd_defend)

    p = sub.add_parser("evaluate", help="score predictions with the G-XLT protocol")
    p.add_argument("--pairs", default=None, help="directory of context-<cl>-question-<ql>.json files")
    p.add_argument("--in", dest="inp", default=None)
    p.add_argument("--question-lang", default=None)
    p.add_argument("--context-lang", default=None)
    p.add_argument("--preds", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--normalization", default=None)
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("report", help="attack-impact deltas against a baseline report")
    p.add_argument("--baseline", required=True)
    p.add_argument("--attacked", action="append", default=[], metavar="KIND:POLICY=PATH")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except TranslationError as exc:
        print(f"external service error: {exc}", file=sys.stderr)
        return 3
    except (AdvqaError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
