"""Standalone exporter entry point.

    qa-annotate --in corpus.json --out questions.conllu --targets questions
    qa-annotate --in corpus.json --out contexts.conllu --targets contexts
    qa-annotate --in preds.json --out pred-entities.tsv --targets predictions

Exit status is nonzero when any record was skipped; the summary lists them.
"""

from __future__ import annotations

import argparse
import sys

from .export import export_contexts, export_predictions, export_questions


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="qa-annotate", description=__doc__)
    parser.add_argument("--in", dest="inp", required=True, help="corpus or predictions JSON")
    parser.add_argument("--out", required=True)
    parser.add_argument(
        "--targets",
        choices=["questions", "contexts", "predictions"],
        default="questions",
    )
    args = parser.parse_args(argv)

    if args.targets == "questions":
        stats = export_questions(args.inp, args.out)
    elif args.targets == "contexts":
        stats = export_contexts(args.inp, args.out)
    else:
        stats = export_predictions(args.inp, args.out)

    print(f"wrote {stats.written} records to {args.out}")
    if stats.skipped:
        print(f"skipped {len(stats.skipped)} records:", file=sys.stderr)
        for record_id, reason in stats.skipped:
            print(f"  {record_id}: {reason}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
