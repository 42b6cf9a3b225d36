"""Turn corpus files into CoNLL-U annotation files and entity-label mappings.

Output contract (shared with the consumer toolkit): 10-column CoNLL-U, one
record per item opened by `# qa_id = <id>`, NER tags in MISC as
`NER=<LABEL>-<B|I>`, `SpaceAfter=No` where the source had no space. Records
failing the tree validation are logged and skipped; the run summary reports
them.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .pipeline import Word, annotate


class ExportStats:
    def __init__(self):
        self.written = 0
        self.skipped: list[tuple[str, str]] = []

    def ok(self) -> bool:
        return not self.skipped


def _validate(qa_id: str, words: list[Word]) -> str | None:
    """Return a reason when the annotation violates the consumer's invariants."""
    n = len(words)
    if n == 0:
        return "no tokens"
    roots = [w for w in words if w.head == 0]
    if len(roots) != 1:
        return f"{len(roots)} roots"
    for w in words:
        if w.head == w.index or not (0 <= w.head <= n):
            return f"bad head {w.head} at token {w.index}"
    for w in words:
        seen = set()
        cur = w.index
        while cur != 0:
            if cur in seen:
                return f"cycle through token {w.index}"
            seen.add(cur)
            cur = words[cur - 1].head
    return None


def _record_lines(qa_id: str, words: list[Word]) -> list[str]:
    lines = [f"# qa_id = {qa_id}"]
    for w in words:
        misc = []
        if w.ner:
            misc.append(f"NER={w.ner}")
        if not w.space_after and w.index != len(words):
            misc.append("SpaceAfter=No")
        lines.append(
            "\t".join(
                [
                    str(w.index), w.surface, w.lemma, w.upos, w.xpos, "_",
                    str(w.head), w.deprel, "_", "|".join(misc) if misc else "_",
                ]
            )
        )
    return lines


def _iter_qas(corpus_path):
    doc = json.loads(Path(corpus_path).read_text(encoding="utf-8"))
    for article in doc.get("data", []):
        for paragraph in article.get("paragraphs", []):
            for qa in paragraph.get("qas", []):
                yield qa["id"], qa["question"], paragraph["context"]


def _write_records(records, out_path) -> None:
    blocks = ["\n".join(lines) for lines in records]
    Path(out_path).write_text("\n\n".join(blocks) + "\n", encoding="utf-8")


def export_questions(corpus_path, out_path) -> ExportStats:
    """One CoNLL-U record per question, keyed by qa id, in file order."""
    stats = ExportStats()
    records = []
    for qa_id, question, _context in _iter_qas(corpus_path):
        words = annotate(question)
        reason = _validate(qa_id, words)
        if reason:
            stats.skipped.append((qa_id, reason))
            print(f"skip {qa_id}: {reason}", file=sys.stderr)
            continue
        records.append(_record_lines(qa_id, words))
        stats.written += 1
    _write_records(records, out_path)
    return stats


def export_contexts(corpus_path, out_path) -> ExportStats:
    """One record per unique context, keyed by ctx::<first qa id>."""
    stats = ExportStats()
    records = []
    seen: set[str] = set()
    for qa_id, _question, context in _iter_qas(corpus_path):
        if context in seen:
            continue
        seen.add(context)
        key = f"ctx::{qa_id}"
        words = annotate(context)
        reason = _validate(key, words)
        if reason:
            stats.skipped.append((key, reason))
            print(f"skip {key}: {reason}", file=sys.stderr)
            continue
        records.append(_record_lines(key, words))
        stats.written += 1
    _write_records(records, out_path)
    return stats


def export_predictions(predictions_path, out_path) -> ExportStats:
    """Two-column (id, label) TSV typing each predicted answer string.

    The label is the first entity found in the prediction; untypeable strings
    get MISC so the consumer's fallback rule stays explicit.
    """
    stats = ExportStats()
    predictions = json.loads(Path(predictions_path).read_text(encoding="utf-8"))
    lines = []
    for record_id, text in predictions.items():
        words = annotate(str(text))
        label = "MISC"
        for w in words:
            if w.ner:
                label = w.ner.rsplit("-", 1)[0]
                break
        lines.append(f"{record_id}\t{label}")
        stats.written += 1
    Path(out_path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return stats
