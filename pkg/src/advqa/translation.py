"""Translator capability, statement translation, and tag-based answer alignment.

Answers survive context translation by wrapping the source span in pseudo
tags (`⟦a⟧ … ⟦/a⟧` by default; a compatibility style switches to literal
`<a> … </a>` for services that pass HTML through). A translation is kept only
when exactly one tag pair comes back, in order.
"""

from __future__ import annotations

import dataclasses
import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .corpus import AnswerSpan, Corpus, QaInstance, check_language, verify_extraction
from .errors import TranslationError

PSEUDO_MARKERS = ("⟦a⟧", "⟦/a⟧")  # ⟦a⟧ ⟦/a⟧
HTML_MARKERS = ("<a>", "</a>")

DEFAULT_SHARD_SIZE = 1000


class IdentityTranslator:
    """Returns the input unchanged; the src == dst degenerate case for tests."""

    def translate(self, text: str, src: str, dst: str) -> str:
        return text


class DictionaryTranslator:
    """Deterministic word-mapping mock translator.

    Each word maps through `lexicon` or, failing that, to `word_dst`. Marker
    pairs are preserved verbatim unless the input contains `drop_marker_token`,
    which simulates a tag-losing translation (decision is a pure function of
    the input, so output is scheduling-independent). `reorder=True` reverses
    word order while keeping a marker-wrapped region atomic.
    """

    def __init__(
        self,
        lexicon: dict[str, str] | None = None,
        reorder: bool = False,
        drop_marker_token: str | None = None,
        markers: tuple[str, str] = PSEUDO_MARKERS,
    ):
        self.lexicon = lexicon or {}
        self.reorder = reorder
        self.drop_marker_token = drop_marker_token
        self.markers = markers

    def _map_words(self, text: str, dst: str) -> str:
        return re.sub(
            r"\w+", lambda m: self.lexicon.get(m.group(0), f"{m.group(0)}_{dst}"), text
        )

    def translate(self, text: str, src: str, dst: str) -> str:
        if src == dst:
            return text
        opener, closer = self.markers
        # Split out marker-wrapped regions so their contents map but the
        # glyphs themselves stay untouched.
        pattern = re.escape(opener) + r"(.*?)" + re.escape(closer)
        pieces: list[str] = []
        last = 0
        for m in re.finditer(pattern, text, flags=re.DOTALL):
            pieces.append(self._map_words(text[last : m.start()], dst))
            pieces.append(opener + self._map_words(m.group(1), dst) + closer)
            last = m.end()
        pieces.append(self._map_words(text[last:], dst))
        out = "".join(pieces)

        if self.reorder:
            unit = re.escape(opener) + r".*?" + re.escape(closer)
            tokens = re.findall(unit + r"|\S+", out, flags=re.DOTALL)
            out = " ".join(reversed(tokens))
        if self.drop_marker_token and self.drop_marker_token in text:
            out = out.replace(opener, "").replace(closer, "")
        return out


class HttpTranslator:
    """Generic plain-text HTTP translation client.

    Configuration comes from environment variables: ADVQA_TRANSLATOR_URL
    (endpoint), ADVQA_TRANSLATOR_KEY (bearer credential, optional) and
    ADVQA_TRANSLATOR_MAX_INFLIGHT. Transient failures retry with exponential
    backoff.
    """

    def __init__(self, url: str | None = None, api_key: str | None = None, retries: int = 5):
        self.url = url or os.environ.get("ADVQA_TRANSLATOR_URL")
        self.api_key = api_key or os.environ.get("ADVQA_TRANSLATOR_KEY")
        self.retries = retries
        if not self.url:
            raise TranslationError("no translator endpoint configured (ADVQA_TRANSLATOR_URL)")

    def translate(self, text: str, src: str, dst: str) -> str:
        if src == dst:
            return text
        headers = {"Content-Type": "text/plain; charset=utf-8"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        delay = 1.0
        last_error = None
        for _ in range(self.retries):
            try:
                resp = requests.post(
                    self.url,
                    params={"source": src, "target": dst},
                    data=text.encode("utf-8"),
                    headers=headers,
                    timeout=60,
                )
                if resp.status_code == 200:
                    return resp.text
                last_error = f"HTTP {resp.status_code}"
                if resp.status_code < 500:
                    break
            except requests.RequestException as exc:
                last_error = str(exc)
            time.sleep(delay)
            delay *= 2
        raise TranslationError(f"translation request failed: {last_error}")


def max_inflight(default: int = 4) -> int:
    try:
        return max(1, int(os.environ.get("ADVQA_TRANSLATOR_MAX_INFLIGHT", default)))
    except ValueError:
        return default


@dataclass(frozen=True)
class AlignedTranslation:
    """Result of translating a context with a tagged answer span."""

    context: str
    answer: AnswerSpan | None
    success: bool


def _find_single_pair(text: str, markers: tuple[str, str]) -> tuple[int, int] | None:
    opener, closer = markers
    if text.count(opener) != 1 or text.count(closer) != 1:
        return None
    o = text.index(opener)
    c = text.index(closer)
    if c < o + len(opener):
        return None
    return o, c


def strip_markers(text: str, markers: tuple[str, str] = PSEUDO_MARKERS) -> str:
    return text.replace(markers[0], "").replace(markers[1], "")


def align_answer(
    context_en: str,
    answer: AnswerSpan,
    dst: str,
    translator,
    markers: tuple[str, str] = PSEUDO_MARKERS,
) -> AlignedTranslation:
    """Translate a context while recovering the answer span via marker tags.

    Success requires exactly one open and one close tag in order in the
    translation; the enclosed text becomes the new answer at its recomputed
    offset. Failure is an in-band result, never an exception.
    """
    check_language(dst)
    verify_extraction("<align>", context_en, answer)
    opener, closer = markers
    tagged = (
        context_en[: answer.start]
        + opener
        + answer.text
        + closer
        + context_en[answer.end :]
    )
    out = translator.translate(tagged, "en", dst)
    pair = _find_single_pair(out, markers)
    if pair is None:
        return AlignedTranslation(context=strip_markers(out, markers), answer=None, success=False)
    o, c = pair
    inner = out[o + len(opener) : c]
    lead = len(inner) - len(inner.lstrip())
    stripped = inner.strip()
    if not stripped:
        return AlignedTranslation(context=strip_markers(out, markers), answer=None, success=False)
    new_context = out[:o] + inner + out[c + len(closer) :]
    span = AnswerSpan(text=stripped, start=o + lead)
    verify_extraction("<align>", new_context, span)
    return AlignedTranslation(context=new_context, answer=span, success=True)


def translate_statement(statement, dst: str, translator, markers: tuple[str, str] = PSEUDO_MARKERS):
    """Translate an English adversarial statement, carrying its metadata over.

    The fake answer is re-rendered from the translation when the translator
    preserves the marker pair around it; otherwise it stays as the English
    surface with fake_answer_lang left at "en".
    """
    check_language(dst)
    if dst == statement.lang:
        return statement
    if statement.lang != "en":
        raise TranslationError(f"statements are authored in en, got {statement.lang!r}")
    opener, closer = markers

    fake = statement.fake_answer
    if fake and fake in statement.text:
        tagged = statement.text.replace(fake, opener + fake + closer, 1)
        out = translator.translate(tagged, "en", dst)
        pair = _find_single_pair(out, markers)
        if pair is not None:
            o, c = pair
            inner = out[o + len(opener) : c].strip()
            if inner:
                text = out[:o] + out[o + len(opener) : c] + out[c + len(closer) :]
                return dataclasses.replace(
                    statement, text=text, lang=dst, fake_answer=inner, fake_answer_lang=dst
                )
        return dataclasses.replace(
            statement, text=strip_markers(out, markers), lang=dst, fake_answer_lang="en"
        )
    out = translator.translate(statement.text, "en", dst)
    return dataclasses.replace(statement, text=strip_markers(out, markers), lang=dst)


@dataclass
class AlignmentReport:
    """Per-language answer-alignment success counts."""

    rows: list[tuple[str, int, int]]  # (language, attempted, succeeded)

    def ratio(self, lang: str) -> float:
        for row_lang, attempted, succeeded in self.rows:
            if row_lang == lang:
                return succeeded / attempted if attempted else 0.0
        raise KeyError(lang)


def write_alignment_report(report: AlignmentReport, path) -> None:
    lines = ["language\tattempted\tsucceeded\tratio"]
    for lang, attempted, succeeded in report.rows:
        ratio = succeeded / attempted if attempted else 0.0
        lines.append(f"{lang}\t{attempted}\t{succeeded}\t{ratio:.4f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _translate_one(inst: QaInstance, dst: str, translator, markers) -> dict:
    question = translator.translate(inst.question, "en", dst)
    aligned = align_answer(inst.context, inst.answers[0], dst, translator, markers)
    if not aligned.success:
        return {"id": inst.id, "ok": False}
    return {
        "id": inst.id,
        "ok": True,
        "question": question,
        "context": aligned.context,
        "answer_text": aligned.answer.text,
        "answer_start": aligned.answer.start,
    }


def build_mt_squad(
    corpus: Corpus,
    targets: list[str],
    translator,
    markers: tuple[str, str] = PSEUDO_MARKERS,
    checkpoint_dir=None,
    shard_size: int = DEFAULT_SHARD_SIZE,
    jobs: int = 1,
) -> tuple[dict[str, Corpus], AlignmentReport]:
    """Translate question+context per target language with answer alignment.

    Instances whose alignment fails are dropped. With `checkpoint_dir`, work
    is sharded (shard_size instances per shard); existing shard files are
    reused, making interrupted runs resumable. Results are assembled in input
    order regardless of `jobs`, so output is order-deterministic.
    """
    for inst in corpus.instances:
        if inst.question_lang != "en" or inst.context_lang != "en":
            raise TranslationError(f"build_mt_squad needs an en/en corpus (instance {inst.id})")

    out: dict[str, Corpus] = {}
    rows: list[tuple[str, int, int]] = []
    instances = corpus.instances
    for dst in targets:
        check_language(dst)
        records: list[dict] = []
        for shard_idx in range(0, max(len(instances), 1), shard_size):
            shard = instances[shard_idx : shard_idx + shard_size]
            if not shard:
                continue
            shard_path = None
            if checkpoint_dir is not None:
                shard_path = Path(checkpoint_dir) / f"mt-{dst}-shard-{shard_idx // shard_size:04d}.json"
                if shard_path.exists():
                    records.extend(json.loads(shard_path.read_text(encoding="utf-8")))
                    continue
            if jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    shard_records = list(
                        pool.map(lambda i: _translate_one(i, dst, translator, markers), shard)
                    )
            else:
                shard_records = [_translate_one(i, dst, translator, markers) for i in shard]
            if shard_path is not None:
                shard_path.parent.mkdir(parents=True, exist_ok=True)
                shard_path.write_text(
                    json.dumps(shard_records, ensure_ascii=False), encoding="utf-8"
                )
            records.extend(shard_records)

        kept = []
        by_record = {r["id"]: r for r in records}
        for inst in instances:
            rec = by_record.get(inst.id)
            if rec is None or not rec["ok"]:
                continue
            kept.append(
                QaInstance(
                    id=inst.id,
                    question=rec["question"],
                    question_lang=dst,
                    context=rec["context"],
                    context_lang=dst,
                    answers=(AnswerSpan(text=rec["answer_text"], start=rec["answer_start"]),),
                    provenance="translated",
                )
            )
        kept_ids = {i.id for i in kept}
        groups = {
            title: tuple(i for i in ids if i in kept_ids)
            for title, ids in corpus.title_groups.items()
        }
        groups = {t: ids for t, ids in groups.items() if ids}
        out[dst] = Corpus(instances=tuple(kept), title_groups=groups)
        rows.append((dst, len(instances), len(kept)))
    return out, AlignmentReport(rows=rows)
