"""In-memory model of extractive QA corpora and the SQuAD v1.1 / MLQA JSON format.

Offsets are counted in Unicode scalar values (Python string indices), never
bytes; MLQA contexts in ar/hi/zh make byte offsets ambiguous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AnswerSpanError, CorpusFormatError

LANGUAGES = ("en", "de", "es", "ar", "hi", "vi", "zh")

PROVENANCES = ("original", "mutated", "translated", "augmented")

# Sentence terminators. The CJK full-width set ends a sentence on its own;
# the rest must be followed by whitespace or end-of-text.
_CJK_TERMINATORS = frozenset("。！？")  # 。 ！ ？
_SPACED_TERMINATORS = frozenset(".!?؟।")  # . ! ? ؟ ।


def check_language(code: str) -> str:
    """Validate a 2-letter language tag against the closed 7-language set."""
    if code not in LANGUAGES:
        raise ValueError(f"unknown language tag {code!r}; expected one of {LANGUAGES}")
    return code


@dataclass(frozen=True)
class AnswerSpan:
    """A gold answer with its character offset into the context."""

    text: str
    start: int

    @property
    def end(self) -> int:
        return self.start + len(self.text)


@dataclass(frozen=True)
class QaInstance:
    """One question/context/answer triple with language tags."""

    id: str
    question: str
    question_lang: str
    context: str
    context_lang: str
    answers: tuple[AnswerSpan, ...]
    provenance: str = field(default="original", compare=False)

    def __post_init__(self):
        check_language(self.question_lang)
        check_language(self.context_lang)
        if not self.answers:
            raise ValueError(f"instance {self.id!r} has no answers")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        for a in self.answers:
            verify_extraction(self.id, self.context, a)


def verify_extraction(record_id: str, context: str, span: AnswerSpan) -> None:
    """Check the extraction identity: context[start:start+len] == text."""
    found = context[span.start : span.start + len(span.text)]
    if found != span.text:
        raise AnswerSpanError(record_id, span.start, span.text, found)


@dataclass(frozen=True)
class Corpus:
    """Ordered instances plus the article grouping of the source format."""

    instances: tuple[QaInstance, ...]
    title_groups: dict[str, tuple[str, ...]]

    def __post_init__(self):
        seen = set()
        for inst in self.instances:
            if inst.id in seen:
                raise CorpusFormatError("duplicate instance id", inst.id)
            seen.add(inst.id)

    def __len__(self) -> int:
        return len(self.instances)

    def by_id(self) -> dict[str, QaInstance]:
        return {inst.id: inst for inst in self.instances}


def corpus_from_instances(instances, default_title: str = "corpus") -> Corpus:
    """Build a Corpus from bare instances, grouping everything under one title."""
    instances = tuple(instances)
    groups = {default_title: tuple(i.id for i in instances)} if instances else {}
    return Corpus(instances=instances, title_groups=groups)


def read_corpus(
    path,
    question_lang: str,
    context_lang: str,
    provenance: str = "original",
) -> Corpus:
    """Read a SQuAD v1.1 / MLQA JSON file into a Corpus.

    Raises CorpusFormatError for malformed documents and AnswerSpanError when
    an answer_start does not reproduce the answer text.
    """
    check_language(question_lang)
    check_language(context_lang)
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "data" not in raw:
        raise CorpusFormatError("missing top-level 'data' list")

    instances = []
    title_groups: dict[str, list[str]] = {}
    for article in raw["data"]:
        title = article.get("title", "")
        ids = title_groups.setdefault(title, [])
        for paragraph in article.get("paragraphs", []):
            if "context" not in paragraph:
                raise CorpusFormatError(f"paragraph without context in article {title!r}")
            context = paragraph["context"]
            for qa in paragraph.get("qas", []):
                if "id" not in qa:
                    raise CorpusFormatError(f"qa without id in article {title!r}")
                qa_id = qa["id"]
                if "question" not in qa or "answers" not in qa:
                    raise CorpusFormatError("qa missing question or answers", qa_id)
                answers = tuple(
                    AnswerSpan(text=a["text"], start=a["answer_start"])
                    for a in qa["answers"]
                )
                if not answers:
                    raise CorpusFormatError("qa has an empty answers list", qa_id)
                instances.append(
                    QaInstance(
                        id=qa_id,
                        question=qa["question"],
                        question_lang=question_lang,
                        context=context,
                        context_lang=context_lang,
                        answers=answers,
                        provenance=provenance,
                    )
                )
                ids.append(qa_id)

    groups = {t: tuple(ids) for t, ids in title_groups.items() if ids}
    return Corpus(instances=tuple(instances), title_groups=groups)


def write_corpus(corpus: Corpus, path) -> None:
    """Write a Corpus back to the interchange format.

    Canonical emission: fixed key order, UTF-8, single line, trailing newline.
    Instances are grouped into articles by title (first-occurrence order) and
    into paragraphs by shared context within an article, mirroring the nesting
    read_corpus flattened.
    """
    id_to_title = {}
    for title, ids in corpus.title_groups.items():
        for qa_id in ids:
            id_to_title[qa_id] = title

    # A new article starts whenever the title changes between consecutive
    # instances, so interleaved-title corpora still round-trip in file order.
    articles: list[dict] = []
    for inst in corpus.instances:
        title = id_to_title.get(inst.id, "")
        if not articles or articles[-1]["title"] != title:
            articles.append({"title": title, "paragraphs": []})
        paragraphs = articles[-1]["paragraphs"]
        if paragraphs and paragraphs[-1]["context"] == inst.context:
            paragraph = paragraphs[-1]
        else:
            paragraph = {"context": inst.context, "qas": []}
            paragraphs.append(paragraph)
        paragraph["qas"].append(
            {
                "id": inst.id,
                "question": inst.question,
                "answers": [{"text": a.text, "answer_start": a.start} for a in inst.answers],
            }
        )

    doc = {"version": "1.1", "data": articles}
    data = json.dumps(doc, ensure_ascii=False)
    Path(path).write_text(data + "\n", encoding="utf-8")


def split_sentences(context: str, lang: str) -> list[int]:
    """Return strictly increasing sentence-boundary offsets, always including 0 and len.

    Rule-based: a boundary sits immediately after a terminator character.
    CJK terminators (。！？) bound a sentence unconditionally; ASCII .!? plus
    ؟ and । require a following whitespace or end-of-text. Segments between
    consecutive boundaries concatenate back to the original string.
    """
    check_language(lang)
    n = len(context)
    if n == 0:
        return [0]
    boundaries = {0, n}
    for i, ch in enumerate(context):
        if ch in _CJK_TERMINATORS:
            boundaries.add(i + 1)
        elif ch in _SPACED_TERMINATORS and (i + 1 == n or context[i + 1].isspace()):
            boundaries.add(i + 1)
    return sorted(boundaries)
