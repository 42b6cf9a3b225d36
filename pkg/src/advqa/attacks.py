"""The four attack strategies: statement instantiation and context insertion.

RARQ/RAOQ carry a fake answer drawn by the (predicted or gold) answer type;
NARQ/NAOQ delete the placeholder so no candidate span exists. *RQ variants
additionally swap one marked question entity. Statements are authored in
English, translated per policy, and spliced into the context at a random
sentence boundary with gold-span offsets repaired.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .annotation import AnnotatedQuestion
from .corpus import Corpus, QaInstance, AnswerSpan, check_language, split_sentences
from .entity_pool import EntityPool, FALLBACK_LABEL, sample
from .errors import (
    GenerationError,
    PredictionLookupError,
    SamplingError,
    TranslationError,
)
from .patterns import mark_entities, mine_pattern
from .statements import PLACEHOLDER, StatementTemplate, convert
from .translation import translate_statement

_TERMINATORS = (".", "!", "?", "。", "！", "？", "؟", "।")


class AttackKind(str, Enum):
    RARQ = "RARQ"  # random answer, one random question entity changed
    RAOQ = "RAOQ"  # random answer, original question entities
    NARQ = "NARQ"  # no answer, one random question entity changed
    NAOQ = "NAOQ"  # no answer, original question entities

    @property
    def has_fake_answer(self) -> bool:
        return self in (AttackKind.RARQ, AttackKind.RAOQ)

    @property
    def replaces_entity(self) -> bool:
        return self in (AttackKind.RARQ, AttackKind.NARQ)


@dataclass(frozen=True)
class StatementLanguagePolicy:
    """Which language the inserted statement is rendered in."""

    policy: str  # context_language | question_language | fixed
    lang: str | None = None

    def __post_init__(self):
        if self.policy not in ("context_language", "question_language", "fixed"):
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.policy == "fixed":
            check_language(self.lang)

    @classmethod
    def context(cls):
        return cls("context_language")

    @classmethod
    def question(cls):
        return cls("question_language")

    @classmethod
    def fixed(cls, lang: str):
        return cls("fixed", lang)

    @classmethod
    def parse(cls, text: str):
        if text in ("context", "context_language"):
            return cls.context()
        if text in ("question", "question_language"):
            return cls.question()
        return cls.fixed(text)

    def label(self) -> str:
        if self.policy == "context_language":
            return "S_cl"
        if self.policy == "question_language":
            return "S_ql"
        return f"S_{self.lang}"


@dataclass(frozen=True)
class AdversarialStatement:
    """A generated distractor sentence plus its attack metadata."""

    text: str
    lang: str
    kind: AttackKind
    fake_answer: str | None = None
    replaced_entity: tuple[str, str] | None = None
    fake_answer_lang: str = "en"

    def __post_init__(self):
        check_language(self.lang)
        if self.kind.has_fake_answer and not self.fake_answer:
            raise ValueError(f"{self.kind.value} requires a fake answer")
        if not self.kind.has_fake_answer and self.fake_answer is not None:
            raise ValueError(f"{self.kind.value} must not carry a fake answer")
        if not self.kind.replaces_entity and self.replaced_entity is not None:
            raise ValueError(f"{self.kind.value} must not replace a question entity")


@dataclass(frozen=True)
class AttackConfig:
    kind: AttackKind
    policy: StatementLanguagePolicy
    seed: int
    answer_type_source: str = "gold"  # gold | predictions

    def __post_init__(self):
        if self.answer_type_source not in ("gold", "predictions"):
            raise ValueError(f"unknown answer_type_source {self.answer_type_source!r}")


def resolve_answer_type(
    instance: QaInstance,
    source: str,
    predictions: dict[str, str] | None = None,
    answer_entities: dict[str, str] | None = None,
) -> str:
    """NER label driving the fake-answer draw.

    In predictions mode the model's non-adversarial prediction must exist and
    its annotated label is used; in gold mode the gold answer's label is used.
    Untypeable answers fall back to MISC.
    """
    if source == "predictions":
        if predictions is None or instance.id not in predictions:
            raise PredictionLookupError(instance.id)
    label = (answer_entities or {}).get(instance.id)
    return label if label else FALLBACK_LABEL


def instantiate(
    template: StatementTemplate,
    kind: AttackKind,
    answer_label: str,
    pool: EntityPool,
    rng: random.Random,
    gold_answers: set[str],
    info: dict | None = None,
) -> AdversarialStatement:
    """Fill or delete the placeholder and optionally swap one entity slot.

    Draw order is fixed (fake answer first, then the slot choice) so that
    RARQ/RAOQ generated from equal seeds share the fake answer and differ in
    exactly the slot substitution.
    """
    fake = None
    if kind.has_fake_answer:
        fake = sample(pool, answer_label, rng, exclude=set(gold_answers), info=info)

    text = template.text
    replaced = None
    if kind.replaces_entity and template.entity_slots:
        slots = template.entity_slots
        slot = slots[rng.randrange(len(slots))]
        original = slot.surface(text)
        replacement = sample(
            pool, slot.entity.label or FALLBACK_LABEL, rng, exclude={original}, info=info
        )
        text = text[: slot.start] + replacement + text[slot.end :]
        replaced = (original, replacement)

    if kind.has_fake_answer:
        text = text.replace(PLACEHOLDER, fake, 1)
    else:
        text = " ".join(text.replace(PLACEHOLDER, " ").split())
    text = text.strip()
    if not text:
        raise GenerationError("statement collapsed to an empty string")
    if not text.endswith(_TERMINATORS):
        text += "."
    return AdversarialStatement(
        text=text,
        lang="en",
        kind=kind,
        fake_answer=fake,
        replaced_entity=replaced,
    )


def choose_statement_language(instance: QaInstance, policy: StatementLanguagePolicy) -> str:
    if policy.policy == "context_language":
        return instance.context_lang
    if policy.policy == "question_language":
        return instance.question_lang
    return policy.lang


@dataclass(frozen=True)
class Insertion:
    """A mutated instance plus exactly what was spliced in and where."""

    instance: QaInstance
    offset: int
    segment: str


def insert(instance: QaInstance, statement: AdversarialStatement, rng: random.Random) -> Insertion:
    """Splice the statement at a random sentence boundary, repairing gold spans.

    All boundaries are eligible (including start and end) except those that
    fall strictly inside a gold span, which would break the extraction
    identity. Deleting the recorded segment restores the original context
    byte-exactly.
    """
    if not statement.text:
        raise GenerationError("cannot insert an empty statement")
    context = instance.context
    boundaries = split_sentences(context, instance.context_lang)
    eligible = [
        b
        for b in boundaries
        if not any(a.start < b < a.end for a in instance.answers)
    ]
    offset = eligible[rng.randrange(len(eligible))]
    segment = statement.text + " " if offset == 0 else " " + statement.text
    new_context = context[:offset] + segment + context[offset:]
    new_answers = tuple(
        AnswerSpan(text=a.text, start=a.start + len(segment)) if a.start >= offset else a
        for a in instance.answers
    )
    mutated = QaInstance(
        id=instance.id,
        question=instance.question,
        question_lang=instance.question_lang,
        context=new_context,
        context_lang=instance.context_lang,
        answers=new_answers,
        provenance="mutated",
    )
    return Insertion(instance=mutated, offset=offset, segment=segment)


def derive_rng(seed: int, instance_id: str) -> random.Random:
    """Per-instance RNG stream; independent of scheduling and corpus order."""
    digest = hashlib.sha256(f"{seed}\x00{instance_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass
class AttackResult:
    corpus: Corpus
    metadata: dict[str, dict]
    skips: list[tuple[str, str]] = field(default_factory=list)


def _attack_instance(
    instance: QaInstance,
    annotations: dict[str, AnnotatedQuestion],
    pool: EntityPool,
    config: AttackConfig,
    translator,
    predictions,
    answer_entities,
):
    rng = derive_rng(config.seed, instance.id)
    ann = annotations.get(instance.id)
    if ann is None:
        return instance, None, "no annotation for question"
    try:
        pattern = mine_pattern(ann)
        entities = mark_entities(ann, pattern)
        template = convert(ann, pattern, entities)
        label = resolve_answer_type(
            instance, config.answer_type_source, predictions, answer_entities
        )
        info: dict = {}
        golds = {a.text for a in instance.answers}
        statement = instantiate(template, config.kind, label, pool, rng, golds, info)
        dst = choose_statement_language(instance, config.policy)
        if dst != statement.lang:
            if translator is None:
                raise TranslationError(
                    f"statement language {dst!r} requires a translator", instance.id
                )
            statement = translate_statement(statement, dst, translator)
        insertion = insert(instance, statement, rng)
    except (SamplingError, GenerationError, PredictionLookupError, TranslationError) as exc:
        return instance, None, str(exc)
    record = {
        "kind": config.kind.value,
        "statement": statement.text,
        "lang": statement.lang,
        "insertion_offset": insertion.offset,
        "fake_answer": statement.fake_answer,
        "fake_answer_lang": statement.fake_answer_lang if statement.fake_answer else None,
        "replaced_entity": list(statement.replaced_entity) if statement.replaced_entity else None,
        "segment": insertion.segment,
    }
    if info.get("fallback"):
        record["pool_fallback"] = True
    return insertion.instance, record, None


def attack_corpus(
    corpus: Corpus,
    annotations: dict[str, AnnotatedQuestion],
    pool: EntityPool,
    config: AttackConfig,
    translator=None,
    predictions: dict[str, str] | None = None,
    answer_entities: dict[str, str] | None = None,
    jobs: int = 1,
) -> AttackResult:
    """Mutate every instance of a corpus with one adversarial statement.

    Per-instance randomness derives from (config.seed, instance.id), so output
    is identical for any worker count. Instances that fail (no annotation,
    sampling or translation errors) pass through unmutated and are listed in
    the skip report.
    """

    def work(instance):
        return _attack_instance(
            instance, annotations, pool, config, translator, predictions, answer_entities
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(work, corpus.instances))
    else:
        results = [work(inst) for inst in corpus.instances]

    instances = []
    metadata: dict[str, dict] = {}
    skips: list[tuple[str, str]] = []
    for instance, record, reason in results:
        instances.append(instance)
        if record is not None:
            metadata[instance.id] = record
        else:
            skips.append((instance.id, reason))
    out = Corpus(instances=tuple(instances), title_groups=corpus.title_groups)
    return AttackResult(corpus=out, metadata=metadata, skips=skips)


def write_sidecar(metadata: dict[str, dict], path) -> None:
    Path(path).write_text(
        json.dumps(metadata, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def read_sidecar(path) -> dict[str, dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_skip_report(skips: list[tuple[str, str]], path) -> None:
    lines = [f"{record_id}\t{reason}" for record_id, reason in skips]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
