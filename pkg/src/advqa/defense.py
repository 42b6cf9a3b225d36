"""Adversarially augmented training corpora (ORIG + one attack kind).

Defense generation mirrors the attack pipeline with three twists: answer
typing always uses the gold answer, the statement language is drawn uniformly
from a configured list, and the template placement is randomized (where the
rule admits both) to avoid overfitting a fixed statement shape.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .annotation import AnnotatedQuestion
from .attacks import (
    AttackKind,
    AttackResult,
    derive_rng,
    insert,
    instantiate,
    resolve_answer_type,
)
from .corpus import Corpus, QaInstance
from .entity_pool import EntityPool
from .errors import (
    GenerationError,
    SamplingError,
    TranslationError,
)
from .patterns import mark_entities, mine_pattern
from .statements import admits_both_placements, convert
from .translation import translate_statement


def _mutate_for_defense(
    instance: QaInstance,
    annotations: dict[str, AnnotatedQuestion],
    pool: EntityPool,
    kind: AttackKind,
    languages: list[str],
    translator,
    seed: int,
    answer_entities,
    fraction: float,
    id_suffix: str,
):
    rng = derive_rng(seed, f"{kind.value}:{instance.id}")
    if fraction < 1.0 and rng.random() >= fraction:
        return None, None, None
    ann = annotations.get(instance.id)
    if ann is None:
        return None, None, "no annotation for question"
    try:
        lang = languages[rng.randrange(len(languages))]
        pattern = mine_pattern(ann)
        entities = mark_entities(ann, pattern)
        rule = pattern.question_word if pattern.question_word != "none" else "catchall"
        if admits_both_placements(rule):
            variant = ("initial", "final")[rng.randrange(2)]
        else:
            variant = "default"
        template = convert(ann, pattern, entities, placeholder_position=variant)
        label = resolve_answer_type(instance, "gold", None, answer_entities)
        golds = {a.text for a in instance.answers}
        statement = instantiate(template, kind, label, pool, rng, golds)
        if lang != statement.lang:
            if translator is None:
                raise TranslationError(
                    f"statement language {lang!r} requires a translator", instance.id
                )
            statement = translate_statement(statement, lang, translator)
        insertion = insert(instance, statement, rng)
    except (SamplingError, GenerationError, TranslationError) as exc:
        return None, None, str(exc)
    mutated = QaInstance(
        id=f"{instance.id}{id_suffix}",
        question=insertion.instance.question,
        question_lang=insertion.instance.question_lang,
        context=insertion.instance.context,
        context_lang=insertion.instance.context_lang,
        answers=insertion.instance.answers,
        provenance="augmented",
    )
    record = {
        "kind": kind.value,
        "statement": statement.text,
        "lang": statement.lang,
        "insertion_offset": insertion.offset,
        "fake_answer": statement.fake_answer,
        "replaced_entity": list(statement.replaced_entity) if statement.replaced_entity else None,
        "segment": insertion.segment,
        "template_variant": variant,
        "source_id": instance.id,
    }
    return mutated, record, None


def build_defense_set(
    train: Corpus,
    annotations: dict[str, AnnotatedQuestion],
    pool: EntityPool,
    kind: AttackKind,
    languages: list[str],
    translator=None,
    seed: int = 0,
    answer_entities: dict[str, str] | None = None,
    fraction: float = 1.0,
    jobs: int = 1,
) -> AttackResult:
    """ORIG plus one adversarially mutated copy per training instance.

    Mutated copies get an `-adv-<kind>` id suffix so the combined corpus keeps
    unique ids. Instances that fail still contribute their ORIG copy and are
    listed in the skip report.
    """
    return _build(
        train, annotations, pool, [kind], languages, translator, seed,
        answer_entities, fraction, jobs,
    )


def build_defense_union(
    train: Corpus,
    annotations: dict[str, AnnotatedQuestion],
    pool: EntityPool,
    languages: list[str],
    translator=None,
    seed: int = 0,
    answer_entities: dict[str, str] | None = None,
    fraction: float = 1.0,
    jobs: int = 1,
) -> AttackResult:
    """Convenience mode: ORIG plus one mutated copy per attack kind."""
    return _build(
        train, annotations, pool, list(AttackKind), languages, translator, seed,
        answer_entities, fraction, jobs,
    )


def _build(
    train, annotations, pool, kinds, languages, translator, seed,
    answer_entities, fraction, jobs,
) -> AttackResult:
    if not languages:
        raise ValueError("at least one statement language is required")

    def work(instance):
        produced = []
        for kind in kinds:
            suffix = f"-adv-{kind.value.lower()}"
            mutated, record, reason = _mutate_for_defense(
                instance, annotations, pool, kind, languages, translator,
                seed, answer_entities, fraction, suffix,
            )
            produced.append((kind, mutated, record, reason))
        return instance, produced

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(work, train.instances))
    else:
        results = [work(inst) for inst in train.instances]

    instances = list(train.instances)
    metadata: dict[str, dict] = {}
    skips: list[tuple[str, str]] = []
    extra_by_title: dict[str, list[str]] = {}
    id_to_title = {}
    for title, ids in train.title_groups.items():
        for qa_id in ids:
            id_to_title[qa_id] = title

    for instance, produced in results:
        for kind, mutated, record, reason in produced:
            if mutated is None:
                if reason is not None:
                    skips.append((instance.id, f"{kind.value}: {reason}"))
                continue
            instances.append(mutated)
            metadata[mutated.id] = record
            title = id_to_title.get(instance.id, "")
            extra_by_title.setdefault(title, []).append(mutated.id)

    groups = {title: list(ids) for title, ids in train.title_groups.items()}
    for title, ids in extra_by_title.items():
        groups.setdefault(title, []).extend(ids)
    corpus = Corpus(
        instances=tuple(instances),
        title_groups={t: tuple(ids) for t, ids in groups.items()},
    )
    return AttackResult(corpus=corpus, metadata=metadata, skips=skips)
