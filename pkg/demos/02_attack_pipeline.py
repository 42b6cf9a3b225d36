"""Generate all four adversarial attacks and splice them into contexts.

Shows the full attack path on the fixture corpus: entity pool harvesting,
fake-answer typing from gold answers, statement instantiation per attack
kind, and insertion with gold-span repair. The sidecar metadata makes every
mutation auditable and reversible.

Run from the repository root:  python3 demos/02_attack_pipeline.py
"""

from pathlib import Path

from advqa import (
    AttackConfig,
    AttackKind,
    StatementLanguagePolicy,
    attack_corpus,
    build_pool,
    read_annotations,
    read_corpus,
)

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"

corpus = read_corpus(FIXTURES / "corpus-50.json", "en", "en")
annotations = read_annotations(FIXTURES / "annotations-50.conllu")
pool = build_pool(annotations)

print(f"corpus: {len(corpus)} instances; pool types: {', '.join(pool.labels())}\n")

# gold answer types for the fake-answer draw (normally produced by qa-annotate
# --targets predictions; a rough mapping is enough for the demo)
labels = {"cafe-q": "ORG", "hamlet-q": "PERSON", "sheets-q": "GPE"}

target = corpus.by_id()["cafe-q"]
print(f"original context: {target.context!r}")
print(f"gold answer:      {target.answers[0].text!r}\n")

for kind in AttackKind:
    config = AttackConfig(
        kind=kind,
        policy=StatementLanguagePolicy.fixed("en"),
        seed=7,
    )
    result = attack_corpus(corpus, annotations, pool, config, answer_entities=labels)
    record = result.metadata["cafe-q"]
    mutated = result.corpus.by_id()["cafe-q"]
    print(f"== {kind.value} ==")
    print(f"  statement:   {record['statement']!r}")
    print(f"  fake answer: {record['fake_answer']!r}")
    print(f"  swapped:     {record['replaced_entity']}")
    print(f"  context:     {mutated.context!r}")
    # the recorded segment restores the original context exactly
    offset, segment = record["insertion_offset"], record["segment"]
    restored = mutated.context[:offset] + mutated.context[offset + len(segment):]
    assert restored == target.context
    print()

print("removal round-trip verified for all four attack kinds")
