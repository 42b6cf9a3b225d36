"""Build adversarially augmented training corpora for the defense experiments.

Every training instance keeps its original copy and gains a mutated twin
whose statement language, template placement, and insertion point are
randomized; the sidecar records each choice so training-time analysis can
stratify by variant.

Run from the repository root:  python3 demos/05_defense_sets.py
"""

from collections import Counter
from pathlib import Path

from advqa import (
    AttackKind,
    DictionaryTranslator,
    build_defense_set,
    build_pool,
    read_annotations,
    read_corpus,
)

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"

corpus = read_corpus(FIXTURES / "corpus-50.json", "en", "en")
annotations = read_annotations(FIXTURES / "annotations-50.conllu")
pool = build_pool(annotations)

result = build_defense_set(
    corpus, annotations, pool,
    kind=AttackKind.RAOQ,
    languages=["en", "de", "es"],
    translator=DictionaryTranslator(),
    seed=42,
)

print(f"input: {len(corpus)} instances -> defense set: {len(result.corpus)} instances")
print(f"skipped: {len(result.skips)}")

langs = Counter(r["lang"] for r in result.metadata.values())
variants = Counter(r["template_variant"] for r in result.metadata.values())
print(f"statement languages: {dict(langs)}")
print(f"template variants:   {dict(variants)}\n")

sample_id = "cafe-q-adv-raoq"
record = result.metadata[sample_id]
mutated = result.corpus.by_id()[sample_id]
print(f"example mutated instance ({sample_id}):")
print(f"  statement: {record['statement']!r} [{record['lang']}]")
print(f"  context:   {mutated.context!r}")
print(f"  gold span still extracts: "
      f"{mutated.context[mutated.answers[0].start:][:len(mutated.answers[0].text)]!r}")
