"""Mine question patterns and convert questions into placeholder statements.

Walks the shipped 50-question annotation fixture through the first two
pipeline steps: focus-word detection, pattern mining, entity markup, and the
rule-based question-to-statement conversion.

Run from the repository root:  python3 demos/01_patterns_and_statements.py
"""

from pathlib import Path

from advqa import convert, mark_entities, mine_pattern, pattern_stats, read_annotations

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"

annotations = read_annotations(FIXTURES / "annotations-50.conllu")

print("== the two showcase questions ==")
for qa_id in ("cafe-q", "destiny-q"):
    q = annotations[qa_id]
    pattern = mine_pattern(q)
    entities = mark_entities(q, pattern)
    template = convert(q, pattern, entities)
    print(f"{q.raw_text()!r}")
    print(f"  pattern:   {pattern.pattern}")
    print(f"  entities:  {[e.surface for e in entities]}")
    print(f"  statement: {template.text!r}")
    print()

print("== pattern frequency over the fixture ==")
stats = pattern_stats(annotations)
for pattern, count in sorted(stats.items(), key=lambda kv: (-kv[1], kv[0])):
    print(f"  {count:>3}  {pattern}")

top5 = {"what nn", "what vb", "who vb", "how many", "what vb vb"}
covered = sum(c for p, c in stats.items() if p in top5)
print(f"\nthe five most common pattern shapes cover {covered}/{sum(stats.values())} questions")
