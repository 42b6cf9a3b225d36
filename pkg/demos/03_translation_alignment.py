"""Translate statements and contexts while keeping the answer span aligned.

The answer survives translation by wrapping it in pseudo tags before the
call; the translation is kept only when exactly one tag pair comes back. The
deterministic dictionary mock stands in for a commercial translation API.

Run from the repository root:  python3 demos/03_translation_alignment.py
"""

from pathlib import Path

from advqa import (
    AnswerSpan,
    DictionaryTranslator,
    align_answer,
    build_mt_squad,
    read_corpus,
    translate_statement,
)
from advqa.attacks import AdversarialStatement, AttackKind

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"

print("== statement translation carries the fake answer ==")
statement = AdversarialStatement(
    text="Homeostasis is the oldest cafe in Paris.",
    lang="en",
    kind=AttackKind.RAOQ,
    fake_answer="Homeostasis",
)
translated = translate_statement(statement, "de", DictionaryTranslator())
print(f"en: {statement.text!r}  (fake answer {statement.fake_answer!r})")
print(f"de: {translated.text!r}  (fake answer {translated.fake_answer!r})\n")

print("== answer alignment through a reordering translator ==")
context = "The mural was designed by Millard Sheets."
answer = AnswerSpan(text="Millard Sheets", start=context.index("Millard"))
aligned = align_answer(context, answer, "de", DictionaryTranslator(reorder=True))
print(f"source:  {context!r} / answer {answer.text!r} @ {answer.start}")
print(f"aligned: {aligned.context!r}")
print(f"answer:  {aligned.answer.text!r} @ {aligned.answer.start}\n")

print("== corpus-level augmentation with a lossy translator ==")
corpus = read_corpus(FIXTURES / "corpus-50.json", "en", "en")
# this mock loses the tags on any context containing "Hamlet"
translator = DictionaryTranslator(drop_marker_token="Hamlet")
corpora, report = build_mt_squad(corpus, ["de"], translator)
for lang, attempted, succeeded in report.rows:
    print(f"{lang}: {succeeded}/{attempted} aligned ({report.ratio(lang):.2%})")
dropped = {i.id for i in corpus.instances} - {i.id for i in corpora["de"].instances}
print(f"dropped instances: {sorted(dropped)}")
