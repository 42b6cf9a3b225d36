"""Score predictions with the cross-lingual mean-F1 protocol and impact table.

Builds a small multi-pair corpus, attacks it, and contrasts two predictors:
a gold oracle (immune, because attacks never touch the gold span) and a copy
adversary that always answers the injected fake answer (maximally fooled).

Run from the repository root:  python3 demos/04_gxlt_evaluation.py
"""

from advqa import (
    AnswerSpan,
    AttackConfig,
    AttackKind,
    Corpus,
    DictionaryTranslator,
    QaInstance,
    StatementLanguagePolicy,
    attack_corpus,
    attack_impact,
    gxlt,
)
from advqa.annotation import AnnotatedQuestion, Token
from advqa.entity_pool import EntityPool
from advqa.evaluation import render_gxlt_table, render_impact_table

LANGS = ("en", "de", "zh")


def question_annotation(qa_id, noun):
    tokens = (
        Token(1, "What", "what", "PRON", "WP", 2, "nsubj"),
        Token(2, "is", "be", "AUX", "VBZ", 0, "root"),
        Token(3, "the", "the", "DET", "DT", 4, "det"),
        Token(4, noun, noun, "NOUN", "NN", 2, "attr"),
        Token(5, "?", "?", "PUNCT", ".", 2, "punct", space_after=False),
    )
    return AnnotatedQuestion(qa_id=qa_id, tokens=tokens, entities=())


instances, annotations, labels = [], {}, {}
k = 0
for ql in LANGS:
    for cl in LANGS:
        for j in range(5):
            qa_id = f"{ql}-{cl}-{j}"
            noun = f"relic{k % 7}"
            gold = f"shard{k} fragment{k}"
            context = f"Old texts exist. The {noun} is {gold}. Nothing else matters."
            instances.append(
                QaInstance(
                    id=qa_id, question=f"What is the {noun}?", question_lang=ql,
                    context=context, context_lang=cl,
                    answers=(AnswerSpan(text=gold, start=context.index(gold)),),
                )
            )
            annotations[qa_id] = question_annotation(qa_id, noun)
            labels[qa_id] = "THING"
            k += 1

corpus = Corpus(
    instances=tuple(instances),
    title_groups={"demo": tuple(i.id for i in instances)},
)
pool = EntityPool(by_type={"THING": tuple(f"decoy{n}" for n in range(9))}, source_count=1)


def by_pair(c):
    grouped = {}
    for inst in c.instances:
        grouped.setdefault((inst.question_lang, inst.context_lang), []).append(inst)
    return {
        pair: Corpus(instances=tuple(ins), title_groups={"g": tuple(i.id for i in ins)})
        for pair, ins in grouped.items()
    }


gold_preds = {i.id: i.answers[0].text for i in corpus.instances}
baseline = gxlt(by_pair(corpus), gold_preds)
print("== baseline (gold-oracle predictor, unattacked) ==")
print(render_gxlt_table(baseline))

policies = [
    StatementLanguagePolicy.context(),
    StatementLanguagePolicy.question(),
    StatementLanguagePolicy.fixed("en"),
]
reports = {}
for kind in (AttackKind.RAOQ, AttackKind.NAOQ):
    for policy in policies:
        config = AttackConfig(kind=kind, policy=policy, seed=99)
        result = attack_corpus(
            corpus, annotations, pool, config,
            translator=DictionaryTranslator(), answer_entities=labels,
        )
        # copy adversary: predict the injected fake answer when one exists
        preds = {
            i.id: result.metadata[i.id].get("fake_answer") or gold_preds[i.id]
            for i in result.corpus.instances
        }
        reports[(kind, policy)] = gxlt(by_pair(result.corpus), preds)

impact = attack_impact(baseline, reports)
print("\n== copy-adversary mean F1 under attack (rows: kind, columns: statement language) ==")
print(render_impact_table(impact, kinds=["RAOQ", "NAOQ"], policies=["S_cl", "S_ql", "S_en"]))
print("\nRAOQ hands the adversary a plausible span, so the copy adversary collapses;")
print("NAOQ removes the answer entirely, so copying is impossible and the oracle holds.")
