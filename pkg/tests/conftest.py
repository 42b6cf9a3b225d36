import random
from pathlib import Path

import pytest

from advqa.annotation import read_annotations
from advqa.corpus import AnswerSpan, Corpus, QaInstance
from advqa.entity_pool import build_pool

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def annotations():
    return read_annotations(FIXTURES / "questions.conllu")


@pytest.fixture(scope="session")
def pool(annotations):
    return build_pool(annotations)


def make_instance(
    qa_id="q1",
    question="Who wrote Hamlet?",
    context="Shakespeare wrote Hamlet. It was early.",
    answer="Shakespeare",
    question_lang="en",
    context_lang="en",
):
    start = context.index(answer)
    return QaInstance(
        id=qa_id,
        question=question,
        question_lang=question_lang,
        context=context,
        context_lang=context_lang,
        answers=(AnswerSpan(text=answer, start=start),),
    )


# Contexts and gold answers aligned with tests/fixtures/questions.conllu.
FIXTURE_QA = {
    "cafe-q": ("What is the oldest cafe in Paris?",
               "Le Procope is the oldest cafe in Paris. It opened long ago.",
               "Le Procope", "ORG"),
    "destiny-q": ("When did Destiny's Child release their second album?",
                  "Destiny's Child released their second album in 1999. Critics praised it.",
                  "1999", "DATE"),
    "beyonce-q": ("Beyonce's grandma's name was?",
                  "Her grandma's name was Agnez Dereon. Family records say so.",
                  "Agnez Dereon", "PERSON"),
    "macros-q": ("What is an example of a programming language used to write macros?",
                 "The application can be extended with macros written in BeanShell, Jython, "
                 "JavaScript and other scripting languages. It is customizable.",
                 "BeanShell, Jython, JavaScript", "MISC"),
    "hamlet-q": ("Who wrote Hamlet?",
                 "Hamlet was written by William Shakespeare. It is a tragedy.",
                 "William Shakespeare", "PERSON"),
    "tesla-q": ("What did Tesla design?",
                "Tesla designed alternating current systems. They changed industry.",
                "alternating current", "MISC"),
    "howmany-q": ("How many states does the US have?",
                  "The US has 50 states. Many people visit them.",
                  "50", "CARDINAL"),
    "sheets-q": ("Where was Millard Sheets born?",
                 "Millard Sheets was born in Pomona. He painted murals.",
                 "Pomona", "GPE"),
    "mural-q": ("Which artist created the mural?",
                "The mural was designed by artist Millard Sheets. It is famous.",
                "Millard Sheets", "PERSON"),
    "war-q": ("Why did the war end?",
              "The war ended because supplies ran out. Historians agree.",
              "supplies ran out", "MISC"),
    "museum-q": ("What museum is in Paris?",
                 "The Louvre is in Paris. Tourists love it.",
                 "The Louvre", "ORG"),
    "hamlet-when-q": ("When was Hamlet written?",
                      "Hamlet was written around 1600. Scholars debate the date.",
                      "1600", "DATE"),
}


@pytest.fixture(scope="session")
def fixture_corpus():
    instances = tuple(
        make_instance(qa_id=qa_id, question=question, context=context, answer=answer)
        for qa_id, (question, context, answer, _) in FIXTURE_QA.items()
    )
    return Corpus(
        instances=instances,
        title_groups={"fixture": tuple(i.id for i in instances)},
    )


@pytest.fixture(scope="session")
def answer_entity_labels():
    return {qa_id: label for qa_id, (_, _, _, label) in FIXTURE_QA.items()}


def random_corpus(seed: int, size: int, question_lang="en", context_lang="en") -> Corpus:
    """Seeded synthetic corpus generator used by determinism and round-trip tests."""
    rng = random.Random(seed)
    words = [f"w{i}" for i in range(40)]
    instances = []
    title_groups = {}
    for i in range(size):
        sentences = []
        for _ in range(rng.randint(1, 5)):
            sentences.append(" ".join(rng.choice(words) for _ in range(rng.randint(3, 8))) + ".")
        context = " ".join(sentences)
        # answer: some substring aligned to a word
        tokens = context.split(" ")
        pick = rng.randrange(len(tokens))
        answer_text = tokens[pick].rstrip(".")
        start = len(" ".join(tokens[:pick])) + (1 if pick else 0)
        title = f"title-{i % 3}"
        inst = QaInstance(
            id=f"gen-{i}",
            question=f"What is {answer_text}?",
            question_lang=question_lang,
            context=context,
            context_lang=context_lang,
            answers=(AnswerSpan(text=answer_text, start=start),),
        )
        instances.append(inst)
        title_groups.setdefault(title, []).append(inst.id)
    return Corpus(
        instances=tuple(instances),
        title_groups={t: tuple(ids) for t, ids in title_groups.items()},
    )
