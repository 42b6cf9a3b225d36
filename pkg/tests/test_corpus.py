import json
import random

import pytest

from advqa.corpus import (
    AnswerSpan,
    Corpus,
    QaInstance,
    read_corpus,
    split_sentences,
    write_corpus,
)
from advqa.errors import AnswerSpanError, CorpusFormatError

from conftest import make_instance, random_corpus


def write_minimal(path, answer_start=18):
    doc = {
        "version": "1.1",
        "data": [
            {
                "title": "JEdit",
                "paragraphs": [
                    {
                        "context": "The app supports macros in BeanShell.",
                        "qas": [
                            {
                                "id": "q1",
                                "question": "What does the app support?",
                                "answers": [{"text": "macros", "answer_start": answer_start}],
                            }
                        ],
                    }
                ],
            }
        ],
    }
    path.write_text(json.dumps(doc), encoding="utf-8")


def test_read_minimal_file(tmp_path):
    path = tmp_path / "mini.json"
    write_minimal(path, answer_start=17)
    corpus = read_corpus(path, "en", "en")
    assert len(corpus) == 1
    inst = corpus.instances[0]
    assert inst.answers[0].text == "macros"
    assert inst.context[inst.answers[0].start :].startswith("macros")
    assert corpus.title_groups == {"JEdit": ("q1",)}


def test_read_rejects_bad_offset(tmp_path):
    path = tmp_path / "bad.json"
    write_minimal(path, answer_start=3)
    with pytest.raises(AnswerSpanError) as err:
        read_corpus(path, "en", "en")
    assert err.value.record_id == "q1"


def test_read_rejects_unknown_language(tmp_path):
    path = tmp_path / "mini.json"
    write_minimal(path, answer_start=17)
    with pytest.raises(ValueError):
        read_corpus(path, "fr", "en")


def test_read_rejects_malformed_document(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"data": [{"title": "t", "paragraphs": [{"qas": []}]}]}))
    with pytest.raises(CorpusFormatError):
        read_corpus(path, "en", "en")


def test_duplicate_ids_rejected():
    a = make_instance(qa_id="dup")
    b = make_instance(qa_id="dup")
    with pytest.raises(CorpusFormatError):
        Corpus(instances=(a, b), title_groups={"t": ("dup", "dup")})


def test_write_empty_corpus(tmp_path):
    path = tmp_path / "empty.json"
    write_corpus(Corpus(instances=(), title_groups={}), path)
    assert json.loads(path.read_text())["data"] == []


def test_roundtrip_single_instance(tmp_path):
    inst = make_instance()
    corpus = Corpus(instances=(inst,), title_groups={"T": (inst.id,)})
    path = tmp_path / "one.json"
    write_corpus(corpus, path)
    again = read_corpus(path, "en", "en")
    assert again == corpus


def test_roundtrip_random_corpora(tmp_path):
    for seed in range(5):
        corpus = random_corpus(seed, 40)
        path = tmp_path / f"c{seed}.json"
        write_corpus(corpus, path)
        assert read_corpus(path, "en", "en") == corpus


def test_roundtrip_interleaved_titles(tmp_path):
    a1 = make_instance(qa_id="a1")
    b1 = make_instance(qa_id="b1")
    a2 = make_instance(qa_id="a2", context="Other context entirely. Shakespeare here.",
                       answer="Shakespeare")
    corpus = Corpus(
        instances=(a1, b1, a2),
        title_groups={"A": ("a1", "a2"), "B": ("b1",)},
    )
    path = tmp_path / "inter.json"
    write_corpus(corpus, path)
    again = read_corpus(path, "en", "en")
    assert [i.id for i in again.instances] == ["a1", "b1", "a2"]
    assert again == corpus


def test_writes_are_byte_identical(tmp_path):
    corpus = random_corpus(42, 1000)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_corpus(corpus, p1)
    write_corpus(corpus, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_provenance_not_compared(tmp_path):
    inst = make_instance()
    mutated = QaInstance(
        id=inst.id,
        question=inst.question,
        question_lang=inst.question_lang,
        context=inst.context,
        context_lang=inst.context_lang,
        answers=inst.answers,
        provenance="mutated",
    )
    assert inst == mutated


def test_extraction_identity_enforced_on_construction():
    with pytest.raises(AnswerSpanError):
        QaInstance(
            id="x",
            question="Q?",
            question_lang="en",
            context="abc",
            context_lang="en",
            answers=(AnswerSpan(text="zzz", start=0),),
        )


# split_sentences: hand-checked against the terminator rules
def test_split_simple_en():
    assert split_sentences("A. B", "en") == [0, 2, 4]


def test_split_trailing_terminator():
    assert split_sentences("A. B.", "en") == [0, 2, 5]


def test_split_no_terminator():
    text = "no terminator here"
    assert split_sentences(text, "en") == [0, len(text)]


def test_split_zh_fullwidth():
    text = "北京。大学。campus"
    # 。 at index 2 and 5 -> boundaries after each
    assert split_sentences(text, "zh") == [0, 3, 6, len(text)]


def test_split_requires_whitespace_for_ascii():
    assert split_sentences("e.g. test", "en") == [0, 4, 9]
    assert split_sentences("a.b c", "en") == [0, 5]


def test_split_is_partition():
    rng = random.Random(7)
    alphabet = "ab .!?。। x"
    for _ in range(200):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 60)))
        bounds = split_sentences(text, "en")
        assert bounds[0] == 0 and bounds[-1] == len(text)
        assert bounds == sorted(set(bounds))
        segments = [text[a:b] for a, b in zip(bounds, bounds[1:])]
        assert "".join(segments) == text
