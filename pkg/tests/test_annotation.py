import pytest

from advqa.annotation import (
    AnnotatedQuestion,
    Token,
    descendants,
    read_annotations,
    write_annotations,
)
from advqa.errors import AnnotationFormatError, TreeError

from conftest import FIXTURES


def tok(index, surface, head, xpos="NN", upos="NOUN", deprel="dep", lemma=None,
        space_after=True):
    return Token(
        index=index,
        surface=surface,
        lemma=lemma or surface.lower(),
        upos=upos,
        xpos=xpos,
        head=head,
        deprel=deprel,
        space_after=space_after,
    )


def test_single_token_question():
    q = AnnotatedQuestion(
        qa_id="why-q",
        tokens=(tok(1, "Why?", 0, xpos="WRB", upos="ADV", deprel="root"),),
        entities=(),
    )
    assert descendants(q, 1) == set()


def test_self_loop_rejected():
    with pytest.raises(TreeError):
        AnnotatedQuestion(
            qa_id="bad",
            tokens=(tok(1, "a", 0), tok(2, "b", 1), tok(3, "c", 3)),
            entities=(),
        )


def test_cycle_rejected():
    with pytest.raises(TreeError):
        AnnotatedQuestion(
            qa_id="cyc",
            tokens=(tok(1, "a", 0), tok(2, "b", 3), tok(3, "c", 2)),
            entities=(),
        )


def test_multi_root_rejected():
    with pytest.raises(TreeError):
        AnnotatedQuestion(
            qa_id="two-roots",
            tokens=(tok(1, "a", 0), tok(2, "b", 0)),
            entities=(),
        )


def test_descendants_on_hand_built_tree():
    # 6-token tree:  2 is root; 1,3 under 2; 4,5 under 3; 6 under 5
    q = AnnotatedQuestion(
        qa_id="tree",
        tokens=(
            tok(1, "a", 2),
            tok(2, "b", 0),
            tok(3, "c", 2),
            tok(4, "d", 3),
            tok(5, "e", 3),
            tok(6, "f", 5),
        ),
        entities=(),
    )
    assert descendants(q, 3) == {4, 5, 6}
    assert descendants(q, 2) == {1, 3, 4, 5, 6}
    assert descendants(q, 4) == set()


def test_descendants_transitivity(annotations):
    for q in annotations.values():
        for a in q.tokens:
            for b in q.tokens:
                if a.index in descendants(q, b.index):
                    for c in q.tokens:
                        if b.index in descendants(q, c.index):
                            assert a.index in descendants(q, c.index)


def test_fixture_reads_and_roundtrips(tmp_path, annotations):
    assert len(annotations) == 12
    assert "cafe-q" in annotations and "destiny-q" in annotations
    out = tmp_path / "again.conllu"
    write_annotations(annotations, out)
    again = read_annotations(out)
    assert again == annotations
    assert out.read_bytes() == (FIXTURES / "questions.conllu").read_bytes()


def test_raw_text_reconstruction(annotations):
    assert annotations["destiny-q"].raw_text() == (
        "When did Destiny's Child release their second album?"
    )
    assert annotations["beyonce-q"].raw_text() == "Beyonce's grandma's name was?"


def test_entities_parsed_from_misc(annotations):
    destiny = annotations["destiny-q"]
    assert len(destiny.entities) == 1
    ent = destiny.entities[0]
    assert (ent.start_token, ent.end_token, ent.label) == (3, 5, "ORG")
    assert ent.surface == "Destiny 's Child"


def test_missing_qa_id_comment(tmp_path):
    bad = tmp_path / "bad.conllu"
    bad.write_text("1\ta\ta\tX\tX\t_\t0\troot\t_\t_\n\n", encoding="utf-8")
    with pytest.raises(AnnotationFormatError):
        read_annotations(bad)


def test_bad_column_count(tmp_path):
    bad = tmp_path / "cols.conllu"
    bad.write_text("# qa_id = x\n1\ta\ta\n\n", encoding="utf-8")
    with pytest.raises(AnnotationFormatError):
        read_annotations(bad)
