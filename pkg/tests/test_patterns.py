from advqa.annotation import AnnotatedQuestion, Token, descendants
from advqa.patterns import (
    CATCHALL_PATTERN,
    find_focus,
    mark_entities,
    mine_pattern,
    pattern_stats,
    write_pattern_stats,
)


def tok(index, surface, head, xpos, upos="X", lemma=None, deprel="dep"):
    return Token(
        index=index,
        surface=surface,
        lemma=lemma or surface.lower(),
        upos=upos,
        xpos=xpos,
        head=head,
        deprel=deprel,
    )


def test_find_focus_paper_examples(annotations):
    assert find_focus(annotations["cafe-q"]) == 1
    assert find_focus(annotations["destiny-q"]) == 1
    assert find_focus(annotations["beyonce-q"]) is None


def test_find_focus_prefers_first_in_surface_order():
    q = AnnotatedQuestion(
        qa_id="two-wh",
        tokens=(
            tok(1, "Who", 2, "WP", "PRON"),
            tok(2, "knows", 0, "VBZ", "VERB"),
            tok(3, "what", 2, "WP", "PRON"),
        ),
        entities=(),
    )
    assert find_focus(q) == 1


def test_mine_pattern_paper_examples(annotations):
    assert mine_pattern(annotations["cafe-q"]).pattern == "what vb"
    assert mine_pattern(annotations["destiny-q"]).pattern == "when vb vb"
    assert mine_pattern(annotations["beyonce-q"]).pattern == CATCHALL_PATTERN


def test_mine_pattern_frequent_shapes(annotations):
    assert mine_pattern(annotations["macros-q"]).pattern == "what vb"
    assert mine_pattern(annotations["hamlet-q"]).pattern == "who vb"
    assert mine_pattern(annotations["tesla-q"]).pattern == "what vb vb"
    assert mine_pattern(annotations["howmany-q"]).pattern == "how many"
    assert mine_pattern(annotations["museum-q"]).pattern == "what nn"
    assert mine_pattern(annotations["mural-q"]).pattern == "which nn"


def test_mine_pattern_total_and_deterministic(annotations):
    for q in annotations.values():
        p1 = mine_pattern(q)
        p2 = mine_pattern(q)
        assert p1 == p2
        assert p1.pattern


def test_pattern_indices_within_allowed_superset(annotations):
    for q in annotations.values():
        p = mine_pattern(q)
        if p.focus_index is None:
            assert p.pattern_token_indices == frozenset()
            continue
        focus_tok = q.token(p.focus_index)
        allowed = {p.focus_index} | descendants(q, p.focus_index)
        if focus_tok.head != 0:
            allowed.add(focus_tok.head)
        allowed |= {t.index for t in q.tokens if t.head == focus_tok.head}
        if p.focus_index + 1 <= len(q.tokens):
            allowed.add(p.focus_index + 1)  # forced how-many/much quantifier
        assert p.pattern_token_indices <= allowed


def test_pattern_capped_at_five():
    # star-shaped tree: focus at 1, everything shares head 2
    tokens = [tok(1, "What", 2, "WP", "PRON")]
    tokens.append(tok(2, "is", 0, "VBZ", "AUX"))
    for i in range(3, 10):
        tokens.append(tok(i, f"n{i}", 2, "VB", "VERB"))
    q = AnnotatedQuestion(qa_id="wide", tokens=tuple(tokens), entities=())
    p = mine_pattern(q)
    assert len(p.pattern.split()) == 5


def test_mark_entities_ner_priority(annotations):
    q = annotations["cafe-q"]
    marked = mark_entities(q, mine_pattern(q))
    assert [m.surface for m in marked] == ["Paris"]
    assert marked[0].source == "ner"


def test_mark_entities_noun_chunks(annotations):
    q = annotations["macros-q"]
    marked = mark_entities(q, mine_pattern(q))
    assert [m.surface for m in marked] == ["example", "programming language", "macros"]
    assert {m.source for m in marked} == {"noun"}


def test_mark_entities_hamlet(annotations):
    q = annotations["hamlet-q"]
    marked = mark_entities(q, mine_pattern(q))
    assert [m.surface for m in marked] == ["Hamlet"]
    assert marked[0].label == "WORK_OF_ART"


def test_mark_entities_ner_inside_pattern_falls_through():
    # the only NER span covers the verb inside the pattern -> noun tier
    q = AnnotatedQuestion(
        qa_id="fall",
        tokens=(
            tok(1, "Who", 2, "WP", "PRON"),
            tok(2, "founded", 0, "VBD", "VERB"),
            tok(3, "Rome", 2, "NNP", "PROPN"),
        ),
        entities=(),
    )
    from advqa.annotation import EntitySpan

    q = AnnotatedQuestion(
        qa_id="fall",
        tokens=q.tokens,
        entities=(EntitySpan(2, 2, "ORG", "founded"),),
    )
    p = mine_pattern(q)
    assert 2 in p.pattern_token_indices
    marked = mark_entities(q, p)
    assert [m.surface for m in marked] == ["Rome"]
    assert marked[0].source == "noun"


def test_mark_entities_verb_tier():
    q = AnnotatedQuestion(
        qa_id="verbs",
        tokens=(
            tok(1, "Who", 2, "WP", "PRON"),
            tok(2, "said", 0, "VBD", "VERB"),
            tok(3, "running", 4, "VBG", "VERB"),
            tok(4, "helps", 2, "VBZ", "VERB"),
        ),
        entities=(),
    )
    p = mine_pattern(q)
    marked = mark_entities(q, p)
    assert [m.surface for m in marked] == ["running"]
    assert marked[0].source == "verb"


def test_mark_entities_tiers_never_mix(annotations):
    for q in annotations.values():
        marked = mark_entities(q, mine_pattern(q))
        assert len({m.source for m in marked}) <= 1


def test_pattern_stats_counts(annotations):
    stats = pattern_stats(annotations)
    assert stats["what vb"] == 2  # cafe-q and macros-q
    assert stats["when vb vb"] == 2  # destiny-q and hamlet-when-q
    assert stats[CATCHALL_PATTERN] == 1
    assert sum(stats.values()) == len(annotations)


def test_pattern_stats_empty():
    assert pattern_stats({}) == {}


def test_write_pattern_stats_sorted(tmp_path):
    path = tmp_path / "stats.tsv"
    write_pattern_stats({"b": 2, "a": 2, "c": 9}, path)
    assert path.read_text().splitlines() == ["c\t9", "a\t2", "b\t2"]
