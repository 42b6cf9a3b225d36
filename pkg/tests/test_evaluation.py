import random

import pytest

from advqa.corpus import Corpus
from advqa.errors import ReportConsistencyError
from advqa.evaluation import (
    attack_impact,
    f1_em,
    gxlt,
    gxlt_report_from_dict,
    gxlt_report_to_dict,
    normalize,
    render_gxlt_table,
    render_impact_table,
)

from conftest import make_instance


def brute_force_f1(pred_tokens, gold_tokens):
    """Independent overlap oracle: greedy one-to-one matching over token lists."""
    if not pred_tokens or not gold_tokens:
        return float(pred_tokens == gold_tokens)
    remaining = list(gold_tokens)
    matches = 0
    for token in pred_tokens:
        if token in remaining:
            remaining.remove(token)
            matches += 1
    if matches == 0:
        return 0.0
    precision = matches / len(pred_tokens)
    recall = matches / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def test_normalize_article_and_case():
    assert normalize("The Beatles", "en") == ["beatles"]


def test_normalize_figure_gold_answer():
    assert normalize("BeanShell, Jython, JavaScript", "en") == [
        "beanshell", "jython", "javascript",
    ]


def test_normalize_zh_mixed_segmentation():
    assert normalize("北京大学 campus", "zh") == [
        "北", "京", "大", "学", "campus",
    ]


def test_normalize_language_specific_articles():
    assert normalize("la biblioteca", "es") == ["biblioteca"]
    assert normalize("der Turm", "de") == ["turm"]
    assert normalize("la maison", "en") == ["la", "maison"]


def test_f1_em_exact_match():
    assert f1_em("Millard Sheets", ["Millard Sheets"], "en") == (1.0, 1)


def test_f1_em_disjoint():
    assert f1_em("alpha beta", ["gamma delta"], "en") == (0.0, 0)


def test_f1_em_partial_hand_case():
    f1, em = f1_em("Millard", ["Millard Sheets"], "en")
    assert f1 == pytest.approx(2 * (1 * 0.5) / 1.5, abs=1e-9)
    assert f1 == pytest.approx(0.6667, abs=5e-5)
    assert em == 0


def test_f1_em_max_over_golds():
    f1, em = f1_em("Millard", ["someone else", "Millard"], "en")
    assert (f1, em) == (1.0, 1)


def test_f1_matches_brute_force_oracle():
    rng = random.Random(2024)
    vocab = ["alpha", "beta", "gamma", "delta", "eps", "the", "a"]
    for _ in range(200):
        pred = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 6)))
        gold = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 6)))
        f1, _ = f1_em(pred, [gold], "en")
        oracle = brute_force_f1(normalize(pred, "en"), normalize(gold, "en"))
        assert f1 == pytest.approx(oracle, abs=0)


def test_f1_symmetric_single_gold():
    rng = random.Random(7)
    vocab = ["x", "y", "z", "w"]
    for _ in range(100):
        a = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 5)))
        b = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 5)))
        assert f1_em(a, [b], "en")[0] == pytest.approx(f1_em(b, [a], "en")[0])


def test_f1_bounds_and_em_implies_f1():
    rng = random.Random(3)
    vocab = ["p", "q", "r"]
    for _ in range(200):
        pred = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 4)))
        gold = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 4)))
        f1, em = f1_em(pred, [gold], "en")
        assert 0.0 <= f1 <= 1.0
        assert em in (0, 1)
        if em == 1:
            assert f1 == 1.0


def pair_corpus(pair, ids_with_answers):
    ql, cl = pair
    instances = tuple(
        make_instance(
            qa_id=qa_id,
            context=f"{answer} is mentioned here. Filler.",
            answer=answer,
            question_lang=ql,
            context_lang=cl,
        )
        for qa_id, answer in ids_with_answers
    )
    return Corpus(
        instances=instances, title_groups={"t": tuple(i.id for i in instances)}
    )


def test_gxlt_single_pair_perfect():
    corpus = pair_corpus(("en", "en"), [("a", "gold one"), ("b", "two")])
    preds = {"a": "gold one", "b": "two"}
    report = gxlt({("en", "en"): corpus}, preds)
    assert report.mean_f1 == 100.0
    assert report.mean_em == 100.0
    assert report.per_pair[("en", "en")].n == 2


def test_gxlt_unweighted_mean_over_pairs():
    # pair one: F1 100; pair two: one exact + one disjoint = 50
    c1 = pair_corpus(("en", "de"), [("p1-a", "alpha")])
    c2 = pair_corpus(("de", "en"), [("p2-a", "beta"), ("p2-b", "gamma")])
    preds = {"p1-a": "alpha", "p2-a": "beta", "p2-b": "zzz"}
    report = gxlt({("en", "de"): c1, ("de", "en"): c2}, preds)
    assert report.per_pair[("en", "de")].f1 == 100.0
    assert report.per_pair[("de", "en")].f1 == 50.0
    assert report.mean_f1 == pytest.approx(75.0)


def test_gxlt_hand_computed_two_pairs():
    # hand-computed: "Millard" vs "Millard Sheets" = 2/3 -> 66.66..%
    c1 = pair_corpus(("en", "en"), [("h1", "Millard Sheets")])
    c2 = pair_corpus(("es", "en"), [("h2", "uno dos")])
    preds = {"h1": "Millard", "h2": "uno dos"}
    report = gxlt({("en", "en"): c1, ("es", "en"): c2}, preds)
    expected_pair1 = 100.0 * (2 * (1 * 0.5) / 1.5)
    assert report.per_pair[("en", "en")].f1 == pytest.approx(expected_pair1)
    assert report.mean_f1 == pytest.approx((expected_pair1 + 100.0) / 2)


def test_gxlt_missing_prediction_scores_zero():
    corpus = pair_corpus(("en", "en"), [("a", "alpha"), ("b", "beta")])
    report = gxlt({("en", "en"): corpus}, {"a": "alpha"})
    assert report.per_pair[("en", "en")].f1 == 50.0
    assert report.missing_ids == ("b",)


def test_gxlt_permutation_invariant():
    pairs = [("en", "en"), ("de", "en"), ("en", "de")]
    corpora = {
        pair: pair_corpus(pair, [(f"{pair[0]}-{pair[1]}-{i}", f"ans{i}") for i in range(4)])
        for pair in pairs
    }
    preds = {
        inst.id: inst.answers[0].text
        for c in corpora.values()
        for inst in c.instances
    }
    r1 = gxlt(dict(sorted(corpora.items())), preds)
    r2 = gxlt(dict(reversed(sorted(corpora.items()))), preds)
    assert r1.mean_f1 == r2.mean_f1
    assert r1.ids_digest == r2.ids_digest


def test_attack_impact_zero_delta_for_identical_reports():
    corpus = pair_corpus(("en", "en"), [("a", "alpha")])
    preds = {"a": "alpha"}
    baseline = gxlt({("en", "en"): corpus}, preds)
    attacked = gxlt({("en", "en"): corpus}, preds)
    impact = attack_impact(baseline, {("RAOQ", "S_en"): attacked})
    assert impact.delta("RAOQ", "S_en") == 0.0


def test_attack_impact_rejects_id_mismatch():
    c1 = pair_corpus(("en", "en"), [("a", "alpha")])
    c2 = pair_corpus(("en", "en"), [("b", "beta")])
    baseline = gxlt({("en", "en"): c1}, {"a": "alpha"})
    other = gxlt({("en", "en"): c2}, {"b": "beta"})
    with pytest.raises(ReportConsistencyError):
        attack_impact(baseline, {("RAOQ", "S_en"): other})


def test_report_dict_roundtrip():
    corpus = pair_corpus(("en", "zh"), [("a", "alpha"), ("b", "beta")])
    report = gxlt({("en", "zh"): corpus}, {"a": "alpha"})
    assert gxlt_report_from_dict(gxlt_report_to_dict(report)) == report


def test_render_tables_shape():
    corpus = pair_corpus(("en", "en"), [("a", "alpha")])
    preds = {"a": "alpha"}
    baseline = gxlt({("en", "en"): corpus}, preds)
    attacked = {
        (kind, policy): baseline
        for kind in ("RARQ", "NARQ", "RAOQ", "NAOQ")
        for policy in ("S_cl", "S_ql", "S_en", "S_de", "S_zh")
    }
    impact = attack_impact(baseline, attacked)
    text = render_impact_table(
        impact,
        kinds=["RARQ", "NARQ", "RAOQ", "NAOQ"],
        policies=["S_cl", "S_ql", "S_en", "S_de", "S_zh"],
    )
    lines = text.splitlines()
    assert len(lines) == 6  # header + ORIG + 4 kinds
    assert lines[0].split() == ["S_cl", "S_ql", "S_en", "S_de", "S_zh"]
    assert lines[1].startswith("ORIG")
    table = render_gxlt_table(baseline)
    assert "mean F1 = 100.0" in table
