"""Span-metric scoring and G-XLT aggregation for external model predictions.

The token-overlap F1/EM follows the SQuAD/MLQA convention: normalize, take
the max over gold answers, and average per (question-language,
context-language) pair; the overall score is the unweighted mean over pairs.
Normalization (article lists per language) is driven by a shipped, editable
JSON config and is documented as an approximation of MLQA's official script
for zh/hi.
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import Corpus
from .errors import ReportConsistencyError

_HAN_RANGES = ((0x3400, 0x4DBF), (0x4E00, 0x9FFF), (0xF900, 0xFAFF))


def _is_han(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _HAN_RANGES)


def load_normalization_config(path=None) -> dict:
    """Load article lists; the package ships a default, editable copy."""
    if path is not None:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    data = resources.files("advqa").joinpath("data/normalization.json").read_text("utf-8")
    return json.loads(data)


_DEFAULT_CONFIG = None


def _articles(lang: str, config: dict | None) -> list[str]:
    global _DEFAULT_CONFIG
    if config is None:
        if _DEFAULT_CONFIG is None:
            _DEFAULT_CONFIG = load_normalization_config()
        config = _DEFAULT_CONFIG
    return config.get("articles", {}).get(lang, [])


def normalize(answer: str, lang: str, config: dict | None = None) -> list[str]:
    """Lowercase, strip Unicode punctuation, drop articles, tokenize.

    Chinese uses mixed segmentation: every Han character is its own token and
    contiguous non-Han runs split on whitespace.
    """
    text = answer.lower()
    text = "".join(ch for ch in text if not unicodedata.category(ch).startswith("P"))
    articles = _articles(lang, config)
    if articles:
        pattern = r"\b(?:" + "|".join(re.escape(a) for a in articles) + r")\b"
        text = re.sub(pattern, " ", text)
    if lang == "zh":
        tokens: list[str] = []
        run: list[str] = []
        for ch in text:
            if _is_han(ch):
                if run:
                    tokens.extend("".join(run).split())
                    run = []
                tokens.append(ch)
            else:
                run.append(ch)
        if run:
            tokens.extend("".join(run).split())
        return tokens
    return text.split()


def f1_em(pred: str, golds: list[str], lang: str, config: dict | None = None) -> tuple[float, int]:
    """Token-multiset overlap F1 and exact match, maxed over gold answers."""
    if not golds:
        raise ValueError("golds must be non-empty")
    pred_tokens = normalize(pred, lang, config)
    best_f1 = 0.0
    best_em = 0
    for gold in golds:
        gold_tokens = normalize(gold, lang, config)
        em = int(pred_tokens == gold_tokens)
        if not pred_tokens or not gold_tokens:
            f1 = float(pred_tokens == gold_tokens)
        else:
            common = Counter(pred_tokens) & Counter(gold_tokens)
            same = sum(common.values())
            if same == 0:
                f1 = 0.0
            else:
                precision = same / len(pred_tokens)
                recall = same / len(gold_tokens)
                f1 = 2 * precision * recall / (precision + recall)
        best_f1 = max(best_f1, f1)
        best_em = max(best_em, em)
    return best_f1, best_em


@dataclass(frozen=True)
class PairScore:
    f1: float  # percent
    em: float  # percent
    n: int


@dataclass(frozen=True)
class GxltReport:
    """Per-(question_lang, context_lang) scores and their unweighted mean."""

    per_pair: dict[tuple[str, str], PairScore]
    mean_f1: float
    mean_em: float
    missing_ids: tuple[str, ...]
    ids_digest: str


def _digest_ids(ids) -> str:
    joined = "\n".join(sorted(ids))
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def gxlt(
    corpora: dict[tuple[str, str], Corpus],
    predictions: dict[str, str],
    config: dict | None = None,
) -> GxltReport:
    """Score predictions over a corpus per language pair.

    Missing predictions score 0 and are listed in the report appendix. Means
    keep full float precision; rounding happens only at rendering time.
    """
    if not corpora:
        raise ValueError("at least one language pair is required")
    per_pair = {}
    missing: list[str] = []
    all_ids: list[str] = []
    for pair, corpus in corpora.items():
        f1_sum = 0.0
        em_sum = 0.0
        n = 0
        for inst in corpus.instances:
            all_ids.append(inst.id)
            n += 1
            pred = predictions.get(inst.id)
            if pred is None:
                missing.append(inst.id)
                continue
            f1, em = f1_em(pred, [a.text for a in inst.answers], inst.context_lang, config)
            f1_sum += f1
            em_sum += em
        if n:
            per_pair[pair] = PairScore(f1=100.0 * f1_sum / n, em=100.0 * em_sum / n, n=n)
    if not per_pair:
        raise ValueError("no populated language pair")
    mean_f1 = sum(s.f1 for s in per_pair.values()) / len(per_pair)
    mean_em = sum(s.em for s in per_pair.values()) / len(per_pair)
    return GxltReport(
        per_pair=per_pair,
        mean_f1=mean_f1,
        mean_em=mean_em,
        missing_ids=tuple(missing),
        ids_digest=_digest_ids(all_ids),
    )


@dataclass(frozen=True)
class AttackImpact:
    """Mean F1 per (attack kind, statement-language policy) against a baseline."""

    baseline_mean_f1: float
    attacked: dict[tuple[str, str], float]  # (kind, policy label) -> mean F1

    def delta(self, kind: str, policy_label: str) -> float:
        return self.baseline_mean_f1 - self.attacked[(kind, policy_label)]


def attack_impact(baseline: GxltReport, attacked: dict[tuple, GxltReport]) -> AttackImpact:
    """Collect attacked means against the ORIG baseline.

    All reports must cover the same instance ids; a mismatch is an error, not
    a silent skew.
    """
    table = {}
    for (kind, policy), report in attacked.items():
        if report.ids_digest != baseline.ids_digest:
            raise ReportConsistencyError(
                f"report for ({kind}, {policy}) covers different instance ids than the baseline"
            )
        kind_key = kind.value if hasattr(kind, "value") else str(kind)
        policy_key = policy.label() if hasattr(policy, "label") else str(policy)
        table[(kind_key, policy_key)] = report.mean_f1
    return AttackImpact(baseline_mean_f1=baseline.mean_f1, attacked=table)


def gxlt_report_to_dict(report: GxltReport) -> dict:
    return {
        "per_pair": [
            {
                "question_lang": ql,
                "context_lang": cl,
                "f1": score.f1,
                "em": score.em,
                "n": score.n,
            }
            for (ql, cl), score in sorted(report.per_pair.items())
        ],
        "mean_f1": report.mean_f1,
        "mean_em": report.mean_em,
        "missing_ids": sorted(report.missing_ids),
        "ids_digest": report.ids_digest,
    }


def gxlt_report_from_dict(doc: dict) -> GxltReport:
    per_pair = {
        (row["question_lang"], row["context_lang"]): PairScore(
            f1=row["f1"], em=row["em"], n=row["n"]
        )
        for row in doc["per_pair"]
    }
    return GxltReport(
        per_pair=per_pair,
        mean_f1=doc["mean_f1"],
        mean_em=doc["mean_em"],
        missing_ids=tuple(doc["missing_ids"]),
        ids_digest=doc["ids_digest"],
    )


def write_gxlt_report(report: GxltReport, path) -> None:
    Path(path).write_text(
        json.dumps(gxlt_report_to_dict(report), ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def read_gxlt_report(path) -> GxltReport:
    return gxlt_report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def render_gxlt_table(report: GxltReport) -> str:
    """Aligned-column text rendering of the per-pair F1 matrix."""
    qls = sorted({ql for ql, _ in report.per_pair})
    cls_ = sorted({cl for _, cl in report.per_pair})
    width = 8
    lines = ["F1 by (question lang x context lang)"]
    header = "q\\c".ljust(6) + "".join(c.rjust(width) for c in cls_)
    lines.append(header)
    for ql in qls:
        cells = []
        for cl in cls_:
            score = report.per_pair.get((ql, cl))
            cells.append((f"{score.f1:.1f}" if score else "-").rjust(width))
        lines.append(ql.ljust(6) + "".join(cells))
    lines.append(f"mean F1 = {report.mean_f1:.1f}   mean EM = {report.mean_em:.1f}")
    if report.missing_ids:
        lines.append(f"missing predictions: {len(report.missing_ids)}")
    return "\n".join(lines)


def render_impact_table(impact: AttackImpact, kinds=None, policies=None) -> str:
    """Text table in the shape of the paper-style impact matrix.

    Rows are ORIG plus the attack kinds; columns are the statement-language
    policies.
    """
    if kinds is None:
        kinds = sorted({k for k, _ in impact.attacked})
    if policies is None:
        policies = sorted({p for _, p in impact.attacked})
    width = 10
    lines = ["".ljust(6) + "".join(p.rjust(width) for p in policies)]
    lines.append("ORIG".ljust(6) + "".join(f"{impact.baseline_mean_f1:.1f}".rjust(width) for _ in policies))
    for kind in kinds:
        cells = []
        for policy in policies:
            value = impact.attacked.get((kind, policy))
            cells.append((f"{value:.1f}" if value is not None else "-").rjust(width))
        lines.append(kind.ljust(6) + "".join(cells))
    return "\n".join(lines)
