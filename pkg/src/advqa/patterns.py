"""Question pattern mining: focus word, pattern string, candidate entity markup.

The pattern is the wh-word rendered lexically plus the verbs/nouns it hangs
off in the parse, rendered as coarse tag classes ("what vb", "when vb vb",
"how many", ...). It selects the question-to-statement rule downstream.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .annotation import AnnotatedQuestion, descendants, entity_surface

WH_XPOS = frozenset({"WDT", "WP", "WP$", "WRB"})
WH_LEMMAS = frozenset(
    {"how", "what", "who", "whom", "whose", "when", "where", "why", "which"}
)
QUESTION_WORDS = ("who", "what", "when", "why", "which", "where", "how", "none")

_QUESTION_WORD_MAP = {
    "what": "what",
    "who": "who",
    "whom": "who",
    "whose": "who",
    "when": "when",
    "why": "why",
    "which": "which",
    "where": "where",
    "how": "how",
}

CATCHALL_PATTERN = "catchall"
PATTERN_LENGTH_CAP = 5

# Coarse rendering classes for marked tokens; everything else is skipped.
_XPOS_CLASS = (
    ("NN", "nn"),
    ("VB", "vb"),
    ("MD", "vb"),
    ("JJ", "jj"),
    ("RB", "rb"),
    ("IN", "in"),
    ("CD", "cd"),
    ("PRP", "prp"),
)
_UPOS_CLASS = {
    "NOUN": "nn",
    "PROPN": "nn",
    "VERB": "vb",
    "AUX": "vb",
    "ADJ": "jj",
    "ADV": "rb",
    "ADP": "in",
    "NUM": "cd",
    "PRON": "prp",
}


@dataclass(frozen=True)
class QuestionPattern:
    """Mined pattern string plus the token indices that produced it."""

    pattern: str
    focus_index: int | None
    pattern_token_indices: frozenset[int]
    question_word: str

    def __post_init__(self):
        if self.focus_index is None and self.question_word != "none":
            raise ValueError("catchall pattern must carry question_word 'none'")
        if self.question_word not in QUESTION_WORDS:
            raise ValueError(f"unknown question word {self.question_word!r}")


@dataclass(frozen=True)
class MarkedEntity:
    """A candidate question entity: an NER span or a noun/verb token run."""

    start_token: int
    end_token: int
    surface: str
    label: str | None
    source: str  # ner | noun | verb


def find_focus(q: AnnotatedQuestion) -> int | None:
    """First token (surface order) that is a wh-word by tag or lemma."""
    for tok in q.tokens:
        if tok.xpos in WH_XPOS or tok.lemma.lower() in WH_LEMMAS:
            return tok.index
    return None


def coarse_class(token) -> str | None:
    """Map a token to its pattern rendering class, or None when skipped."""
    xpos = token.xpos
    if xpos and not xpos.startswith("W"):
        for prefix, cls in _XPOS_CLASS:
            if xpos.startswith(prefix):
                return cls
    if not xpos:
        return _UPOS_CLASS.get(token.upos)
    return None


def _is_verbish(token) -> bool:
    return token.xpos.startswith("VB") or token.xpos == "MD" or token.upos in ("AUX", "VERB")


def mine_pattern(q: AnnotatedQuestion) -> QuestionPattern:
    """Mine the question pattern anchored at the focus word.

    Marked tokens are the focus word's subtree, its head, and the verb-class
    tokens that share its head; "how many/much" keeps the quantifier lexical.
    Catchall when no focus word exists. Deterministic and total.
    """
    focus = find_focus(q)
    if focus is None:
        return QuestionPattern(
            pattern=CATCHALL_PATTERN,
            focus_index=None,
            pattern_token_indices=frozenset(),
            question_word="none",
        )
    focus_tok = q.token(focus)
    word = _QUESTION_WORD_MAP.get(focus_tok.lemma.lower(), "none")
    if word == "none":
        word = _QUESTION_WORD_MAP.get(focus_tok.surface.lower(), "none")

    marked = set(descendants(q, focus))
    head = focus_tok.head
    if head != 0:
        marked.add(head)
    for tok in q.tokens:
        if tok.index != focus and tok.head == head and _is_verbish(tok):
            marked.add(tok.index)

    lexical = {focus}
    if word == "how" and focus + 1 <= len(q.tokens):
        nxt = q.token(focus + 1)
        if nxt.surface.lower() in ("many", "much"):
            marked.add(nxt.index)
            lexical.add(nxt.index)

    rendered: list[str] = []
    used: list[int] = []
    for tok in q.tokens:
        if len(rendered) == PATTERN_LENGTH_CAP:
            break
        if tok.index in lexical:
            rendered.append(tok.surface.lower())
            used.append(tok.index)
        elif tok.index in marked:
            cls = coarse_class(tok)
            if cls is not None:
                rendered.append(cls)
                used.append(tok.index)
    return QuestionPattern(
        pattern=" ".join(rendered),
        focus_index=focus,
        pattern_token_indices=frozenset(used),
        question_word=word,
    )


def _noun_runs(q: AnnotatedQuestion, excluded: frozenset[int]) -> list[tuple[int, int]]:
    """Maximal runs of adjacent noun tokens outside the pattern."""
    runs = []
    start = None
    prev = None
    for tok in q.tokens:
        is_noun = tok.xpos.startswith("NN") or (not tok.xpos and tok.upos in ("NOUN", "PROPN"))
        if is_noun and tok.index not in excluded:
            if start is None:
                start = tok.index
            elif tok.index != prev + 1:
                runs.append((start, prev))
                start = tok.index
            prev = tok.index
        else:
            if start is not None:
                runs.append((start, prev))
                start = None
    if start is not None:
        runs.append((start, prev))
    return runs


def mark_entities(q: AnnotatedQuestion, p: QuestionPattern) -> list[MarkedEntity]:
    """Candidate question entities, in surface order.

    NER spans disjoint from the pattern take priority; failing that, noun
    runs outside the pattern (adjacent nouns merge into one chunk); failing
    that, verb tokens outside the pattern. Tiers never mix.
    """
    excluded = p.pattern_token_indices
    ner = [
        MarkedEntity(e.start_token, e.end_token, e.surface, e.label, "ner")
        for e in q.entities
        if not any(i in excluded for i in range(e.start_token, e.end_token + 1))
    ]
    if ner:
        return sorted(ner, key=lambda m: m.start_token)

    nouns = [
        MarkedEntity(s, e, entity_surface(q.tokens, s, e), None, "noun")
        for s, e in _noun_runs(q, excluded)
    ]
    if nouns:
        return nouns

    verbs = [
        MarkedEntity(t.index, t.index, t.surface, None, "verb")
        for t in q.tokens
        if t.index not in excluded and _is_verbish(t)
    ]
    return verbs


def pattern_stats(annotations: dict[str, AnnotatedQuestion]) -> dict[str, int]:
    """Exact pattern frequency table over a set of annotated questions."""
    counts = Counter(mine_pattern(q).pattern for q in annotations.values())
    return dict(counts)


def write_pattern_stats(stats: dict[str, int], path) -> None:
    """Emit the frequency table as TSV, sorted by count desc then pattern."""
    rows = sorted(stats.items(), key=lambda kv: (-kv[1], kv[0]))
    lines = [f"{pattern}\t{count}" for pattern, count in rows]
    Path(path).write_text("\n".join(lines) + "\n" if lines else "", encoding="utf-8")
