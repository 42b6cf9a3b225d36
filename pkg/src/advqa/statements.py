"""Question-to-statement conversion.

Eight rules keyed by question word (plus a catchall) rewrite the question
tokens into a declarative statement carrying exactly one `<ANSWER>`
placeholder and character slots for the marked question entities. Output is
deliberately allowed to be ungrammatical; naive inflection is good enough
for the attacks to work.
"""

from __future__ import annotations

from dataclasses import dataclass

from .annotation import AnnotatedQuestion
from .patterns import MarkedEntity, QuestionPattern

PLACEHOLDER = "<ANSWER>"

RULES = ("who", "what", "when", "why", "which", "where", "how", "catchall")

_WH_REPLACE_RULES = frozenset({"who", "what", "which"})
_APPEND_PHRASE = {"when": ("in",), "where": ("in",), "why": ("because",), "how": ("by",)}
_AUX_FORMS = frozenset({"do", "does", "did"})

# Common irregular past forms; everything else gets the naive +ed suffix.
IRREGULAR_PAST = {
    "arise": "arose", "awake": "awoke", "be": "was", "bear": "bore", "beat": "beat",
    "become": "became", "begin": "began", "bend": "bent", "bet": "bet", "bind": "bound",
    "bite": "bit", "bleed": "bled", "blow": "blew", "break": "broke", "breed": "bred",
    "bring": "brought", "broadcast": "broadcast", "build": "built", "buy": "bought",
    "catch": "caught", "choose": "chose", "cling": "clung", "come": "came", "cost": "cost",
    "creep": "crept", "cut": "cut", "deal": "dealt", "dig": "dug", "do": "did",
    "draw": "drew", "drink": "drank", "drive": "drove", "eat": "ate", "fall": "fell",
    "feed": "fed", "feel": "felt", "fight": "fought", "find": "found", "flee": "fled",
    "fling": "flung", "fly": "flew", "forbid": "forbade", "forget": "forgot",
    "forgive": "forgave", "freeze": "froze", "get": "got", "give": "gave", "go": "went",
    "grind": "ground", "grow": "grew", "hang": "hung", "have": "had", "hear": "heard",
    "hide": "hid", "hit": "hit", "hold": "held", "hurt": "hurt", "keep": "kept",
    "kneel": "knelt", "know": "knew", "lay": "laid", "lead": "led", "leap": "leapt",
    "leave": "left", "lend": "lent", "let": "let", "lie": "lay", "light": "lit",
    "lose": "lost", "make": "made", "mean": "meant", "meet": "met", "pay": "paid",
    "put": "put", "quit": "quit", "read": "read", "ride": "rode", "ring": "rang",
    "rise": "rose", "run": "ran", "say": "said", "see": "saw", "seek": "sought",
    "sell": "sold", "send": "sent", "set": "set", "shake": "shook", "shed": "shed",
    "shine": "shone", "shoot": "shot", "show": "showed", "shrink": "shrank",
    "shut": "shut", "sing": "sang", "sink": "sank", "sit": "sat", "sleep": "slept",
    "slide": "slid", "speak": "spoke", "speed": "sped", "spend": "spent", "spin": "spun",
    "spread": "spread", "spring": "sprang", "stand": "stood", "steal": "stole",
    "stick": "stuck", "sting": "stung", "strike": "struck", "swear": "swore",
    "sweep": "swept", "swim": "swam", "swing": "swung", "teach": "taught",
    "tear": "tore", "tell": "told", "think": "thought", "throw": "threw",
    "understand": "understood", "wake": "woke", "wear": "wore", "weave": "wove",
    "weep": "wept", "win": "won", "wind": "wound", "withdraw": "withdrew",
    "write": "wrote",
}

_VOWELS = "aeiou"


def past_tense(verb: str) -> str:
    """Naive past inflection; consonant doubling is deliberately not handled."""
    low = verb.lower()
    if low in IRREGULAR_PAST:
        out = IRREGULAR_PAST[low]
        return out.capitalize() if verb[0].isupper() else out
    if low.endswith("e"):
        return verb + "d"
    if low.endswith("y") and len(low) > 1 and low[-2] not in _VOWELS:
        return verb[:-1] + "ied"
    return verb + "ed"


def third_singular(verb: str) -> str:
    """Naive 3rd-person singular for does-deletion."""
    low = verb.lower()
    if low.endswith("y") and len(low) > 1 and low[-2] not in _VOWELS:
        return verb[:-1] + "ies"
    if low.endswith(("s", "x", "z", "ch", "sh", "o")):
        return verb + "es"
    return verb + "s"


@dataclass(frozen=True)
class EntitySlot:
    """Character range of a marked entity inside the template text."""

    start: int
    end: int
    entity: MarkedEntity

    def surface(self, text: str) -> str:
        return text[self.start : self.end]


@dataclass(frozen=True)
class StatementTemplate:
    """Statement text with one placeholder and substitutable entity slots."""

    text: str
    entity_slots: tuple[EntitySlot, ...]
    rule_used: str

    def __post_init__(self):
        if self.rule_used not in RULES:
            raise ValueError(f"unknown rule {self.rule_used!r}")
        if self.text.count(PLACEHOLDER) != 1:
            raise ValueError(f"template must contain exactly one placeholder: {self.text!r}")
        ph_start = self.text.index(PLACEHOLDER)
        ph_end = ph_start + len(PLACEHOLDER)
        prev_end = -1
        for slot in sorted(self.entity_slots, key=lambda s: s.start):
            if not (0 <= slot.start < slot.end <= len(self.text)):
                raise ValueError(f"slot [{slot.start}, {slot.end}) out of bounds")
            if slot.start < prev_end:
                raise ValueError("entity slots overlap")
            if slot.start < ph_end and ph_start < slot.end:
                raise ValueError("entity slot overlaps the placeholder")
            prev_end = slot.end

    @property
    def placeholder_span(self) -> tuple[int, int]:
        start = self.text.index(PLACEHOLDER)
        return start, start + len(PLACEHOLDER)


class _Cells:
    """Editable per-token text cells that remember original token indices."""

    def __init__(self, q: AnnotatedQuestion):
        self.texts: dict[int, str | None] = {t.index: t.surface for t in q.tokens}
        self.order: list[int] = [t.index for t in q.tokens]
        self.appended_front: list[str] = []
        self.appended_back: list[str] = []

    def delete(self, index: int) -> None:
        self.texts[index] = None

    def replace(self, index: int, text: str) -> None:
        self.texts[index] = text

    def join(self) -> tuple[str, dict[int, tuple[int, int]]]:
        """Join surviving cells with single spaces; return text + per-token ranges."""
        parts: list[str] = list(self.appended_front)
        ranges: dict[int, tuple[int, int]] = {}
        pos = sum(len(p) + 1 for p in parts)
        for idx in self.order:
            text = self.texts[idx]
            if text is None:
                continue
            ranges[idx] = (pos, pos + len(text))
            parts.append(text)
            pos += len(text) + 1
        parts.extend(self.appended_back)
        return " ".join(parts), ranges


def _delete_question_marks(q: AnnotatedQuestion, cells: _Cells) -> None:
    for tok in q.tokens:
        if tok.surface.strip("?") == "":
            cells.delete(tok.index)


def _aux_and_inflect(q: AnnotatedQuestion, cells: _Cells, focus: int) -> None:
    """Delete a do/does/did auxiliary after the focus and re-inflect the main verb."""
    if focus + 1 > len(q.tokens):
        return
    aux = q.token(focus + 1)
    if aux.surface.lower() not in _AUX_FORMS:
        return
    cells.delete(aux.index)
    main = None
    head = q.tokens[aux.head - 1] if aux.head != 0 else None
    if head is not None and head.xpos.startswith("VB"):
        main = head
    else:
        for tok in q.tokens[aux.index :]:
            if tok.xpos.startswith("VB"):
                main = tok
                break
    if main is None or cells.texts[main.index] is None:
        return
    form = aux.surface.lower()
    if form == "did":
        cells.replace(main.index, past_tense(main.surface))
    elif form == "does":
        cells.replace(main.index, third_singular(main.surface))
    # bare "do" keeps the verb unchanged


def _catchall(q: AnnotatedQuestion, entities) -> StatementTemplate:
    raw = q.raw_text().rstrip().rstrip("?").rstrip()
    raw = raw.replace("?", "")
    text = f"{raw} {PLACEHOLDER}"
    # Token offsets in the reconstructed surface, for entity slots.
    ranges: dict[int, tuple[int, int]] = {}
    pos = 0
    for tok in q.tokens:
        if pos + len(tok.surface) <= len(raw):
            ranges[tok.index] = (pos, pos + len(tok.surface))
        pos += len(tok.surface) + (1 if tok.space_after else 0)
    slots = _slots_from_ranges(entities, ranges, text)
    return StatementTemplate(text=text, entity_slots=slots, rule_used="catchall")


def _slots_from_ranges(entities, ranges, text) -> tuple[EntitySlot, ...]:
    slots = []
    for ent in entities:
        token_ranges = [
            ranges.get(i) for i in range(ent.start_token, ent.end_token + 1)
        ]
        if any(r is None for r in token_ranges):
            continue  # a token of this entity was deleted or replaced
        start = token_ranges[0][0]
        end = token_ranges[-1][1]
        if PLACEHOLDER in text[start:end]:
            continue
        slots.append(EntitySlot(start=start, end=end, entity=ent))
    return tuple(slots)


def admits_both_placements(rule: str) -> bool:
    """Whether a rule supports both placeholder-initial and -final placement."""
    return rule != "catchall"


def convert(
    q: AnnotatedQuestion,
    p: QuestionPattern,
    entities: list[MarkedEntity],
    placeholder_position: str = "default",
) -> StatementTemplate:
    """Convert a question into a statement template.

    Rule selection follows the pattern's question word; unknown or absent
    words fall through to the catchall (strip the question mark, append the
    placeholder). `placeholder_position` ("default" | "initial" | "final")
    lets the defense builder randomize where the placeholder lands for rules
    that admit both placements.
    """
    rule = p.question_word if p.question_word != "none" else "catchall"
    if rule == "catchall" or p.focus_index is None:
        return _catchall(q, entities)

    focus = p.focus_index
    cells = _Cells(q)
    _delete_question_marks(q, cells)
    placeholder_inline = False

    if rule in _WH_REPLACE_RULES:
        cells.replace(focus, PLACEHOLDER)
        placeholder_inline = True
    elif rule == "how":
        nxt = q.token(focus + 1) if focus + 1 <= len(q.tokens) else None
        if nxt is not None and nxt.surface.lower() in ("many", "much"):
            cells.replace(focus, PLACEHOLDER)
            cells.delete(nxt.index)
            placeholder_inline = True
        else:
            cells.delete(focus)
            cells.appended_back = ["by", PLACEHOLDER]
    else:  # when / where / why
        cells.delete(focus)
        _aux_and_inflect(q, cells, focus)
        cells.appended_back = [*_APPEND_PHRASE[rule], PLACEHOLDER]

    if placeholder_position == "final" and placeholder_inline:
        # move the inline placeholder to the end
        for idx, text in list(cells.texts.items()):
            if text == PLACEHOLDER:
                cells.delete(idx)
        cells.appended_back = [PLACEHOLDER]
    elif placeholder_position == "initial" and not placeholder_inline:
        cells.appended_front = cells.appended_back
        cells.appended_back = []

    text, ranges = cells.join()
    slots = _slots_from_ranges(entities, ranges, text)
    return StatementTemplate(text=text, entity_slots=slots, rule_used=rule)
