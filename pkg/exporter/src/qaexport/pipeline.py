"""Deterministic English annotation pipeline: tokenizer, tagger, parser, NER.

Built for question-shaped input. Every stage is rule-based so repeated runs
produce byte-identical annotations; there is no model to download and no
model drift. Accuracy targets interrogative English; declarative text gets a
best-effort nominal analysis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

WH_WORDS = {"what", "which", "who", "whom", "whose", "when", "where", "why", "how"}

_WH_XPOS = {
    "what": "WP", "which": "WDT", "who": "WP", "whom": "WP", "whose": "WP$",
    "when": "WRB", "where": "WRB", "why": "WRB", "how": "WRB",
}

_DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "each",
                "every", "no", "some", "any", "another"}
_PREPOSITIONS = {
    "in", "of", "on", "at", "by", "with", "from", "to", "for", "about",
    "over", "under", "between", "during", "after", "before", "into",
    "through", "against", "among", "around", "near", "across", "behind",
    "without", "within", "upon", "toward", "towards", "since", "until",
    "along", "per",
}
_PRONOUNS = {"i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
             "us", "them", "there"}
_POSS_PRONOUNS = {"my", "your", "his", "its", "our", "their", "hers"}
_MODALS = {"will", "would", "can", "could", "may", "might", "shall", "should",
           "must"}
_BE_FORMS = {"is": "VBZ", "are": "VBP", "am": "VBP", "was": "VBD",
             "were": "VBD", "be": "VB", "been": "VBN", "being": "VBG"}
_DO_FORMS = {"do": "VBP", "does": "VBZ", "did": "VBD"}
_HAVE_FORMS = {"have": "VB", "has": "VBZ", "had": "VBD"}
_CONJUNCTIONS = {"and", "or", "but", "nor"}
_ADJECTIVES = {
    "many", "much", "few", "several", "first", "second", "third", "last",
    "next", "other", "new", "old", "large", "small", "long", "short", "high",
    "main", "major", "common", "famous", "popular", "official", "tall",
    "big", "great", "early", "late", "original", "current", "same",
}
_ADVERBS = {"not", "now", "then", "very", "also", "often", "usually", "most",
            "more", "still", "just", "again", "ever", "never", "here"}
_MONTHS = {"january", "february", "march", "april", "may", "june", "july",
           "august", "september", "october", "november", "december"}

# Base forms that fill the verb slot of a do-support question frame.
_BASE_VERBS = {
    "release", "design", "write", "make", "win", "play", "discover",
    "invent", "found", "create", "end", "start", "form", "build", "sing",
    "direct", "produce", "host", "cover", "stand", "fall", "die", "flow",
    "change", "attend", "weigh", "sail", "live", "speak", "become", "begin",
    "go", "come", "get", "take", "give", "know", "think", "see", "say",
    "tell", "call", "name", "mean", "represent", "study", "teach", "learn",
    "move", "run", "work", "serve", "lead", "happen", "occur", "open",
    "close", "sign", "join", "leave", "return", "buy", "sell", "pay",
    "earn", "spend", "grow", "rise", "drop", "reach", "measure", "contain",
    "include", "hold", "carry", "bring", "send", "receive", "publish",
    "record", "perform", "marry", "graduate", "travel", "visit", "defeat",
    "establish", "develop", "use", "do", "have", "believe", "refer",
    "describe", "define", "help", "cause", "affect", "support", "oppose",
    "vote", "elect", "appoint", "claim", "feature", "debut", "premiere",
    "compose", "paint", "draw", "film", "score", "finish",
}

# Irregular participles/pasts the suffix rules cannot reach.
_IRREGULAR_PARTICIPLES = {
    "born", "written", "spoken", "won", "done", "made", "given", "taken",
    "known", "seen", "found", "held", "kept", "left", "lost", "met", "paid",
    "read", "said", "sold", "sent", "set", "shown", "sung", "told", "thought",
    "understood", "worn", "broken", "chosen", "drawn", "driven", "eaten",
    "fallen", "flown", "forgotten", "frozen", "grown", "hidden", "ridden",
    "risen", "stolen", "sworn", "thrown", "woken", "begun", "built", "bought",
    "brought", "caught", "taught", "fought", "heard", "led", "meant", "put",
    "invented", "located", "designed", "named", "called",
}
_IRREGULAR_PAST = {
    "was", "were", "did", "had", "went", "got", "wrote", "said", "made",
    "took", "came", "saw", "knew", "gave", "found", "told", "became", "left",
    "felt", "kept", "met", "paid", "ran", "sat", "spoke", "stood", "thought",
    "won", "fell", "led", "grew", "began", "drew", "drove", "ate", "flew",
    "rose", "sang", "sold", "sent", "threw", "wore", "broke", "chose",
    "taught", "caught", "bought", "brought", "fought", "held", "heard",
    "hosted", "died", "ended", "formed", "played", "lived", "built",
}
_LEMMA_MAP = {
    "was": "be", "were": "be", "is": "be", "are": "be", "am": "be",
    "been": "be", "being": "be", "did": "do", "does": "do", "done": "do",
    "has": "have", "had": "have", "wrote": "write", "written": "write",
    "spoke": "speak", "spoken": "speak", "won": "win", "went": "go",
    "born": "bear", "fell": "fall", "fallen": "fall", "took": "take",
    "taken": "take", "came": "come", "saw": "see", "seen": "see",
    "knew": "know", "known": "know", "gave": "give", "given": "give",
    "made": "make", "said": "say", "found": "find", "told": "tell",
    "ran": "run", "sang": "sing", "sung": "sing", "drew": "draw",
    "drawn": "draw", "drove": "drive", "driven": "drive", "ate": "eat",
    "eaten": "eat", "flew": "fly", "flown": "fly", "rose": "rise",
    "risen": "rise", "sold": "sell", "sent": "send", "threw": "throw",
    "thrown": "throw", "wore": "wear", "worn": "wear", "broke": "break",
    "broken": "break", "chose": "choose", "chosen": "choose",
    "taught": "teach", "caught": "catch", "bought": "buy",
    "brought": "bring", "fought": "fight", "held": "hold", "heard": "hear",
    "led": "lead", "met": "meet", "kept": "keep", "left": "leave",
    "felt": "feel", "stood": "stand", "thought": "think", "became": "become",
    "began": "begin", "grew": "grow", "better": "good", "best": "good",
}

# Multi-token gazetteer over tokenized surfaces; longest match wins.
GAZETTEER: dict[tuple[str, ...], str] = {
    ("Paris",): "GPE", ("France",): "GPE", ("London",): "GPE", ("Rome",): "GPE",
    ("Brazil",): "GPE", ("US",): "GPE", ("Pomona",): "GPE", ("Europe",): "LOC",
    ("New", "York"): "GPE", ("Berlin",): "GPE", ("Chicago",): "GPE",
    ("Destiny", "'s", "Child"): "ORG", ("Beatles",): "ORG",
    ("Microsoft",): "ORG", ("NASA",): "ORG", ("Harvard",): "ORG",
    ("MLQA",): "ORG", ("Notre", "Dame"): "ORG", ("Louvre",): "ORG",
    ("RCA", "Records"): "ORG", ("Google",): "ORG",
    ("Beyonce",): "PERSON", ("Tesla",): "PERSON", ("Einstein",): "PERSON",
    ("Napoleon",): "PERSON", ("Houdini",): "PERSON", ("Columbus",): "PERSON",
    ("Shakespeare",): "PERSON", ("Millard", "Sheets"): "PERSON",
    ("Bill", "Gates"): "PERSON", ("Marie", "Curie"): "PERSON",
    ("Leonardo", "da", "Vinci"): "PERSON", ("Miles", "Davis"): "PERSON",
    ("William", "Shakespeare"): "PERSON",
    ("Hamlet",): "WORK_OF_ART", ("Mona", "Lisa"): "WORK_OF_ART",
    ("Jaws",): "WORK_OF_ART", ("Dracula",): "WORK_OF_ART",
    ("Ninth", "Symphony"): "WORK_OF_ART",
    ("Eiffel", "Tower"): "FAC", ("Berlin", "Wall"): "FAC",
    ("Theodore", "M.", "Hesburgh", "Library"): "FAC",
    ("Declaration", "of", "Independence"): "WORK_OF_ART",
    ("Nile",): "LOC", ("Everest",): "LOC", ("Olympics",): "EVENT",
}

_CLITICS = ("'s", "n't", "'re", "'ve", "'ll", "'d", "'m")
_OPEN_PUNCT = "\"'([{“‘"
_CLOSE_PUNCT = "\"')]},.;:!?”’"
_NUMBER = re.compile(r"^\d[\d,.]*$")


@dataclass
class Word:
    index: int
    surface: str
    lemma: str = "_"
    upos: str = "X"
    xpos: str = "X"
    head: int = 0
    deprel: str = "dep"
    space_after: bool = True
    ner: str | None = None


def tokenize(text: str) -> list[Word]:
    """Whitespace split plus punctuation/clitic separation with SpaceAfter."""
    words: list[Word] = []
    chunks = text.split()
    for c_idx, chunk in enumerate(chunks):
        pieces = _split_chunk(chunk)
        for p_idx, piece in enumerate(pieces):
            last_piece = p_idx == len(pieces) - 1
            last_chunk = c_idx == len(chunks) - 1
            words.append(
                Word(
                    index=len(words) + 1,
                    surface=piece,
                    space_after=last_piece and not last_chunk,
                )
            )
    if words:
        words[-1].space_after = False
    return words


def _split_chunk(chunk: str) -> list[str]:
    prefix: list[str] = []
    suffix: list[str] = []
    while chunk and chunk[0] in _OPEN_PUNCT and len(chunk) > 1:
        prefix.append(chunk[0])
        chunk = chunk[1:]
    while True:
        low = chunk.lower()
        matched = False
        for clitic in _CLITICS:
            if low.endswith(clitic) and len(chunk) > len(clitic):
                suffix.append(chunk[-len(clitic):])
                chunk = chunk[: -len(clitic)]
                matched = True
                break
        if matched:
            continue
        if chunk and chunk[-1] in _CLOSE_PUNCT and len(chunk) > 1:
            # keep abbreviation-style internal periods ("M." stays whole)
            if chunk[-1] == "." and len(chunk) == 2 and chunk[0].isupper():
                break
            suffix.append(chunk[-1])
            chunk = chunk[:-1]
            matched = True
        if not matched:
            break
    return prefix + ([chunk] if chunk else []) + list(reversed(suffix))


def _is_nounish_surface(surface: str) -> bool:
    low = surface.lower()
    return not (
        low in _DETERMINERS or low in _PREPOSITIONS or low in _PRONOUNS
        or low in _POSS_PRONOUNS or low in _MODALS or low in _BE_FORMS
        or low in _DO_FORMS or low in _HAVE_FORMS or low in _CONJUNCTIONS
        or low in _ADVERBS or low in WH_WORDS or not surface[0].isalnum()
    )


def tag(words: list[Word]) -> None:
    """Assign xpos/upos in place: lexicon, morphology, then frame repairs."""
    for i, w in enumerate(words):
        low = w.surface.lower()
        if low in WH_WORDS:
            w.xpos = _WH_XPOS[low]
            w.upos = {"WRB": "ADV", "WDT": "DET"}.get(w.xpos, "PRON")
        elif w.surface == "'s":
            w.xpos, w.upos = "POS", "PART"
        elif low == "n't":
            w.xpos, w.upos = "RB", "PART"
        elif not any(ch.isalnum() for ch in w.surface):
            w.xpos = "." if w.surface in ".!?" else ","
            w.upos = "PUNCT"
        elif _NUMBER.match(w.surface):
            w.xpos, w.upos = "CD", "NUM"
        elif low in _DO_FORMS:
            w.xpos, w.upos = _DO_FORMS[low], "AUX"
        elif low in _BE_FORMS:
            w.xpos, w.upos = _BE_FORMS[low], "AUX"
        elif low in _HAVE_FORMS:
            w.xpos, w.upos = _HAVE_FORMS[low], "VERB"
        elif low in _MODALS:
            w.xpos, w.upos = "MD", "AUX"
        elif low in _DETERMINERS:
            w.xpos, w.upos = "DT", "DET"
        elif low in _PREPOSITIONS:
            w.xpos, w.upos = ("TO", "PART") if low == "to" else ("IN", "ADP")
        elif low in _PRONOUNS and not (w.surface.isupper() and len(w.surface) > 1):
            w.xpos, w.upos = "PRP", "PRON"
        elif low in _POSS_PRONOUNS and not (w.surface.isupper() and len(w.surface) > 1):
            w.xpos, w.upos = "PRP$", "PRON"
        elif low in _CONJUNCTIONS:
            w.xpos, w.upos = "CC", "CCONJ"
        elif low in _ADJECTIVES:
            w.xpos, w.upos = "JJ", "ADJ"
        elif low in _ADVERBS:
            w.xpos, w.upos = "RB", "ADV"
        elif low in _MONTHS:
            w.xpos, w.upos = "NNP", "PROPN"
        elif w.surface[0].isupper() and i > 0:
            w.xpos, w.upos = "NNP", "PROPN"
        elif low in _IRREGULAR_PARTICIPLES:
            w.xpos, w.upos = "VBN", "VERB"
        elif low in _IRREGULAR_PAST:
            w.xpos, w.upos = "VBD", "VERB"
        elif low.endswith("ly") and len(low) > 3:
            w.xpos, w.upos = "RB", "ADV"
        elif low.endswith("ing") and len(low) > 4:
            w.xpos, w.upos = "VBG", "VERB"
        elif low.endswith("ed") and len(low) > 3:
            w.xpos, w.upos = "VBD", "VERB"
        elif low.endswith("est") and len(low) > 4:
            w.xpos, w.upos = "JJS", "ADJ"
        elif low.endswith("s") and not low.endswith("ss") and len(low) > 3:
            w.xpos, w.upos = "NNS", "NOUN"
        else:
            w.xpos, w.upos = "NN", "NOUN"

    _frame_repairs(words)
    for w in words:
        w.lemma = _lemma(w)


def _frame_repairs(words: list[Word]) -> None:
    n = len(words)
    np_tags = ("DT", "JJ", "JJS", "JJR", "CD", "PRP$", "POS")
    for i, w in enumerate(words):
        low = w.surface.lower()
        # what/which directly modifying a noun
        if low in ("what", "which") and i + 1 < n and words[i + 1].xpos.startswith("NN"):
            w.xpos, w.upos = "WDT", "DET"
        # "What's" -> 's is the copula
        if w.surface == "'s" and i > 0 and words[i - 1].xpos.startswith("W"):
            w.xpos, w.upos = "VBZ", "AUX"
        # gerund acting as a noun modifier ("a programming language")
        if w.xpos == "VBG":
            prev = words[i - 1].xpos if i > 0 else ""
            nxt = words[i + 1].xpos if i + 1 < n else ""
            if prev in np_tags or nxt.startswith("NN"):
                w.xpos, w.upos = "NN", "NOUN"
        # reduced relative: "<noun> used to ..." is a participle, not a past
        if (
            w.xpos == "VBD"
            and i > 0
            and words[i - 1].xpos.startswith("NN")
            and i + 1 < n
            and words[i + 1].xpos in ("TO", "IN")
        ):
            w.xpos = "VBN"
        # infinitive after "to": unknown nouns in the base-verb lexicon flip
        if (
            w.xpos in ("NN", "NNS")
            and i > 0
            and words[i - 1].xpos == "TO"
            and low in _BASE_VERBS
        ):
            w.xpos, w.upos = "VB", "VERB"

    # do-support frame: "do/does/did <subject NP> <verb> ..." retags the verb
    for i, w in enumerate(words):
        if w.surface.lower() not in _DO_FORMS or w.upos != "AUX":
            continue
        seen_noun = False
        target = None
        for j in range(i + 1, n):
            xpos = words[j].xpos
            low_j = words[j].surface.lower()
            if seen_noun and low_j in _BASE_VERBS and xpos in ("NN", "NNS", "VBP", "VBZ", "VBD"):
                target = j
                break
            if seen_noun and xpos in ("DT", "PRP$"):
                break  # object NP reached without a known verb; leave tags
            if xpos.startswith("NN") or xpos == "PRP":
                seen_noun = True
                continue
            if xpos in np_tags:
                continue
            break
        if target is not None:
            words[target].xpos, words[target].upos = "VB", "VERB"


def _lemma(w: Word) -> str:
    low = w.surface.lower()
    if low in _LEMMA_MAP:
        return _LEMMA_MAP[low]
    if w.xpos in ("NNS",):
        if low.endswith("ies") and len(low) > 4:
            return low[:-3] + "y"
        if low.endswith("es") and low[-3] in "sxz":
            return low[:-2]
        if low.endswith("s"):
            return low[:-1]
    if w.xpos in ("VBD", "VBN") and low.endswith("ed"):
        if low[:-1].endswith("e"):
            return low[:-1]
        if low.endswith("ied"):
            return low[:-3] + "y"
        return low[:-2]
    if w.xpos == "VBZ" and low.endswith("s") and not low.endswith("ss"):
        return low[:-1]
    return low


def _verb_roles(words: list[Word]) -> tuple[int | None, set[int]]:
    """Pick the root verb (0-based) and the set of auxiliary indices."""
    verb_idx = [
        i for i, w in enumerate(words) if w.xpos.startswith("VB") or w.xpos == "MD"
    ]
    aux: set[int] = set()
    np_material = ("DT", "JJ", "JJR", "JJS", "CD", "PRP$", "POS", "PRP", "RB")

    def participle_over_np(i: int) -> bool:
        # "was <NP> born?" is passive; "is <NP> of <NP> used ..." is copular
        for j in range(i + 1, len(words)):
            xpos = words[j].xpos
            if xpos in ("VBN", "VBG"):
                return True
            if xpos.startswith("NN") or xpos in np_material:
                continue
            return False
        return False

    for i in verb_idx:
        low = words[i].surface.lower()
        later_main = any(
            j > i and words[j].xpos in ("VB", "VBN", "VBG") for j in verb_idx
        )
        if words[i].xpos == "MD":
            aux.add(i)
        elif low in _DO_FORMS and later_main:
            aux.add(i)
        elif (low in _BE_FORMS or low in _HAVE_FORMS or words[i].surface == "'s") and (
            participle_over_np(i)
        ):
            aux.add(i)
    main = [i for i in verb_idx if i not in aux]
    if main:
        root = main[0]
        # infinitival "to VB" never outranks an earlier finite verb
        finite = [i for i in main if not (i > 0 and words[i - 1].xpos == "TO")]
        if finite:
            root = finite[0]
        return root, aux
    if verb_idx:
        root = verb_idx[0]
        aux.discard(root)
        return root, aux
    return None, aux


def parse(words: list[Word]) -> None:
    """Heuristic dependency parse in place; guarantees a single rooted tree."""
    n = len(words)
    if n == 0:
        return
    root, aux = _verb_roles(words)

    if root is None:
        # nominal root: head noun of the first noun chunk, else first token
        chunks = _noun_chunks(words)
        root = chunks[0][-1] if chunks else 0

    words[root].head = 0
    words[root].deprel = "root"

    for i in aux:
        if i != root:
            words[i].head = root + 1
            words[i].deprel = "auxpass" if words[root].xpos == "VBN" else "aux"

    chunks = _noun_chunks(words)
    chunk_heads = []
    for chunk in chunks:
        head_i = chunk[-1]
        chunk_heads.append(head_i)
        _attach_chunk_internals(words, chunk, head_i)

    seen_subject = False
    seen_object = False
    for chunk, head_i in zip(chunks, chunk_heads):
        if head_i == root:
            continue
        prev = _previous_attachable(words, chunk[0])
        prev_word = words[prev] if prev is not None else None
        if prev_word is not None and prev_word.xpos in ("IN", "TO"):
            words[head_i].head = prev + 1
            words[head_i].deprel = "pobj"
        elif (
            prev_word is not None
            and prev_word.xpos.startswith("VB")
            and prev != root
            and prev not in aux
        ):
            words[head_i].head = prev + 1
            words[head_i].deprel = "dobj"
        elif head_i < root:
            words[head_i].head = root + 1
            words[head_i].deprel = "nsubj" if not seen_subject else "dep"
            seen_subject = True
        else:
            words[head_i].head = root + 1
            if not seen_object:
                words[head_i].deprel = (
                    "attr" if words[root].surface.lower() in _BE_FORMS else "dobj"
                )
                seen_object = True
            else:
                words[head_i].deprel = "dep"

    _link_possessives(words, chunks)

    for i, w in enumerate(words):
        if i == root or w.head != 0 or i in aux:
            continue
        low = w.surface.lower()
        if w.xpos.startswith("W"):
            if low in ("what", "which") and i + 1 < n and words[i + 1].xpos.startswith("NN"):
                w.head = _chunk_head_for(chunks, i + 1) + 1
                w.deprel = "det"
            elif low == "how" and i + 1 < n and words[i + 1].xpos in ("JJ", "RB"):
                w.head = i + 2  # "how many/much/old ..." modifies the quantifier
                w.deprel = "advmod"
            else:
                w.head = root + 1
                w.deprel = "advmod" if w.xpos == "WRB" else "nsubj"
        elif w.upos == "PUNCT":
            w.head = root + 1
            w.deprel = "punct"
        elif w.xpos in ("IN", "TO"):
            target = _previous_noun_or_verb(words, i, root)
            w.head = target + 1
            w.deprel = "prep" if w.xpos == "IN" else "aux"
        elif w.xpos.startswith("VB"):
            if i > 0 and words[i - 1].xpos == "TO":
                prev_verb = _previous_verb(words, i - 1, root)
                w.head = prev_verb + 1
                w.deprel = "xcomp"
            elif w.xpos == "VBN":
                target = _previous_noun(words, i)
                w.head = (target if target is not None else root) + 1
                w.deprel = "acl" if target is not None else "dep"
            else:
                w.head = root + 1
                w.deprel = "dep"
        elif w.xpos == "RB":
            w.head = root + 1
            w.deprel = "advmod"
        elif w.xpos == "CC":
            w.head = root + 1
            w.deprel = "cc"
        else:
            w.head = root + 1
            w.deprel = "dep"

    _repair_tree(words, root)


def _noun_chunks(words: list[Word]) -> list[list[int]]:
    """Maximal [modifier* noun]+ runs; possessive 's splits into linked chunks."""
    chunks: list[list[int]] = []
    current: list[int] = []
    has_noun = False
    for i, w in enumerate(words):
        if w.xpos == "POS":
            if current and has_noun:
                chunks.append(current)
            current, has_noun = [], False
            continue
        is_mod = w.xpos in ("DT", "JJ", "JJR", "JJS", "CD", "PRP$")
        is_noun = w.xpos.startswith("NN") or w.xpos == "PRP"
        if is_noun:
            current.append(i)
            has_noun = True
        elif is_mod:
            if has_noun:
                chunks.append(current)
                current, has_noun = [], False
            current.append(i)
        else:
            if current and has_noun:
                chunks.append(current)
            current, has_noun = [], False
    if current and has_noun:
        chunks.append(current)
    return chunks


def _attach_chunk_internals(words: list[Word], chunk: list[int], head_i: int) -> None:
    for i in chunk:
        if i == head_i:
            continue
        w = words[i]
        w.head = head_i + 1
        if w.xpos == "DT":
            w.deprel = "det"
        elif w.xpos in ("JJ", "JJR", "JJS"):
            w.deprel = "amod"
        elif w.xpos == "CD":
            w.deprel = "nummod"
        elif w.xpos == "PRP$":
            w.deprel = "poss"
        else:
            w.deprel = "compound"


def _link_possessives(words: list[Word], chunks: list[list[int]]) -> None:
    """Re-head "X 's Y" chains: X poss-> Y, 's case-> X."""
    heads_by_first = {chunk[0]: chunk[-1] for chunk in chunks}
    n = len(words)
    for chunk in chunks:
        head_i = chunk[-1]
        pos_i = head_i + 1
        if pos_i < n and words[pos_i].xpos == "POS":
            next_head = heads_by_first.get(pos_i + 1)
            if next_head is not None:
                words[head_i].head = next_head + 1
                words[head_i].deprel = "poss"
                words[pos_i].head = head_i + 1
                words[pos_i].deprel = "case"


def _chunk_head_for(chunks: list[list[int]], index: int) -> int:
    for chunk in chunks:
        if index in chunk:
            return chunk[-1]
    return index


def _previous_attachable(words, i):
    for j in range(i - 1, -1, -1):
        if words[j].upos == "PUNCT":
            continue
        return j
    return None


def _previous_noun_or_verb(words, i, root):
    for j in range(i - 1, -1, -1):
        if words[j].xpos.startswith("NN") or words[j].xpos.startswith("VB"):
            return j
    return root


def _previous_noun(words, i):
    for j in range(i - 1, -1, -1):
        if words[j].xpos.startswith("NN"):
            return j
    return None


def _previous_verb(words, i, root):
    for j in range(i - 1, -1, -1):
        if words[j].xpos.startswith("VB"):
            return j
    return root


def _repair_tree(words: list[Word], root: int) -> None:
    """Break cycles and stray roots so heads always form one rooted tree."""
    n = len(words)
    for i, w in enumerate(words):
        if i != root and (w.head == 0 or w.head == i + 1 or not (0 <= w.head <= n)):
            w.head = root + 1
            w.deprel = "dep"
    for i, w in enumerate(words):
        seen = set()
        cur = i
        while cur != root and words[cur].head != 0:
            if cur in seen:
                words[i].head = root + 1
                words[i].deprel = "dep"
                break
            seen.add(cur)
            cur = words[cur].head - 1


def apply_ner(words: list[Word]) -> None:
    """Gazetteer-first NER with shape fallbacks, written as LABEL-B/I tags."""
    n = len(words)
    surfaces = [w.surface for w in words]
    taken = [False] * n
    i = 0
    while i < n:
        matched = None
        for length in range(min(4, n - i), 0, -1):
            key = tuple(surfaces[i : i + length])
            if key in GAZETTEER:
                matched = (length, GAZETTEER[key])
                break
        if matched:
            length, label = matched
            for k in range(length):
                words[i + k].ner = f"{label}-{'B' if k == 0 else 'I'}"
                taken[i + k] = True
            i += length
            continue
        i += 1
    # numbers
    for i, w in enumerate(words):
        if taken[i] or w.xpos != "CD":
            continue
        value = w.surface.replace(",", "")
        label = "DATE" if re.fullmatch(r"1[0-9]{3}|20[0-9]{2}", value) else "CARDINAL"
        w.ner = f"{label}-B"
        taken[i] = True
    for i, w in enumerate(words):
        if not taken[i] and w.surface.lower() in _MONTHS:
            w.ner = "DATE-B"
            taken[i] = True
    # unmatched proper-noun runs
    i = 0
    while i < n:
        if taken[i] or words[i].xpos != "NNP" or i == 0 and words[i].surface.lower() in WH_WORDS:
            i += 1
            continue
        j = i
        while j < n and words[j].xpos == "NNP" and not taken[j]:
            j += 1
        prev = words[i - 1].surface.lower() if i > 0 else ""
        if prev in ("in", "at", "from", "near", "to"):
            label = "GPE"
        elif j - i >= 2:
            label = "PERSON"
        else:
            label = "ORG"
        for k in range(i, j):
            words[k].ner = f"{label}-{'B' if k == i else 'I'}"
            taken[k] = True
        i = j


def annotate(text: str) -> list[Word]:
    """Full pipeline: tokenize, tag, parse, NER."""
    words = tokenize(text)
    tag(words)
    parse(words)
    apply_ner(words)
    return words
