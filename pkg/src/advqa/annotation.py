"""Per-question linguistic annotations and their CoNLL-U transport format.

Annotations (tokens, POS, dependency tree, NER spans) are produced offline by
the exporter component and read here; nothing in this package runs a tagger
or parser in-process.

Transport: standard 10-column CoNLL-U, one record per question, each record
opened by a `# qa_id = <id>` comment. NER spans ride in the MISC column as
`NER=<LABEL>-<B|I>`; `SpaceAfter=No` is honored for surface reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import AnnotationFormatError, TreeError

_CONLLU_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    """One token row: 1-based index, surface, lemma, tags, head and relation."""

    index: int
    surface: str
    lemma: str
    upos: str
    xpos: str
    head: int
    deprel: str
    space_after: bool = True


@dataclass(frozen=True)
class EntitySpan:
    """An NER span over an inclusive token range."""

    start_token: int
    end_token: int
    label: str
    surface: str


@dataclass(frozen=True)
class AnnotatedQuestion:
    """Tokens, dependency tree and NER spans for one question."""

    qa_id: str
    tokens: tuple[Token, ...]
    entities: tuple[EntitySpan, ...]

    def __post_init__(self):
        validate_tree(self.qa_id, self.tokens)
        n = len(self.tokens)
        for ent in self.entities:
            if not (1 <= ent.start_token <= ent.end_token <= n):
                raise AnnotationFormatError(
                    f"entity span [{ent.start_token}, {ent.end_token}] out of range "
                    f"for {self.qa_id!r} ({n} tokens)"
                )
            joined = entity_surface(self.tokens, ent.start_token, ent.end_token)
            if joined != ent.surface:
                raise AnnotationFormatError(
                    f"entity surface mismatch for {self.qa_id!r}: "
                    f"{ent.surface!r} != {joined!r}"
                )

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def raw_text(self) -> str:
        """Reconstruct the original surface string via SpaceAfter flags."""
        parts = []
        for tok in self.tokens:
            parts.append(tok.surface)
            if tok.space_after:
                parts.append(" ")
        return "".join(parts).rstrip(" ")


def entity_surface(tokens, start_token: int, end_token: int) -> str:
    """Canonical surface of a token range: surfaces joined with single spaces."""
    return " ".join(t.surface for t in tokens[start_token - 1 : end_token])


def validate_tree(qa_id: str, tokens) -> None:
    """Require a single root, in-range heads, no self-loops and no cycles."""
    n = len(tokens)
    if n == 0:
        raise TreeError(qa_id, "no tokens")
    roots = 0
    for tok in tokens:
        if tok.head == tok.index:
            raise TreeError(qa_id, f"token {tok.index} heads itself")
        if not (0 <= tok.head <= n):
            raise TreeError(qa_id, f"token {tok.index} has head {tok.head} outside [0, {n}]")
        if tok.head == 0:
            roots += 1
    if roots != 1:
        raise TreeError(qa_id, f"expected exactly one root, found {roots}")
    # Every token must reach the root; a cycle never does.
    for tok in tokens:
        seen = set()
        cur = tok.index
        while cur != 0:
            if cur in seen:
                raise TreeError(qa_id, f"cycle through token {tok.index}")
            seen.add(cur)
            cur = tokens[cur - 1].head


def descendants(q: AnnotatedQuestion, index: int) -> set[int]:
    """All token indices in the subtree under `index`, excluding `index` itself."""
    children: dict[int, list[int]] = {}
    for tok in q.tokens:
        children.setdefault(tok.head, []).append(tok.index)
    out: set[int] = set()
    stack = list(children.get(index, []))
    while stack:
        cur = stack.pop()
        out.add(cur)
        stack.extend(children.get(cur, []))
    return out


def _parse_misc(misc: str) -> tuple[str | None, bool]:
    """Extract (ner_tag, space_after) from a MISC column value."""
    ner = None
    space_after = True
    if misc and misc != "_":
        for part in misc.split("|"):
            if part.startswith("NER="):
                ner = part[len("NER=") :]
            elif part == "SpaceAfter=No":
                space_after = False
    return ner, space_after


def _entities_from_tags(qa_id: str, tokens, ner_tags) -> tuple[EntitySpan, ...]:
    spans = []
    start = None
    label = None
    for tok, tag in zip(tokens, ner_tags):
        if tag is None:
            if start is not None:
                spans.append((start, tok.index - 1, label))
                start, label = None, None
            continue
        try:
            tag_label, marker = tag.rsplit("-", 1)
        except ValueError:
            raise AnnotationFormatError(f"bad NER tag {tag!r} in record {qa_id!r}")
        if marker == "B" or start is None or tag_label != label:
            if start is not None:
                spans.append((start, tok.index - 1, label))
            start, label = tok.index, tag_label
    if start is not None:
        spans.append((start, tokens[-1].index, label))
    return tuple(
        EntitySpan(s, e, lab, entity_surface(tokens, s, e)) for s, e, lab in spans
    )


def _record_to_question(qa_id: str, rows: list[str]) -> AnnotatedQuestion:
    tokens = []
    ner_tags = []
    for row in rows:
        cols = row.split("\t")
        if len(cols) != _CONLLU_COLUMNS:
            raise AnnotationFormatError(
                f"expected {_CONLLU_COLUMNS} columns in record {qa_id!r}, got {len(cols)}: {row!r}"
            )
        if "-" in cols[0] or "." in cols[0]:
            continue  # multiword and empty nodes are not produced by the exporter
        ner, space_after = _parse_misc(cols[9])
        tokens.append(
            Token(
                index=int(cols[0]),
                surface=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                head=int(cols[6]),
                deprel=cols[7],
                space_after=space_after,
            )
        )
        ner_tags.append(ner)
    if [t.index for t in tokens] != list(range(1, len(tokens) + 1)):
        raise AnnotationFormatError(f"non-contiguous token indices in record {qa_id!r}")
    entities = _entities_from_tags(qa_id, tokens, ner_tags)
    return AnnotatedQuestion(qa_id=qa_id, tokens=tuple(tokens), entities=entities)


def read_annotations(path) -> dict[str, AnnotatedQuestion]:
    """Read a CoNLL-U file into a mapping qa_id -> AnnotatedQuestion (file order)."""
    out: dict[str, AnnotatedQuestion] = {}
    qa_id = None
    rows: list[str] = []

    def flush():
        nonlocal qa_id, rows
        if rows:
            if qa_id is None:
                raise AnnotationFormatError("record without a '# qa_id =' comment")
            if qa_id in out:
                raise AnnotationFormatError(f"duplicate qa_id {qa_id!r}")
            out[qa_id] = _record_to_question(qa_id, rows)
        qa_id, rows = None, []

    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                flush()
            elif line.startswith("#"):
                if line.startswith("# qa_id"):
                    _, _, value = line.partition("=")
                    qa_id = value.strip()
            else:
                rows.append(line)
    flush()
    return out


def write_annotations(annotations: dict[str, AnnotatedQuestion], path) -> None:
    """Serialize annotations back to CoNLL-U; inverse of read_annotations."""
    blocks = []
    for qa_id, q in annotations.items():
        lines = [f"# qa_id = {qa_id}"]
        ner_by_token: dict[int, str] = {}
        for ent in q.entities:
            for idx in range(ent.start_token, ent.end_token + 1):
                marker = "B" if idx == ent.start_token else "I"
                ner_by_token[idx] = f"NER={ent.label}-{marker}"
        for tok in q.tokens:
            misc_parts = []
            if tok.index in ner_by_token:
                misc_parts.append(ner_by_token[tok.index])
            if not tok.space_after:
                misc_parts.append("SpaceAfter=No")
            misc = "|".join(misc_parts) if misc_parts else "_"
            lines.append(
                "\t".join(
                    [
                        str(tok.index),
                        tok.surface,
                        tok.lemma,
                        tok.upos,
                        tok.xpos,
                        "_",
                        str(tok.head),
                        tok.deprel,
                        "_",
                        misc,
                    ]
                )
            )
        blocks.append("\n".join(lines))
    Path(path).write_text("\n\n".join(blocks) + "\n", encoding="utf-8")
