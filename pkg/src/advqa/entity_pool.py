"""Typed pool of substitute entities harvested from training annotations.

Date and number types are never harvested; they are synthesized on demand so
fake answers of those types stay unbounded.
"""

from __future__ import annotations

import calendar
import random
from dataclasses import dataclass
from pathlib import Path

from .annotation import AnnotatedQuestion
from .errors import EmptyPoolError, SamplingError

SYNTHESIZED_LABELS = frozenset({"DATE", "CARDINAL", "QUANTITY", "ORDINAL"})
FALLBACK_LABEL = "MISC"

_MONTHS = tuple(calendar.month_name[1:])
_ORDINAL_WORDS = (
    "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth",
    "ninth", "tenth", "eleventh", "twelfth", "thirteenth", "fourteenth",
    "fifteenth", "sixteenth", "seventeenth", "eighteenth", "nineteenth",
    "twentieth",
)
_MAX_SYNTH_ATTEMPTS = 100


@dataclass(frozen=True)
class EntityPool:
    """Deduplicated entity surfaces grouped by NER label, in harvest order."""

    by_type: dict[str, tuple[str, ...]]
    source_count: int

    def labels(self) -> tuple[str, ...]:
        return tuple(self.by_type)

    def all_surfaces(self) -> tuple[str, ...]:
        seen = []
        for surfaces in self.by_type.values():
            for s in surfaces:
                if s not in seen:
                    seen.append(s)
        return tuple(seen)


def build_pool(
    annotations: dict[str, AnnotatedQuestion],
    contexts: dict[str, AnnotatedQuestion] | None = None,
) -> EntityPool:
    """Harvest (label, surface) pairs from question (and optional context) annotations.

    DATE/CARDINAL/QUANTITY/ORDINAL entities are skipped: those are synthesized
    at sampling time. First occurrence wins, so ordering is deterministic.
    """
    sources = [annotations]
    if contexts:
        sources.append(contexts)
    if not any(sources):
        raise EmptyPoolError("no annotated records to build a pool from")

    by_type: dict[str, list[str]] = {}
    count = 0
    for mapping in sources:
        for q in mapping.values():
            count += 1
            for ent in q.entities:
                if ent.label in SYNTHESIZED_LABELS:
                    continue
                bucket = by_type.setdefault(ent.label, [])
                if ent.surface not in bucket:
                    bucket.append(ent.surface)
    return EntityPool(
        by_type={label: tuple(v) for label, v in by_type.items()},
        source_count=count,
    )


def synthesize(label: str, rng: random.Random) -> str:
    """Randomly generate a date/number surface for a synthesized label."""
    if label == "DATE":
        month = _MONTHS[rng.randrange(12)]
        day = rng.randint(1, 28)
        year = rng.randint(1300, 2020)
        return f"{month} {day}, {year}"
    if label in ("CARDINAL", "QUANTITY"):
        return str(rng.randint(2, 999999))
    if label == "ORDINAL":
        idx = rng.randrange(99)
        if idx < len(_ORDINAL_WORDS):
            return _ORDINAL_WORDS[idx]
        return f"{idx + 1}th"
    raise SamplingError(f"label {label!r} is not synthesizable")


def sample(
    pool: EntityPool,
    label: str,
    rng: random.Random,
    exclude: set[str] = frozenset(),
    info: dict | None = None,
) -> str:
    """Draw a substitute surface for `label`, never returning an excluded string.

    Synthesized labels route to `synthesize`. An exhausted label falls back to
    the union of all labels (noted in `info` when provided); a fully exhausted
    pool raises SamplingError.
    """
    if label in SYNTHESIZED_LABELS:
        for _ in range(_MAX_SYNTH_ATTEMPTS):
            surface = synthesize(label, rng)
            if surface not in exclude:
                return surface
        raise SamplingError(f"could not synthesize a non-excluded {label} value")

    eligible = [s for s in pool.by_type.get(label, ()) if s not in exclude]
    if not eligible:
        eligible = [s for s in pool.all_surfaces() if s not in exclude]
        if not eligible:
            raise SamplingError(f"pool exhausted for label {label!r}")
        if info is not None:
            info["fallback"] = True
    return eligible[rng.randrange(len(eligible))]


def write_pool(pool: EntityPool, path) -> None:
    """Serialize as two-column TSV (label, surface), preserving order."""
    lines = [f"# source_count = {pool.source_count}"]
    for label, surfaces in pool.by_type.items():
        for surface in surfaces:
            lines.append(f"{label}\t{surface}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_pool(path) -> EntityPool:
    """Load a TSV pool; reproduces the ordering written by write_pool."""
    by_type: dict[str, list[str]] = {}
    source_count = 0
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            _, _, value = line.partition("=")
            source_count = int(value.strip())
            continue
        label, _, surface = line.partition("\t")
        by_type.setdefault(label, []).append(surface)
    return EntityPool(
        by_type={label: tuple(v) for label, v in by_type.items()},
        source_count=source_count,
    )
