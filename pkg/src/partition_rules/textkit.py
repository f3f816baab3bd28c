"""Text normalization and substring detection.

Documents are reduced to the alphabet ``a-z`` plus single spaces before any
pattern is searched for. Matching is raw substring containment, so ``"bright"``
matches ``"brightly"`` and ``"arrel"`` matches ``"barrels"``.

Edge convention: a document is treated as bounded by whitespace on both sides.
:func:`normalize` itself only applies the lowercase / replace / collapse recipe;
:func:`bounded` adds the single bounding space where one is missing and every
containment test goes through it. Patterns anchored on a space (``" cts"``,
``" net "``) can therefore match at the first or last word of a document.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

__all__ = [
    "NORMALIZATION_ID",
    "MAX_PATTERN_LEN",
    "normalize",
    "bounded",
    "contains",
    "contains_all",
    "validate_pattern",
    "is_normalized",
    "normalize_all",
]

#: Identifier of the normalization + edge convention, written into model files.
NORMALIZATION_ID = "lower-az-collapse/bounded-v1"

MAX_PATTERN_LEN = 15

_NON_LETTERS = re.compile(r"[^a-z]+")
_UPPER = str.maketrans("ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz")
_NORMALIZED = re.compile(r"^[a-z ]*$")


def normalize(raw: str | bytes) -> str:
    """Lowercase ASCII letters and collapse every run of non-letters to one space.

    Bytes are decoded as latin-1 so that every byte maps to exactly one
    character. Non-ASCII letters are not case folded; they become whitespace.

    >>> normalize("Net: 3.5 cts!!")
    'net cts '
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = bytes(raw).decode("latin-1")
    return _NON_LETTERS.sub(" ", raw.translate(_UPPER))


def is_normalized(doc: str) -> bool:
    return _NORMALIZED.match(doc) is not None and "  " not in doc


def bounded(doc: str) -> str:
    """Return ``doc`` with exactly one bounding space on each side.

    The empty document stays empty; it contains no pattern.
    """
    if not doc:
        return doc
    if doc[0] != " ":
        doc = " " + doc
    if doc[-1] != " ":
        doc = doc + " "
    return doc


def validate_pattern(pattern: str, max_len: int = MAX_PATTERN_LEN) -> str:
    """Check a key sub-string against the pattern alphabet and length limits."""
    if not isinstance(pattern, str):
        raise TypeError(f"pattern must be str, got {type(pattern).__name__}")
    if not 1 <= len(pattern) <= max_len:
        raise ValueError(
            f"pattern {pattern!r} has length {len(pattern)}; expected 1..{max_len}"
        )
    if _NORMALIZED.match(pattern) is None:
        raise ValueError(f"pattern {pattern!r} contains characters outside a-z and space")
    return pattern


def contains(doc: str, pattern: str) -> bool:
    """True iff ``pattern`` occurs in the bounded form of normalized ``doc``."""
    return pattern in bounded(doc)


def contains_all(doc: str, patterns: Sequence[str]) -> tuple[bool, ...]:
    """Presence flag for each pattern, bounding ``doc`` only once."""
    b = bounded(doc)
    return tuple(p in b for p in patterns)


def normalize_all(raw_docs: Iterable[str | bytes]) -> list[str]:
    return [normalize(d) for d in raw_docs]
