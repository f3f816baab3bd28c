"""Word sets, induced partitions and per-partition precision counts.

A document *induces* a partition of a word set: the patterns present and the
patterns absent. Partitions are keyed by an integer whose most-significant bit
corresponds to the first pattern, so ``format_bits(0b10, 2) == "10"`` means the
first pattern is present and the second absent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .textkit import MAX_PATTERN_LEN, bounded, validate_pattern

__all__ = [
    "WordSet",
    "PartitionStats",
    "ClassModel",
    "KnownPartition",
    "UnseenPartition",
    "UndefinedPartitionError",
    "induce",
    "count_corpus",
    "merge_counts",
    "precision",
    "lookup",
    "format_bits",
    "parse_bits",
]

DEFAULT_MAX_PATTERNS = 2


class UndefinedPartitionError(ValueError):
    """Precision requested for a partition that no document induced."""


@dataclass(frozen=True)
class WordSet:
    """Ordered, duplicate-free tuple of key sub-strings.

    Order fixes the bit positions of induced partitions.
    """

    patterns: tuple[str, ...]
    max_patterns: int = field(default=DEFAULT_MAX_PATTERNS, compare=False, repr=False)
    max_pattern_len: int = field(default=MAX_PATTERN_LEN, compare=False, repr=False)

    def __post_init__(self):
        patterns = tuple(self.patterns)
        object.__setattr__(self, "patterns", patterns)
        if not 1 <= len(patterns) <= self.max_patterns:
            raise ValueError(
                f"word set needs 1..{self.max_patterns} patterns, got {len(patterns)}"
            )
        if len(set(patterns)) != len(patterns):
            raise ValueError(f"duplicate patterns in word set {patterns!r}")
        for p in patterns:
            validate_pattern(p, self.max_pattern_len)

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    @property
    def n_partitions(self) -> int:
        return 1 << len(self.patterns)

    @property
    def mean_length(self) -> float:
        return sum(map(len, self.patterns)) / len(self.patterns)


@dataclass(frozen=True)
class PartitionStats:
    """In-class and out-of-class document counts for one partition."""

    in_count: int = 0
    out_count: int = 0

    def __post_init__(self):
        if self.in_count < 0 or self.out_count < 0:
            raise ValueError("partition counts must be non-negative")

    @property
    def total(self) -> int:
        return self.in_count + self.out_count

    def precision(self) -> float:
        return precision(self)

    def __add__(self, other: "PartitionStats") -> "PartitionStats":
        return PartitionStats(self.in_count + other.in_count, self.out_count + other.out_count)


def format_bits(key: int, width: int) -> str:
    return format(key, f"0{width}b")


def parse_bits(bits: str) -> int:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a partition bit string: {bits!r}")
    return int(bits, 2)


def induce(word_set: WordSet, doc: str) -> int:
    """Partition key induced by a normalized document."""
    b = bounded(doc)
    key = 0
    for p in word_set.patterns:
        key = (key << 1) | (p in b)
    return key


def count_corpus(
    word_set: WordSet, docs: Iterable[tuple[str, bool]]
) -> dict[int, PartitionStats]:
    """Count in-class and out-of-class documents per induced partition.

    Partitions induced by no document are absent from the result. Keys are
    returned in ascending order.
    """
    ins: Counter[int] = Counter()
    outs: Counter[int] = Counter()
    for doc, in_class in docs:
        key = induce(word_set, doc)
        if in_class:
            ins[key] += 1
        else:
            outs[key] += 1
    return {k: PartitionStats(ins[k], outs[k]) for k in sorted(ins.keys() | outs.keys())}


def merge_counts(*tables: Mapping[int, PartitionStats]) -> dict[int, PartitionStats]:
    merged: dict[int, PartitionStats] = {}
    for table in tables:
        for k, s in table.items():
            merged[k] = merged[k] + s if k in merged else s
    return dict(sorted(merged.items()))


def precision(stats: PartitionStats) -> float:
    """Fraction of documents inducing the partition that are in class."""
    n = stats.in_count + stats.out_count
    if n == 0:
        raise UndefinedPartitionError("partition was induced by no training document")
    return stats.in_count / n


@dataclass(frozen=True)
class KnownPartition:
    key: int
    stats: PartitionStats

    @property
    def p(self) -> float:
        return precision(self.stats)


@dataclass(frozen=True)
class UnseenPartition:
    key: int


@dataclass(frozen=True)
class ClassModel:
    """One class label, its word set and the training count table."""

    label: str
    word_set: WordSet
    table: Mapping[int, PartitionStats]

    def __post_init__(self):
        table = dict(sorted(self.table.items()))
        for k, s in table.items():
            if not 0 <= k < self.word_set.n_partitions:
                raise ValueError(
                    f"partition {k} out of range for a {len(self.word_set)}-pattern word set"
                )
            if s.total < 1:
                raise ValueError(f"partition {format_bits(k, len(self.word_set))} has no documents")
        object.__setattr__(self, "table", table)

    @classmethod
    def train(cls, label: str, word_set: WordSet, docs: Iterable[tuple[str, bool]]) -> "ClassModel":
        return cls(label, word_set, count_corpus(word_set, docs))

    def induce(self, doc: str) -> int:
        return induce(self.word_set, doc)

    def bits(self, key: int) -> str:
        return format_bits(key, len(self.word_set))


def lookup(model: ClassModel, doc: str) -> KnownPartition | UnseenPartition:
    """Resolve the partition a document induces against the trained table."""
    key = induce(model.word_set, doc)
    stats = model.table.get(key)
    if stats is None:
        return UnseenPartition(key)
    return KnownPartition(key, stats)
