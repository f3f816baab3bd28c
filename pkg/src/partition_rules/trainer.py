"""Stochastic hill climbing over word sets.

The objective counts documents whose partition has at least one pattern
present: ``t`` in-class hits, ``f`` out-of-class hits, ``d`` in-class
documents. ``P = t/(t+f)``, ``R = t/d`` and ``F = 2PR/(P+R)``, which reduces to
``2t/(t+f+d)`` and is compared exactly on integers.
"""

from __future__ import annotations

import bisect
import random
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Sequence

from .partition import WordSet
from .textkit import MAX_PATTERN_LEN, bounded

__all__ = [
    "EmptyCorpusError",
    "FitnessReport",
    "SearchConfig",
    "SearchResult",
    "TraceEntry",
    "fitness",
    "prefer",
    "search",
]

DEFAULT_BUDGET = 50_000


class EmptyCorpusError(ValueError):
    pass


@dataclass(frozen=True)
class FitnessReport:
    t_count: int
    f_count: int
    d: int

    @property
    def precision(self) -> float:
        hits = self.t_count + self.f_count
        return self.t_count / hits if hits else 0.0

    @property
    def recall(self) -> float:
        return self.t_count / self.d if self.d else 0.0

    @property
    def F(self) -> float:
        denom = self.t_count + self.f_count + self.d
        return 2 * self.t_count / denom if denom else 0.0

    # aliases matching the usual P/R notation
    P = precision
    R = recall

    def as_dict(self) -> dict:
        return {
            "t": self.t_count,
            "f": self.f_count,
            "d": self.d,
            "P": self.precision,
            "R": self.recall,
            "F": self.F,
        }


def _cmp_fitness(a: FitnessReport, b: FitnessReport) -> int:
    """Sign of F(a) - F(b), exact."""
    lhs = 2 * a.t_count * (b.t_count + b.f_count + b.d)
    rhs = 2 * b.t_count * (a.t_count + a.f_count + a.d)
    return (lhs > rhs) - (lhs < rhs)


def fitness(word_set: WordSet | Sequence[str], in_docs: Sequence[str], out_docs: Sequence[str]) -> FitnessReport:
    patterns = tuple(word_set)
    t = sum(1 for doc in in_docs if _hit(bounded(doc), patterns))
    f = sum(1 for doc in out_docs if _hit(bounded(doc), patterns))
    return FitnessReport(t, f, len(in_docs))


def _hit(doc: str, patterns: Sequence[str]) -> bool:
    return any(p in doc for p in patterns)


def prefer(a: tuple[WordSet, FitnessReport], b: tuple[WordSet, FitnessReport]):
    """Pick the better of two scored word sets; ``a`` (the incumbent) wins full ties.

    Higher F first, then fewer patterns, then longer mean pattern length.
    """
    (ws_a, fit_a), (ws_b, fit_b) = a, b
    c = _cmp_fitness(fit_a, fit_b)
    if c:
        return a if c > 0 else b
    if len(ws_a) != len(ws_b):
        return a if len(ws_a) < len(ws_b) else b
    # compare mean lengths exactly: sum_a/len_a vs sum_b/len_b with len_a == len_b
    sum_a = sum(map(len, ws_a))
    sum_b = sum(map(len, ws_b))
    if sum_b > sum_a:
        return b
    return a


@dataclass(frozen=True)
class SearchConfig:
    max_patterns: int = 2
    max_pattern_len: int = MAX_PATTERN_LEN
    iteration_budget: int = DEFAULT_BUDGET
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_patterns < 1:
            raise ValueError("max_patterns must be at least 1")
        if not 1 <= self.max_pattern_len <= MAX_PATTERN_LEN:
            raise ValueError(f"max_pattern_len must lie in 1..{MAX_PATTERN_LEN}")
        if self.iteration_budget < 0:
            raise ValueError("iteration_budget must be non-negative")


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    move: str
    patterns: tuple[str, ...]
    F: float | None
    accepted: bool

    def as_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "move": self.move,
            "patterns": list(self.patterns),
            "F": self.F,
            "accepted": self.accepted,
        }


@dataclass
class SearchResult:
    label: str
    word_set: WordSet
    fitness: FitnessReport
    config: SearchConfig
    trace: list[TraceEntry] = field(default_factory=list, repr=False)


class _Corpus:
    """Documents joined with a separator outside the pattern alphabet.

    A pattern's hit set is found with repeated ``str.find``, jumping to the
    next document after each hit, and kept as an int bitset.
    """

    SEP = "\n"

    def __init__(self, docs: Sequence[str]):
        self.docs = [bounded(d) for d in docs]
        self.starts = []
        pos = 0
        for d in self.docs:
            self.starts.append(pos)
            pos += len(d) + 1
        self.text = self.SEP.join(self.docs)

    def mask(self, pattern: str) -> int:
        text, starts = self.text, self.starts
        bits = 0
        i = text.find(pattern)
        while i >= 0:
            idx = bisect.bisect_right(starts, i) - 1
            bits |= 1 << idx
            if idx + 1 >= len(starts):
                break
            i = text.find(pattern, starts[idx + 1])
        return bits


class _Scorer:
    def __init__(self, in_docs, out_docs, cache_size: int = 8192):
        self.ins = _Corpus(in_docs)
        self.outs = _Corpus(out_docs)
        self.d = len(in_docs)
        self._cache: OrderedDict[str, tuple[int, int]] = OrderedDict()
        self._cache_size = cache_size

    def _masks(self, pattern: str) -> tuple[int, int]:
        hit = self._cache.get(pattern)
        if hit is not None:
            self._cache.move_to_end(pattern)
            return hit
        hit = (self.ins.mask(pattern), self.outs.mask(pattern))
        self._cache[pattern] = hit
        if len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)
        return hit

    def __call__(self, patterns: Sequence[str]) -> FitnessReport:
        in_bits = out_bits = 0
        for p in patterns:
            a, b = self._masks(p)
            in_bits |= a
            out_bits |= b
        return FitnessReport(in_bits.bit_count(), out_bits.bit_count(), self.d)


def search(
    class_label: str,
    in_docs: Sequence[str],
    out_docs: Sequence[str],
    config: SearchConfig | None = None,
) -> SearchResult:
    """Hill-climb a word set for one class.

    Starts from a random word set of uniform size in ``1..max_patterns``.
    Each iteration adds, removes or changes one pattern (uniformly among the
    moves legal at the current size) and keeps the candidate when
    :func:`prefer` picks it over the incumbent. New patterns are uniform
    random substrings, of uniform length ``1..max_pattern_len``, of a
    document drawn from the in-class or out-of-class pool with equal chance.
    """
    config = config or SearchConfig()
    if not in_docs:
        raise EmptyCorpusError(f"class {class_label!r} has no in-class documents")
    rng = random.Random(config.rng_seed)
    pools = [
        [d for d in (bounded(x) for x in in_docs) if d],
        [d for d in (bounded(x) for x in out_docs) if d],
    ]
    pools = [p for p in pools if p]
    if not pools:
        raise EmptyCorpusError(f"class {class_label!r}: every document is empty")
    score = _Scorer(in_docs, out_docs)

    def draw() -> str:
        pool = pools[rng.randrange(len(pools))]
        doc = pool[rng.randrange(len(pool))]
        n = min(rng.randint(1, config.max_pattern_len), len(doc))
        start = rng.randrange(len(doc) - n + 1)
        return doc[start : start + n]

    size = rng.randint(1, config.max_patterns)
    patterns: list[str] = []
    # a corpus may not hold enough distinct substrings for the drawn size
    for _ in range(100 * size):
        if len(patterns) == size:
            break
        p = draw()
        if p not in patterns:
            patterns.append(p)

    def make(ps) -> WordSet:
        return WordSet(tuple(ps), config.max_patterns, config.max_pattern_len)

    best = (make(patterns), score(patterns))
    trace: list[TraceEntry] = []

    for it in range(1, config.iteration_budget + 1):
        cur = list(best[0].patterns)
        moves = ["change"]
        if len(cur) < config.max_patterns:
            moves.append("add")
        if len(cur) > 1:
            moves.append("remove")
        move = moves[rng.randrange(len(moves))]

        if move == "add":
            new = draw()
            cand = None if new in cur else cur + [new]
        elif move == "remove":
            del cur[rng.randrange(len(cur))]
            cand = cur
        else:
            i = rng.randrange(len(cur))
            new = draw()
            cand = None if new in cur else cur[:i] + [new] + cur[i + 1 :]

        if cand is None:
            trace.append(TraceEntry(it, move, tuple(cur), None, False))
            continue
        challenger = (make(cand), score(cand))
        accepted = prefer(best, challenger) is challenger
        trace.append(TraceEntry(it, move, tuple(cand), challenger[1].F, accepted))
        if accepted:
            best = challenger

    return SearchResult(class_label, best[0], best[1], config, trace)
