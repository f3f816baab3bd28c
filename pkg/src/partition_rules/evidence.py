"""Dempster-Shafer combination of per-class singleton evidence.

Each class k contributes a mass function placing ``p_k`` on ``{c_k}`` and
``1 - p_k`` on its complement. Combining them with Dempster's rule leaves mass
only on singletons, with

    m(C_k) = p_k * prod_{j != k} (1 - p_j) / sum_i p_i * prod_{j != i} (1 - p_j)

Classes with no evidence (unseen partitions) are vacuous: they drop out of all
products and receive zero mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = [
    "ClassFrame",
    "CombinedMass",
    "TotalConflictError",
    "BRUTEFORCE_MAX_CLASSES",
    "combine_feasible",
    "combine_bruteforce",
    "belief_plausibility",
]

BRUTEFORCE_MAX_CLASSES = 12


class TotalConflictError(ValueError):
    """Every singleton numerator vanishes; Dempster's rule is undefined."""


@dataclass(frozen=True)
class ClassFrame:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("a class frame needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in frame {labels!r}")

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class CombinedMass:
    """Combined singleton masses ``m(C_k)``; vacuous classes carry 0."""

    masses: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.masses)

    def __getitem__(self, k: int) -> float:
        return self.masses[k]

    def bel(self, k: int) -> float:
        return belief_plausibility(self, k)[0]

    def pl(self, k: int) -> float:
        return belief_plausibility(self, k)[1]


def _evidence_vector(
    evidence: Iterable[tuple[int, float]], n_classes: int | None
) -> list[float | None]:
    pairs = list(evidence)
    if n_classes is None:
        if not pairs:
            raise ValueError("no evidence supplied and no frame size given")
        n_classes = max(k for k, _ in pairs) + 1
    ps: list[float | None] = [None] * n_classes
    for k, p in pairs:
        if not 0 <= k < n_classes:
            raise IndexError(f"class index {k} outside frame of size {n_classes}")
        if ps[k] is not None:
            raise ValueError(f"class index {k} given more than once")
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
        ps[k] = p
    return ps


def combine_feasible(
    evidence: Iterable[tuple[int, float]], n_classes: int | None = None
) -> CombinedMass:
    """Closed-form Dempster combination.

    ``evidence`` holds ``(class_index, p)`` pairs. Indices missing from it
    (up to ``n_classes``) are vacuous. When every ``p < 1`` the common factor
    ``prod_j (1 - p_j)`` cancels and the masses are proportional to the odds
    ``p_k / (1 - p_k)``; the normalization is done on log-odds.
    """
    ps = _evidence_vector(evidence, n_classes)
    masses = [0.0] * len(ps)
    live = [(k, p) for k, p in enumerate(ps) if p is not None]

    certain = [k for k, p in live if p == 1.0]
    if len(certain) > 1:
        raise TotalConflictError(f"classes {certain} all carry certain evidence")
    if len(certain) == 1:
        masses[certain[0]] = 1.0
        return CombinedMass(tuple(masses))

    support = [(k, math.log(p) - math.log1p(-p)) for k, p in live if p > 0.0]
    if not support:
        raise TotalConflictError("no class carries positive evidence")
    top = max(lo for _, lo in support)
    weights = [(k, math.exp(lo - top)) for k, lo in support]
    total = math.fsum(w for _, w in weights)
    for k, w in weights:
        masses[k] = w / total
    return CombinedMass(tuple(masses))


def combine_bruteforce(
    evidence: Iterable[tuple[int, float]],
    n_classes: int | None = None,
    max_classes: int = BRUTEFORCE_MAX_CLASSES,
) -> CombinedMass:
    """Dempster's rule by enumerating every focal-element combination.

    Each class picks ``H_k`` from ``{C_k, complement of C_k}``; the product of
    the chosen masses is credited to the intersection of the chosen sets.
    Products are accumulated exactly in integer arithmetic, then the mass of
    ``{c_k}`` is its credited total over one minus the empty-set total.
    Vacuous classes are removed from the frame before enumerating.
    """
    ps = _evidence_vector(evidence, n_classes)
    n = len(ps)
    if n > max_classes:
        raise ValueError(f"brute-force combination limited to {max_classes} classes, got {n}")
    # vacuous classes leave the frame entirely, matching combine_feasible
    live = [k for k, p in enumerate(ps) if p is not None]
    if not live:
        raise TotalConflictError("no class carries evidence")
    full = (1 << len(live)) - 1
    # every float is num / 2**e, so all products share one denominator and
    # can be accumulated exactly as integers
    sources = []
    for pos, k in enumerate(live):
        num, den = ps[k].as_integer_ratio()
        sources.append((pos, num, den - num))

    # (focal set as bitmask over classes, scaled mass)
    combos: list[tuple[int, int]] = [(full, 1)]
    for k, on, off in sources:
        singleton = 1 << k
        nxt = []
        for focal, mass in combos:
            if on:
                nxt.append((focal & singleton, mass * on))
            if off:
                nxt.append((focal & (full ^ singleton), mass * off))
        combos = nxt

    credited = [0] * len(live)
    conflict = 0
    total = 0
    for focal, mass in combos:
        total += mass
        if focal == 0:
            conflict += mass
        elif focal & (focal - 1) == 0:
            credited[focal.bit_length() - 1] += mass
        else:
            raise AssertionError("non-singleton focal element with positive mass")

    norm = total - conflict
    if norm == 0:
        raise TotalConflictError("all combined mass falls on the empty set")
    masses = [0.0] * n
    for pos, k in enumerate(live):
        masses[k] = float(Fraction(credited[pos], norm))
    return CombinedMass(tuple(masses))


def belief_plausibility(cm: CombinedMass, k: int) -> tuple[float, float]:
    """Belief and plausibility of ``{c_k}``.

    bel sums masses of subsets of ``{c_k}``; pl is one minus the belief in the
    complement. With all mass on singletons the two coincide.
    """
    if not 0 <= k < len(cm):
        raise IndexError(k)
    bel = cm.masses[k]
    pl = 1.0 - math.fsum(m for j, m in enumerate(cm.masses) if j != k)
    return bel, pl
