"""Precision-gated multi-class classification over per-class word-set models.

Two gates are supported. In ``"p"`` mode a document goes to the class with
the largest partition precision ``p_k``; in ``"pl"`` mode the per-class
precisions are combined with Dempster's rule and the largest plausibility
(equal to the combined mass) is used. Either way the label is assigned only
when the winning score is strictly greater than ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .evidence import ClassFrame, TotalConflictError, combine_feasible
from .partition import ClassModel, KnownPartition, PartitionStats, count_corpus, lookup
from .stats import DegeneratePoolError, TwoSidedTest, two_sided_t

__all__ = [
    "MultiClassModel",
    "Gate",
    "ClassDetail",
    "Decision",
    "ClassEval",
    "EvalReport",
    "AuditRow",
    "ABSTAIN_REASONS",
    "classify",
    "evaluate",
    "compare_modes",
    "count_model",
    "audit_report",
]

ABSTAIN_REASONS = ("below-threshold", "total-conflict", "all-unseen", "tie")


@dataclass(frozen=True)
class MultiClassModel:
    frame: ClassFrame
    models: tuple[ClassModel, ...]
    provenance: dict = field(default_factory=dict, compare=True)
    class_provenance: tuple[dict, ...] = ()

    def __post_init__(self):
        models = tuple(self.models)
        object.__setattr__(self, "models", models)
        if tuple(m.label for m in models) != self.frame.labels:
            raise ValueError("class models do not line up with the frame labels")
        cp = tuple(self.class_provenance) or tuple({} for _ in models)
        if len(cp) != len(models):
            raise ValueError("class_provenance must have one entry per class")
        object.__setattr__(self, "class_provenance", cp)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.frame.labels

    def __getitem__(self, label: str) -> ClassModel:
        return self.models[self.frame.index(label)]


@dataclass(frozen=True)
class Gate:
    mode: str = "p"
    q: float = 0.0

    def __post_init__(self):
        if self.mode not in ("p", "pl"):
            raise ValueError(f"gate mode must be 'p' or 'pl', got {self.mode!r}")
        if not 0.0 <= self.q < 1.0:
            raise ValueError(f"gate threshold must lie in [0, 1), got {self.q}")


@dataclass(frozen=True)
class ClassDetail:
    label: str
    bits: str
    p: float | None
    mass: float | None = None

    @property
    def seen(self) -> bool:
        return self.p is not None


@dataclass(frozen=True)
class Decision:
    """Assigned label, or ``None`` with an abstention reason."""

    label: str | None
    reason: str | None
    score: float | None
    details: tuple[ClassDetail, ...]
    candidates: tuple[str, ...] = ()

    @property
    def assigned(self) -> bool:
        return self.label is not None

    def as_dict(self) -> dict:
        return {
            "verdict": "assigned" if self.assigned else "abstain",
            "label": self.label,
            "reason": self.reason,
            "score": self.score,
            "candidates": list(self.candidates),
            "classes": [
                {"label": d.label, "bits": d.bits, "p": d.p, "mass": d.mass} for d in self.details
            ],
        }


def classify(model: MultiClassModel, doc: str, gate: Gate = Gate()) -> Decision:
    """Gated decision for one normalized document."""
    ps: list[float | None] = []
    bits: list[str] = []
    for cm in model.models:
        res = lookup(cm, doc)
        bits.append(cm.bits(res.key))
        ps.append(res.p if isinstance(res, KnownPartition) else None)

    labels = model.labels
    if all(p is None for p in ps):
        details = tuple(ClassDetail(l, b, None) for l, b in zip(labels, bits))
        return Decision(None, "all-unseen", None, details)

    if gate.mode == "p":
        details = tuple(ClassDetail(l, b, p) for l, b, p in zip(labels, bits, ps))
        scores = {k: p for k, p in enumerate(ps) if p is not None}
    else:
        try:
            cm = combine_feasible(
                [(k, p) for k, p in enumerate(ps) if p is not None], n_classes=len(ps)
            )
        except TotalConflictError:
            details = tuple(ClassDetail(l, b, p) for l, b, p in zip(labels, bits, ps))
            return Decision(None, "total-conflict", None, details)
        details = tuple(
            ClassDetail(l, b, p, cm[k] if p is not None else None)
            for k, (l, b, p) in enumerate(zip(labels, bits, ps))
        )
        scores = {k: cm[k] for k, p in enumerate(ps) if p is not None}

    best = max(scores.values())
    if not best > gate.q:
        return Decision(None, "below-threshold", best, details)
    top = tuple(labels[k] for k, s in scores.items() if s == best)
    if len(top) > 1:
        return Decision(None, "tie", best, details, top)
    return Decision(top[0], None, best, details, top)


@dataclass(frozen=True)
class ClassEval:
    label: str
    in_class: int
    assigned: int
    correct: int
    abstained: int

    @property
    def precision(self) -> float | None:
        return self.correct / self.assigned if self.assigned else None

    @property
    def recall(self) -> float | None:
        return self.correct / self.in_class if self.in_class else None


@dataclass(frozen=True)
class EvalReport:
    gate: Gate
    classes: tuple[ClassEval, ...]
    assignments: tuple[str | None, ...]
    reasons: Mapping[str, int]

    def __getitem__(self, label: str) -> ClassEval:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def assigned_indices(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.assignments) if a is not None)


def evaluate(
    model: MultiClassModel, corpus: Iterable[tuple[str, str]], gate: Gate = Gate()
) -> EvalReport:
    """Per-class precision and recall of gated decisions.

    ``corpus`` yields ``(label, normalized_doc)``. Documents with labels outside
    the model's frame count only as potential false positives.
    """
    labels = model.labels
    in_class = dict.fromkeys(labels, 0)
    assigned = dict.fromkeys(labels, 0)
    correct = dict.fromkeys(labels, 0)
    abstained = dict.fromkeys(labels, 0)
    reasons = dict.fromkeys(ABSTAIN_REASONS, 0)
    assignments = []
    for true, doc in corpus:
        dec = classify(model, doc, gate)
        assignments.append(dec.label)
        if true in in_class:
            in_class[true] += 1
        if dec.label is None:
            reasons[dec.reason] += 1
            if true in abstained:
                abstained[true] += 1
            continue
        assigned[dec.label] += 1
        if dec.label == true:
            correct[true] += 1
    classes = tuple(
        ClassEval(l, in_class[l], assigned[l], correct[l], abstained[l]) for l in labels
    )
    return EvalReport(gate, classes, tuple(assignments), reasons)


def compare_modes(model: MultiClassModel, corpus: Sequence[tuple[str, str]], q: float = 0.0) -> dict:
    """Evaluate both gates at the same ``q`` and list where their assignments differ."""
    p_rep = evaluate(model, corpus, Gate("p", q))
    pl_rep = evaluate(model, corpus, Gate("pl", q))
    disagreements = [
        (i, a, b)
        for i, (a, b) in enumerate(zip(p_rep.assignments, pl_rep.assignments))
        if a is not None and b is not None and a != b
    ]
    return {
        "p": p_rep,
        "pl": pl_rep,
        "same_assigned_set": p_rep.assigned_indices == pl_rep.assigned_indices,
        "label_disagreements": disagreements,
    }


def count_model(
    model: MultiClassModel, corpus: Iterable[tuple[str, str]]
) -> dict[str, dict[int, PartitionStats]]:
    """Partition count tables for every class's word set over ``(label, doc)`` pairs."""
    corpus = list(corpus)
    return {
        cm.label: count_corpus(cm.word_set, ((doc, lab == cm.label) for lab, doc in corpus))
        for cm in model.models
    }


@dataclass(frozen=True)
class AuditRow:
    label: str
    bits: str
    train: PartitionStats | None
    test: PartitionStats | None
    result: TwoSidedTest | None
    note: str = ""

    @property
    def comparable(self) -> bool:
        return self.result is not None

    @property
    def reject(self) -> bool:
        return self.result is not None and self.result.reject


def audit_report(
    model: MultiClassModel,
    train_counts: Mapping[str, Mapping[int, PartitionStats]] | None,
    test_counts: Mapping[str, Mapping[int, PartitionStats]],
    alpha: float = 0.05,
    convention: str = "exact",
) -> list[AuditRow]:
    """Two-sided training-vs-testing precision test for every (class, partition).

    ``train_counts`` defaults to the model's own tables. Partitions missing
    from either side, or whose samples are too small or pool to 0 or 1, are
    listed as not comparable.
    """
    if train_counts is None:
        train_counts = {cm.label: cm.table for cm in model.models}
    rows = []
    for cm in model.models:
        train = train_counts.get(cm.label, {})
        test = test_counts.get(cm.label, {})
        for key in sorted(set(train) | set(test)):
            a, b = train.get(key), test.get(key)
            bits = cm.bits(key)
            if a is None or b is None:
                side = "training" if a is None else "testing"
                rows.append(AuditRow(cm.label, bits, a, b, None, f"not comparable: absent in {side}"))
                continue
            try:
                res = two_sided_t(a.in_count, a.out_count, b.in_count, b.out_count, alpha, convention)
            except DegeneratePoolError:
                rows.append(AuditRow(cm.label, bits, a, b, None, "not comparable: pooled precision is 0 or 1"))
                continue
            except ValueError as exc:
                rows.append(AuditRow(cm.label, bits, a, b, None, f"not comparable: {exc}"))
                continue
            rows.append(AuditRow(cm.label, bits, a, b, res))
    return rows
