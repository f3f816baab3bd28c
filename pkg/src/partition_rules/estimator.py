"""scikit-learn compatible estimators.

:class:`GatedRuleClassifier` learns one word set per class by hill climbing
(or takes them as given), counts partitions on the training documents and
predicts with a precision gate. Abstentions are reported as
``abstain_label``. :class:`TextNormalizer` exposes the normalization step for
pipelines.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict
from datetime import datetime, timezone
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classifier import Decision, Gate, MultiClassModel, classify
from .evidence import ClassFrame
from .partition import ClassModel, WordSet, count_corpus
from .textkit import NORMALIZATION_ID, normalize
from .trainer import SearchConfig, SearchResult, fitness, search
from .validation import check_documents, check_labels

__all__ = ["GatedRuleClassifier", "TextNormalizer", "fit_model", "corpus_digest"]


def corpus_digest(labels: Sequence[str], docs: Sequence[str]) -> str:
    h = hashlib.sha256()
    for label, doc in zip(labels, docs):
        h.update(label.encode("utf-8"))
        h.update(b"\t")
        h.update(doc.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def fit_model(
    labels: Sequence[str],
    docs: Sequence[str],
    classes: Sequence[str],
    config: SearchConfig,
    word_sets: Mapping[str, Sequence[str]] | None = None,
) -> tuple[MultiClassModel, dict[str, SearchResult | None]]:
    """Train one word set and count table per class over normalized ``docs``.

    Class ``i`` is searched with seed ``config.rng_seed + i``. Classes listed in
    ``word_sets`` skip the search and use the given patterns.
    """
    word_sets = word_sets or {}
    models, provs, results = [], [], {}
    for i, label in enumerate(classes):
        in_docs = [d for l, d in zip(labels, docs) if l == label]
        out_docs = [d for l, d in zip(labels, docs) if l != label]
        if label in word_sets:
            patterns = tuple(word_sets[label])
            ws = WordSet(patterns, max(config.max_patterns, len(patterns)), config.max_pattern_len)
            fit = fitness(ws, in_docs, out_docs)
            results[label] = None
            prov = {"source": "imposed", "fitness": fit.as_dict()}
        else:
            cfg = SearchConfig(
                config.max_patterns,
                config.max_pattern_len,
                config.iteration_budget,
                config.rng_seed + i,
            )
            res = search(label, in_docs, out_docs, cfg)
            ws, fit = res.word_set, res.fitness
            results[label] = res
            prov = {"source": "search", "config": asdict(cfg), "fitness": fit.as_dict()}
        table = count_corpus(ws, ((d, l == label) for l, d in zip(labels, docs)))
        models.append(ClassModel(label, ws, table))
        provs.append(prov)
    model = MultiClassModel(
        ClassFrame(tuple(classes)),
        tuple(models),
        {
            "corpus_sha256": corpus_digest(labels, docs),
            "n_documents": len(docs),
            "normalization": NORMALIZATION_ID,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        },
        tuple(provs),
    )
    return model, results


class TextNormalizer(TransformerMixin, BaseEstimator):
    """Stateless transformer applying the lowercase a-z normalization."""

    def fit(self, X, y=None):
        check_documents(X)
        return self

    def transform(self, X):
        return [normalize(d) for d in check_documents(X)]


class GatedRuleClassifier(ClassifierMixin, BaseEstimator):
    """Word-set rule classifier with a precision gate.

    Parameters
    ----------
    gate : {"p", "pl"}, default="p"
        Score used for the decision: partition precision, or plausibility
        from Dempster combination across classes.
    threshold : float, default=0.0
        A label is assigned only when the winning score is strictly greater.
    max_patterns, max_pattern_len, n_iter : int
        Word-set search limits and iteration budget per class.
    random_state : int, default=0
        Seed of the first class's search; class ``i`` uses ``random_state + i``.
    word_sets : dict, optional
        ``{label: [pattern, ...]}`` imposed instead of searched.
    classes : list of str, optional
        Classes to model. Documents of other labels are used as negatives.
        Defaults to every label in ``y``.
    abstain_label : object, default=None
        Value returned by :meth:`predict` for abstentions.

    Attributes
    ----------
    classes_ : ndarray of str
    model_ : MultiClassModel
    search_results_ : dict
        Per-class :class:`~partition_rules.trainer.SearchResult` (``None`` for
        imposed word sets).
    """

    def __init__(
        self,
        gate="p",
        threshold=0.0,
        max_patterns=2,
        max_pattern_len=15,
        n_iter=50_000,
        random_state=0,
        word_sets=None,
        classes=None,
        abstain_label=None,
    ):
        self.gate = gate
        self.threshold = threshold
        self.max_patterns = max_patterns
        self.max_pattern_len = max_pattern_len
        self.n_iter = n_iter
        self.random_state = random_state
        self.word_sets = word_sets
        self.classes = classes
        self.abstain_label = abstain_label

    def _gate(self) -> Gate:
        return Gate(self.gate, float(self.threshold))

    def fit(self, X, y):
        docs = [normalize(d) for d in check_documents(X)]
        labels = check_labels(y, len(docs))
        if not docs:
            raise ValueError("cannot fit on an empty corpus")
        self._gate()
        present = sorted(set(labels))
        if self.classes is None:
            classes = present
        else:
            classes = [str(c) for c in self.classes]
            missing = [c for c in classes if c not in present]
            if missing:
                raise ValueError(f"classes not present in y: {missing}")
        config = SearchConfig(
            self.max_patterns, self.max_pattern_len, self.n_iter, int(self.random_state or 0)
        )
        self.model_, self.search_results_ = fit_model(labels, docs, classes, config, self.word_sets)
        self.classes_ = np.array(classes, dtype=object)
        return self

    @classmethod
    def from_model(cls, model: MultiClassModel, **params) -> "GatedRuleClassifier":
        """Wrap an already trained (e.g. loaded) model."""
        est = cls(**params)
        est.model_ = model
        est.search_results_ = {}
        est.classes_ = np.array(model.labels, dtype=object)
        return est

    def decide(self, X) -> list[Decision]:
        check_is_fitted(self, "model_")
        gate = self._gate()
        return [classify(self.model_, normalize(d), gate) for d in check_documents(X)]

    def predict(self, X):
        out = np.empty(len(check_documents(X)), dtype=object)
        for i, dec in enumerate(self.decide(X)):
            out[i] = dec.label if dec.assigned else self.abstain_label
        return out

    def decision_function(self, X):
        """Per-class gate scores (``p_k`` or combined mass); NaN where undefined."""
        decisions = self.decide(X)
        scores = np.full((len(decisions), len(self.classes_)), np.nan)
        for i, dec in enumerate(decisions):
            for k, d in enumerate(dec.details):
                v = d.p if self.gate == "p" else d.mass
                if v is not None:
                    scores[i, k] = v
        return scores

    def score(self, X, y, sample_weight=None):
        """Accuracy with abstentions counted as errors."""
        pred = self.predict(X)
        truth = check_labels(y, len(pred))
        hits = np.array([p is not None and p == t for p, t in zip(pred, truth)], dtype=float)
        return float(np.average(hits, weights=sample_weight))
