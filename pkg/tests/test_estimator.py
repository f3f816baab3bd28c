import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from partition_rules import GatedRuleClassifier, TextNormalizer
from partition_rules.validation import check_documents, check_labels

from published_tables import TOY_PRINTED, published_model

X = [raw for raw, _, _ in TOY_PRINTED]
Y = [label for _, _, label in TOY_PRINTED]


def test_params_and_clone():
    est = GatedRuleClassifier(gate="pl", threshold=0.5, n_iter=100)
    params = est.get_params()
    assert params["gate"] == "pl" and params["threshold"] == 0.5 and params["n_iter"] == 100
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(threshold=0.7)
    assert est.threshold == 0.7


def test_fit_predict_toy():
    est = GatedRuleClassifier(n_iter=10_000, random_state=6, classes=["B"]).fit(X, Y)
    assert list(est.classes_) == ["B"]
    res = est.search_results_["B"]
    assert res.fitness.F == 1.0
    pred = est.predict(X)
    assert pred.dtype == object and len(pred) == 13
    assert est.score(X, Y) == pytest.approx(np.mean([p == y for p, y in zip(pred, Y)]))
    assert all(p == "B" for p, y in zip(pred, Y) if y == "B")


def test_imposed_word_sets():
    est = GatedRuleClassifier(word_sets={"B": ["bird", "cat"]}, classes=["B"]).fit(X, Y)
    assert est.model_["B"].word_set.patterns == ("bird", "cat")
    assert est.search_results_["B"] is None
    assert est.model_.class_provenance[0]["source"] == "imposed"


def test_reproducible_fit():
    a = GatedRuleClassifier(n_iter=500, random_state=3).fit(X, Y)
    b = GatedRuleClassifier(n_iter=500, random_state=3).fit(X, Y)
    assert a.model_.models == b.model_.models


def test_abstain_label_and_decision_function():
    est = GatedRuleClassifier.from_model(published_model(), threshold=0.9, abstain_label="none")
    docs = ["Shr 3 cts vs 2 cts net", "oil prices fell"]
    assert list(est.predict(docs)) == ["earn", "none"]
    scores = est.decision_function(docs)
    assert scores.shape == (2, 3)
    assert scores[0, 0] == pytest.approx(1322 / 1328)
    pl = est.set_params(gate="pl").decision_function(docs)
    assert np.nansum(pl, axis=1) == pytest.approx([1.0, 1.0])
    assert est.score(docs, ["earn", "crude"]) == 0.5


def test_pipeline():
    pipe = make_pipeline(TextNormalizer(), GatedRuleClassifier(word_sets={"B": ["bird", "cat"], "A": ["sun"]}))
    pipe.fit(X, Y)
    assert pipe.predict(["THE CAT!"])[0] == "B"
    assert TextNormalizer().fit_transform(["A.B"]) == ["a b"]


def test_unfitted_raises():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        GatedRuleClassifier().predict(["x"])


@pytest.mark.parametrize(
    "kwargs, X_, y_",
    [
        ({}, "one string", ["A"]),
        ({}, [1, 2], ["A", "B"]),
        ({}, X, Y[:3]),
        ({}, [], []),
        ({"classes": ["Z"]}, X, Y),
        ({"gate": "bogus"}, X, Y),
        ({"threshold": 1.5}, X, Y),
    ],
)
def test_fit_validation(kwargs, X_, y_):
    with pytest.raises((ValueError, TypeError)):
        GatedRuleClassifier(n_iter=10, **kwargs).fit(X_, y_)


def test_check_documents_shapes():
    assert check_documents(np.array([["a"], ["b"]])) == ["a", "b"]
    assert check_documents([b"caf\xe9"]) == ["café"]
    with pytest.raises(ValueError):
        check_documents(np.array([["a", "b"]]))
    with pytest.raises(ValueError):
        check_labels(None, 1)
    assert check_labels(np.array([1, 2]), 2) == ["1", "2"]
