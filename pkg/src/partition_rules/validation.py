"""Input checks shared by the estimators."""

from __future__ import annotations

import numpy as np


def check_documents(X, *, name: str = "X") -> list[str]:
    """Return ``X`` as a list of raw documents.

    Accepts any 1-D iterable of ``str`` or ``bytes`` (lists, numpy arrays,
    pandas Series). A bare string is rejected: it is almost always a caller
    passing one document where a collection was meant.
    """
    if isinstance(X, (str, bytes)):
        raise ValueError(f"{name} must be a collection of documents, not a single string")
    if isinstance(X, np.ndarray):
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        elif X.ndim != 1:
            raise ValueError(f"{name} must be 1-D, got shape {X.shape}")
    docs = list(X)
    for i, d in enumerate(docs):
        if isinstance(d, bytes):
            docs[i] = d.decode("latin-1")
        elif not isinstance(d, str):
            raise TypeError(f"{name}[{i}] is {type(d).__name__}, expected str")
    return docs


def check_labels(y, n_samples: int) -> list[str]:
    if y is None:
        raise ValueError("y is required")
    labels = [str(v) for v in np.asarray(y, dtype=object).ravel()]
    if len(labels) != n_samples:
        raise ValueError(f"X has {n_samples} documents but y has {len(labels)} labels")
    return labels
