"""Common contract for the probabilistic classifiers.

Every learner fits on a feature matrix with labels 0..k-1 and scores unseen
rows into an (n, k) matrix of probabilities whose rows sum to 1.
"""

from __future__ import annotations

import json

import numpy as np


class ModelError(Exception):
    pass


class NotFittedError(ModelError):
    pass


class ShapeError(ModelError):
    pass


class DivergenceError(ModelError):
    pass


SERIAL_VERSION = 1


class ProbabilisticClassifier:
    """Base class: fit(X, y) then predict_proba(X) -> row-normalized scores."""

    kind = "?"

    def __init__(self):
        self.fitted = False
        self.n_features_ = None
        self.class_count_ = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ShapeError("X must be (n, d) with one label per row")
        if X.shape[0] == 0:
            raise ModelError("cannot fit on an empty table")
        self.n_features_ = X.shape[1]
        if self.class_count_ is None:
            # a degenerate single-class target still yields a binary scorer
            self.class_count_ = max(int(y.max()) + 1, 2)
        self._fit(X, y)
        self.fitted = True
        return self

    def predict_proba(self, X) -> np.ndarray:
        if not self.fitted:
            raise NotFittedError(f"{self.kind} model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_features_:
            raise ShapeError(
                f"row width {X.shape[1]} does not match training width {self.n_features_}")
        p = self._scores(X)
        return np.asarray(p, dtype=np.float64)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1).astype(np.int64)

    # subclass hooks -----------------------------------------------------
    def _fit(self, X, y):
        raise NotImplementedError

    def _scores(self, X):
        raise NotImplementedError

    def _params_to_dict(self) -> dict:
        raise NotImplementedError

    def _params_from_dict(self, doc: dict):
        raise NotImplementedError

    # serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        if not self.fitted:
            raise NotFittedError("cannot serialize an unfitted model")
        return {
            "version": SERIAL_VERSION,
            "kind": self.kind,
            "n_features": self.n_features_,
            "class_count": self.class_count_,
            "params": self._params_to_dict(),
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f)

    @staticmethod
    def from_dict(doc: dict) -> "ProbabilisticClassifier":
        from . import make_model  # registry lives in the package init
        if doc.get("version") != SERIAL_VERSION:
            raise ModelError(f"unsupported model document version {doc.get('version')}")
        model = make_model(doc["kind"])
        model.n_features_ = doc["n_features"]
        model.class_count_ = doc["class_count"]
        model._params_from_dict(doc["params"])
        model.fitted = True
        return model

    @staticmethod
    def load(path) -> "ProbabilisticClassifier":
        with open(path, "r", encoding="utf-8") as f:
            return ProbabilisticClassifier.from_dict(json.load(f))


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def one_hot(y: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros((len(y), k))
    out[np.arange(len(y)), y] = 1.0
    return out
