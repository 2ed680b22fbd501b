"""The six probabilistic classifiers behind one scoring contract."""

from .base import (DivergenceError, ModelError, NotFittedError,
                   ProbabilisticClassifier, ShapeError)
from .logistic import LogisticRegressionClassifier
from .svm import SVMClassifier
from .tree import DecisionTreeClassifier, entropy_impurity, gini_impurity
from .forest import RandomForestClassifier
from .mlp import MLPClassifier
from .adaboost import AdaBoostClassifier

MODEL_KINDS = ("LR", "SVM", "DT", "RF", "ANN", "ADA")

_REGISTRY = {
    "LR": LogisticRegressionClassifier,
    "SVM": SVMClassifier,
    "DT": DecisionTreeClassifier,
    "RF": RandomForestClassifier,
    "ANN": MLPClassifier,
    "ADA": AdaBoostClassifier,
}


def make_model(kind: str, **kwargs) -> ProbabilisticClassifier:
    try:
        cls = _REGISTRY[kind.upper()]
    except KeyError:
        raise ModelError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}") from None
    return cls(**kwargs)


__all__ = [
    "AdaBoostClassifier", "DecisionTreeClassifier", "DivergenceError",
    "LogisticRegressionClassifier", "MLPClassifier", "MODEL_KINDS", "ModelError",
    "NotFittedError", "ProbabilisticClassifier", "RandomForestClassifier",
    "SVMClassifier", "ShapeError", "entropy_impurity", "gini_impurity", "make_model",
]
