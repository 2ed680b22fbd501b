"""Random forest: bagged best-split trees with per-split feature subsampling.

Each tree trains on a bootstrap sample the same size as the training set
(row sampling with replacement) and considers round(sqrt(d)) features per
split. Scores are the mean of the trees' leaf frequency vectors (soft
voting); argmax of the mean equals the majority vote under hard leaves.
"""

from __future__ import annotations

import numpy as np

from .base import ProbabilisticClassifier
from .tree import _node_from_dict, _node_to_dict, _predict_node, _TreeBuilder


class RandomForestClassifier(ProbabilisticClassifier):
    kind = "RF"

    def __init__(self, n_estimators: int = 100, seed: int = 0, bootstrap: bool = True,
                 criterion: str = "gini", max_depth: int | None = None,
                 max_features: int | None = None, min_samples_leaf: int = 1):
        super().__init__()
        if n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")
        self.n_estimators = n_estimators
        self.seed = seed
        self.bootstrap = bootstrap
        self.criterion = criterion
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_samples_leaf = min_samples_leaf
        self.trees_ = []
        self.tree_seeds_ = None

    def _fit(self, X, y):
        n, d = X.shape
        m = self.max_features or int(round(np.sqrt(d)))
        self.tree_seeds_ = np.random.SeedSequence(self.seed).generate_state(self.n_estimators)
        self.trees_ = []
        for s in self.tree_seeds_:
            rng = np.random.default_rng(int(s))
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
                Xb, yb = X[idx], y[idx]
            else:
                Xb, yb = X, y
            builder = _TreeBuilder(self.class_count_, self.criterion, self.max_depth,
                                   m, self.min_samples_leaf, "best", rng)
            self.trees_.append(builder.build(Xb, yb))

    def _scores(self, X):
        total = np.zeros((X.shape[0], self.class_count_))
        buf = np.zeros_like(total)
        idx = np.arange(X.shape[0])
        for root in self.trees_:
            buf[:] = 0.0
            _predict_node(root, X, idx, buf)
            total += buf
        return total / len(self.trees_)

    def _params_to_dict(self):
        return {"n_estimators": self.n_estimators, "seed": self.seed,
                "bootstrap": self.bootstrap, "criterion": self.criterion,
                "max_depth": self.max_depth, "max_features": self.max_features,
                "min_samples_leaf": self.min_samples_leaf,
                "trees": [_node_to_dict(t) for t in self.trees_]}

    def _params_from_dict(self, doc):
        self.n_estimators = doc["n_estimators"]
        self.seed = doc["seed"]
        self.bootstrap = doc["bootstrap"]
        self.criterion = doc["criterion"]
        self.max_depth = doc["max_depth"]
        self.max_features = doc["max_features"]
        self.min_samples_leaf = doc["min_samples_leaf"]
        self.trees_ = [_node_from_dict(t) for t in doc["trees"]]
