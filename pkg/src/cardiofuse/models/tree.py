"""Decision-tree induction with gini/entropy impurity and two splitters.

The "random" splitter draws one uniform threshold per candidate feature
between that feature's min and max at the node and keeps the impurity-
minimizing (feature, threshold). The "best" splitter scans every midpoint
of consecutive distinct values. Leaves store class-frequency vectors.
"""

from __future__ import annotations

import numpy as np

from .base import ProbabilisticClassifier


def gini_impurity(counts) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p * p).sum())


def entropy_impurity(counts) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts[counts > 0] / n
    return float(-(p * np.log2(p)).sum())


def _impurity_rows(counts: np.ndarray, criterion: str) -> np.ndarray:
    # rows of class counts -> impurity per row
    n = counts.sum(axis=1, keepdims=True)
    n = np.where(n == 0, 1.0, n)
    p = counts / n
    if criterion == "gini":
        return 1.0 - (p * p).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -(p * logp).sum(axis=1)


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "dist")

    def __init__(self):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.dist = None

    @property
    def is_leaf(self):
        return self.dist is not None


class _TreeBuilder:
    def __init__(self, k, criterion, max_depth, max_features, min_samples_leaf,
                 splitter, rng):
        self.k = k
        self.criterion = criterion
        self.max_depth = np.inf if max_depth is None else max_depth
        self.max_features = max_features
        self.min_leaf = min_samples_leaf
        self.splitter = splitter
        self.rng = rng

    def build(self, X, y) -> _Node:
        return self._grow(X, y, depth=0)

    def _leaf(self, y) -> _Node:
        node = _Node()
        node.dist = np.bincount(y, minlength=self.k) / len(y)
        return node

    def _grow(self, X, y, depth) -> _Node:
        n, d = X.shape
        if depth >= self.max_depth or n < 2 * self.min_leaf or len(np.unique(y)) == 1:
            return self._leaf(y)

        m = min(self.max_features, d)
        candidates = self.rng.choice(d, size=m, replace=False)
        best = None  # (score, feature, threshold)
        for f in candidates:
            x = X[:, f]
            lo, hi = x.min(), x.max()
            if lo == hi:
                continue
            if self.splitter == "random":
                thr = float(self.rng.uniform(lo, hi))
                left = x <= thr
                nl = int(left.sum())
                if nl < self.min_leaf or n - nl < self.min_leaf:
                    continue
                cl = np.bincount(y[left], minlength=self.k).astype(np.float64)
                cr = np.bincount(y[~left], minlength=self.k).astype(np.float64)
                counts = np.stack([cl, cr])
                imp = _impurity_rows(counts, self.criterion)
                score = (nl * imp[0] + (n - nl) * imp[1]) / n
                if best is None or score < best[0]:
                    best = (score, f, thr)
            else:
                score_thr = self._best_split(x, y, n)
                if score_thr is not None and (best is None or score_thr[0] < best[0]):
                    best = (score_thr[0], f, score_thr[1])

        if best is None:
            return self._leaf(y)
        _, f, thr = best
        left = X[:, f] <= thr
        node = _Node()
        node.feature = int(f)
        node.threshold = float(thr)
        node.left = self._grow(X[left], y[left], depth + 1)
        node.right = self._grow(X[~left], y[~left], depth + 1)
        return node

    def _best_split(self, x, y, n):
        order = np.argsort(x, kind="stable")
        xs, ys = x[order], y[order]
        cut = np.flatnonzero(xs[1:] > xs[:-1]) + 1  # left-partition sizes
        if len(cut) == 0:
            return None
        valid = (cut >= self.min_leaf) & (n - cut >= self.min_leaf)
        cut = cut[valid]
        if len(cut) == 0:
            return None
        onehot = np.zeros((n, self.k))
        onehot[np.arange(n), ys] = 1.0
        cum = np.cumsum(onehot, axis=0)
        left_counts = cum[cut - 1]
        right_counts = cum[-1] - left_counts
        impL = _impurity_rows(left_counts, self.criterion)
        impR = _impurity_rows(right_counts, self.criterion)
        scores = (cut * impL + (n - cut) * impR) / n
        i = int(np.argmin(scores))
        thr = (xs[cut[i] - 1] + xs[cut[i]]) / 2.0
        return float(scores[i]), float(thr)


def _predict_node(node: _Node, X: np.ndarray, idx: np.ndarray, out: np.ndarray):
    if node.is_leaf:
        out[idx] = node.dist
        return
    go_left = X[idx, node.feature] <= node.threshold
    if go_left.any():
        _predict_node(node.left, X, idx[go_left], out)
    if not go_left.all():
        _predict_node(node.right, X, idx[~go_left], out)


def _node_to_dict(node: _Node):
    if node.is_leaf:
        return {"dist": node.dist.tolist()}
    return {"feature": node.feature, "threshold": node.threshold,
            "left": _node_to_dict(node.left), "right": _node_to_dict(node.right)}


def _node_from_dict(doc) -> _Node:
    node = _Node()
    if "dist" in doc:
        node.dist = np.asarray(doc["dist"], dtype=np.float64)
        return node
    node.feature = doc["feature"]
    node.threshold = doc["threshold"]
    node.left = _node_from_dict(doc["left"])
    node.right = _node_from_dict(doc["right"])
    return node


class DecisionTreeClassifier(ProbabilisticClassifier):
    kind = "DT"

    def __init__(self, criterion: str = "gini", max_depth: int | None = 8,
                 max_features: int = 8, min_samples_leaf: int = 7,
                 splitter: str = "random", seed: int = 0):
        super().__init__()
        if criterion not in ("gini", "entropy"):
            raise ValueError(f"unknown criterion {criterion!r}")
        if splitter not in ("random", "best"):
            raise ValueError(f"unknown splitter {splitter!r}")
        if max_depth is not None and max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        self.criterion = criterion
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_samples_leaf = min_samples_leaf
        self.splitter = splitter
        self.seed = seed
        self.root_ = None

    def _fit(self, X, y):
        builder = _TreeBuilder(self.class_count_, self.criterion, self.max_depth,
                               self.max_features, self.min_samples_leaf,
                               self.splitter, np.random.default_rng(self.seed))
        self.root_ = builder.build(X, y)

    def _scores(self, X):
        out = np.zeros((X.shape[0], self.class_count_))
        _predict_node(self.root_, X, np.arange(X.shape[0]), out)
        return out

    def _params_to_dict(self):
        return {"criterion": self.criterion, "max_depth": self.max_depth,
                "max_features": self.max_features,
                "min_samples_leaf": self.min_samples_leaf,
                "splitter": self.splitter, "seed": self.seed,
                "root": _node_to_dict(self.root_)}

    def _params_from_dict(self, doc):
        self.criterion = doc["criterion"]
        self.max_depth = doc["max_depth"]
        self.max_features = doc["max_features"]
        self.min_samples_leaf = doc["min_samples_leaf"]
        self.splitter = doc["splitter"]
        self.seed = doc["seed"]
        self.root_ = _node_from_dict(doc["root"])
