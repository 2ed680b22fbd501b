"""Soft-margin SVM trained with SMO, calibrated to probabilities via Platt.

Binary mode optimizes the dual of  min 1/2||w||^2 + C sum(xi)  over a
precomputed kernel matrix (RBF by default). Multiclass mode trains one
linear-kernel machine per class (one-vs-rest) and normalizes the
calibrated per-class probabilities across classes.
"""

from __future__ import annotations

import warnings

import numpy as np

from .base import ProbabilisticClassifier


def rbf_kernel(A, B, gamma):
    aa = (A * A).sum(axis=1)[:, None]
    bb = (B * B).sum(axis=1)[None, :]
    return np.exp(-gamma * np.maximum(aa + bb - 2.0 * (A @ B.T), 0.0))


def linear_kernel(A, B, gamma=None):
    return A @ B.T


class _SMO:
    """Sequential minimal optimization with an incrementally updated error cache."""

    def __init__(self, K, y, C, tol=1e-3, max_passes=200):
        self.K = K
        self.y = y.astype(np.float64)  # +/-1 labels
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        n = len(y)
        self.alpha = np.zeros(n)
        self.b = 0.0
        self.E = -self.y.copy()  # decision(0) - y
        self.converged = False

    def _violates(self, i) -> bool:
        r = self.E[i] * self.y[i]
        return (r < -self.tol and self.alpha[i] < self.C) or \
               (r > self.tol and self.alpha[i] > 0)

    def _examine(self, i, rng) -> int:
        if not self._violates(i):
            return 0
        # second-choice heuristic, then non-bound partners, then everyone
        j = int(np.argmax(np.abs(self.E - self.E[i])))
        if j != i and self._step(i, j):
            return 1
        nonbound = np.flatnonzero((self.alpha > 0) & (self.alpha < self.C))
        for j in rng.permutation(nonbound):
            if j != i and self._step(i, int(j)):
                return 1
        for j in rng.permutation(len(self.y)):
            if j != i and self._step(i, int(j)):
                return 1
        return 0

    def solve(self):
        n = len(self.y)
        rng = np.random.default_rng(0)
        examine_all = True
        for _ in range(self.max_passes):
            changed = 0
            if examine_all:
                idx = range(n)
            else:
                idx = np.flatnonzero((self.alpha > 0) & (self.alpha < self.C))
            for i in idx:
                changed += self._examine(int(i), rng)
            if examine_all:
                if changed == 0:
                    break
                examine_all = False
            elif changed == 0:
                examine_all = True
        self.converged = not any(self._violates(i) for i in range(n))
        if not self.converged:
            warnings.warn("SMO hit its pass cap before meeting the KKT tolerance; "
                          "returning the best iterate")

    def _step(self, i, j) -> bool:
        if i == j:
            return False
        a_i, a_j = self.alpha[i], self.alpha[j]
        y_i, y_j = self.y[i], self.y[j]
        Ei, Ej = self.E[i], self.E[j]
        if y_i != y_j:
            L, H = max(0.0, a_j - a_i), min(self.C, self.C + a_j - a_i)
        else:
            L, H = max(0.0, a_i + a_j - self.C), min(self.C, a_i + a_j)
        if H - L < 1e-12:
            return False
        eta = 2.0 * self.K[i, j] - self.K[i, i] - self.K[j, j]
        if eta >= 0:
            return False
        a_j_new = float(np.clip(a_j - y_j * (Ei - Ej) / eta, L, H))
        if abs(a_j_new - a_j) < 1e-8 * (a_j_new + a_j + 1e-8):
            return False
        a_i_new = a_i + y_i * y_j * (a_j - a_j_new)

        d_i = y_i * (a_i_new - a_i)
        d_j = y_j * (a_j_new - a_j)
        b1 = self.b - Ei - d_i * self.K[i, i] - d_j * self.K[i, j]
        b2 = self.b - Ej - d_i * self.K[i, j] - d_j * self.K[j, j]
        if 0 < a_i_new < self.C:
            b_new = b1
        elif 0 < a_j_new < self.C:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0

        self.E += d_i * self.K[:, i] + d_j * self.K[:, j] + (b_new - self.b)
        self.alpha[i], self.alpha[j] = a_i_new, a_j_new
        self.b = b_new
        return True

    def decision(self):
        return self.K @ (self.alpha * self.y) + self.b


def fit_platt(decision: np.ndarray, target01: np.ndarray, max_iter=100):
    """Platt's sigmoid fit: P(y=1|f) = 1/(1+exp(A f + B)), Newton iterations."""
    f = np.asarray(decision, dtype=np.float64)
    t01 = np.asarray(target01, dtype=np.float64)
    n1 = t01.sum()
    n0 = len(t01) - n1
    t = np.where(t01 > 0, (n1 + 1.0) / (n1 + 2.0), 1.0 / (n0 + 2.0))
    A, B = 0.0, float(np.log((n0 + 1.0) / (n1 + 1.0)))
    for _ in range(max_iter):
        z = np.clip(A * f + B, -500, 500)
        p = 1.0 / (1.0 + np.exp(z))
        gA = float(((t - p) * f).sum())
        gB = float((t - p).sum())
        w = np.maximum(p * (1.0 - p), 1e-12)
        hAA = float((w * f * f).sum()) + 1e-12
        hAB = float((w * f).sum())
        hBB = float(w.sum()) + 1e-12
        det = hAA * hBB - hAB * hAB
        if abs(det) < 1e-18:
            break
        dA = -(hBB * gA - hAB * gB) / det
        dB = -(hAA * gB - hAB * gA) / det
        A += dA
        B += dB
        if abs(dA) < 1e-10 and abs(dB) < 1e-10:
            break
    return A, B


def platt_prob(A, B, f):
    return 1.0 / (1.0 + np.exp(np.clip(A * np.asarray(f) + B, -500, 500)))


class SVMClassifier(ProbabilisticClassifier):
    kind = "SVM"

    def __init__(self, C: float = 1.0, kernel: str = "rbf", gamma: float = 0.1,
                 tol: float = 1e-3, max_passes: int = 200):
        super().__init__()
        if C <= 0:
            raise ValueError("C must be positive")
        if kernel not in ("rbf", "linear"):
            raise ValueError(f"unsupported kernel {kernel!r}")
        self.C = C
        self.kernel = kernel
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.machines_ = []
        self.single_class_ = None

    def _kernel(self, A, B):
        if self.kernel == "rbf":
            return rbf_kernel(A, B, self.gamma)
        return linear_kernel(A, B)

    def _fit(self, X, y):
        k = self.class_count_
        present = np.unique(y)
        if len(present) == 1:
            self.single_class_ = int(present[0])
            return
        self.single_class_ = None
        self.machines_ = []
        K = self._kernel(X, X)
        positive_sets = [1] if k == 2 else list(range(k))
        for cls in positive_sets:
            ypm = np.where(y == cls, 1.0, -1.0)
            smo = _SMO(K, ypm, self.C, self.tol, self.max_passes)
            smo.solve()
            A, B = fit_platt(smo.decision(), (ypm > 0).astype(float))
            sv = smo.alpha > 1e-10
            self.machines_.append({
                "sv_X": X[sv].copy(),
                "coef": (smo.alpha * ypm)[sv].copy(),
                "b": smo.b,
                "A": A, "B": B,
            })

    def decision_function(self, X, machine: int = 0):
        m = self.machines_[machine]
        return self._kernel(np.asarray(X, dtype=np.float64), m["sv_X"]) @ m["coef"] + m["b"]

    def _scores(self, X):
        k = self.class_count_
        if self.single_class_ is not None:
            p = np.zeros((len(X), k))
            p[:, self.single_class_] = 1.0
            return p
        if k == 2:
            m = self.machines_[0]
            p1 = platt_prob(m["A"], m["B"], self.decision_function(X, 0))
            return np.column_stack([1.0 - p1, p1])
        probs = np.column_stack([
            platt_prob(mach["A"], mach["B"], self.decision_function(X, i))
            for i, mach in enumerate(self.machines_)])
        s = probs.sum(axis=1, keepdims=True)
        out = np.where(s > 0, probs / np.where(s == 0, 1.0, s), 1.0 / k)
        return out

    def _params_to_dict(self):
        return {
            "C": self.C, "kernel": self.kernel, "gamma": self.gamma,
            "single_class": self.single_class_,
            "machines": [{
                "sv_X": m["sv_X"].tolist(), "coef": m["coef"].tolist(),
                "b": m["b"], "A": m["A"], "B": m["B"],
            } for m in self.machines_],
        }

    def _params_from_dict(self, doc):
        self.C = doc["C"]
        self.kernel = doc["kernel"]
        self.gamma = doc["gamma"]
        self.single_class_ = doc["single_class"]
        self.machines_ = [{
            "sv_X": np.asarray(m["sv_X"], dtype=np.float64),
            "coef": np.asarray(m["coef"], dtype=np.float64),
            "b": m["b"], "A": m["A"], "B": m["B"],
        } for m in doc["machines"]]
