"""Classifiers: random forest (CART/Gini, from scratch) and k-NN.

Both are deterministic under a fixed seed. Tie-breaking is pinned down
explicitly: forests split on the lowest feature index then the lowest
threshold among equal-Gini candidates; k-NN resolves equal distances by
the lower training index.
"""

from __future__ import annotations

import json
import math
import pickle
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, InsufficientSamples, SingleClassTraining


@dataclass
class RandomForestConfig:
    n_trees: int = 51
    max_depth: int = 8
    features_per_split: str | int = "sqrt"
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    def resolve_features(self, d: int) -> int:
        if self.features_per_split == "sqrt":
            return max(1, int(math.sqrt(d)))
        m = int(self.features_per_split)
        if not (1 <= m <= d):
            raise ValueError(f"features_per_split {m} outside [1, {d}]")
        return m


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    prediction: int = -1  # class index at leaves


def _gini_best_split(X, y, feat_ids, n_classes):
    """Best (score, feature, threshold) over candidate features.

    Features are scanned in ascending index order and thresholds in
    ascending value order; strict improvement keeps the first optimum,
    which realizes the documented tie-break.
    """
    n = y.shape[0]
    best = None  # (score, feature, threshold)
    for f in feat_ids:
        vals = X[:, f]
        order = np.argsort(vals, kind="stable")
        v = vals[order]
        if v[0] == v[-1]:
            continue
        labels = y[order]
        onehot = np.zeros((n, n_classes), dtype=np.float64)
        onehot[np.arange(n), labels] = 1.0
        left_counts = np.cumsum(onehot, axis=0)[:-1]  # after i+1 left samples
        right_counts = left_counts[-1] + onehot[-1] - left_counts
        nl = np.arange(1, n, dtype=np.float64)
        nr = n - nl
        gini_l = 1.0 - np.sum((left_counts / nl[:, None]) ** 2, axis=1)
        gini_r = 1.0 - np.sum((right_counts / nr[:, None]) ** 2, axis=1)
        score = (nl * gini_l + nr * gini_r) / n
        valid = v[:-1] < v[1:]
        if not np.any(valid):
            continue
        score = np.where(valid, score, np.inf)
        pos = int(np.argmin(score))
        if best is None or score[pos] < best[0]:
            best = (float(score[pos]), f, float((v[pos] + v[pos + 1]) / 2.0))
    return best


def _majority(y: np.ndarray, n_classes: int) -> int:
    counts = np.bincount(y, minlength=n_classes)
    return int(np.argmax(counts))  # ties go to the lowest class index


def _grow_tree(X, y, rng, cfg: RandomForestConfig, n_classes: int) -> _Node:
    m = cfg.resolve_features(X.shape[1])

    def build(idx: np.ndarray, depth: int) -> _Node:
        sub_y = y[idx]
        if depth >= cfg.max_depth or np.all(sub_y == sub_y[0]) or idx.shape[0] < 2:
            return _Node(prediction=_majority(sub_y, n_classes))
        feat_ids = np.sort(rng.choice(X.shape[1], size=m, replace=False))
        best = _gini_best_split(X[idx], sub_y, feat_ids, n_classes)
        if best is None:
            return _Node(prediction=_majority(sub_y, n_classes))
        _, f, thr = best
        mask = X[idx, f] <= thr
        left = build(idx[mask], depth + 1)
        right = build(idx[~mask], depth + 1)
        return _Node(feature=f, threshold=thr, left=left, right=right)

    return build(np.arange(X.shape[0]), 0)


def _tree_predict(node: _Node, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.int64)
    for i, row in enumerate(X):
        cur = node
        while cur.prediction < 0:
            cur = cur.left if row[cur.feature] <= cur.threshold else cur.right
        out[i] = cur.prediction
    return out


class RandomForest:
    """Bootstrap-aggregated CART trees with majority-vote prediction."""

    def __init__(self, cfg: RandomForestConfig):
        self.cfg = cfg
        self.classes_: list[str] = []
        self._trees: list[_Node] = []
        self._dim = 0

    def fit(self, X: np.ndarray, labels: list[str]) -> "RandomForest":
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] < 2:
            raise SingleClassTraining("need at least 2 training samples")
        self.classes_ = sorted(set(labels))
        if len(self.classes_) < 2:
            raise SingleClassTraining("training labels contain a single class")
        class_index = {c: i for i, c in enumerate(self.classes_)}
        y = np.array([class_index[l] for l in labels], dtype=np.int64)
        self._dim = X.shape[1]
        n = X.shape[0]
        master = np.random.RandomState(self.cfg.seed)
        tree_seeds = master.randint(0, 2**31 - 1, size=self.cfg.n_trees)
        self._trees = []
        for s in tree_seeds:
            rng = np.random.RandomState(s)
            boot = rng.randint(0, n, size=n)
            self._trees.append(_grow_tree(X[boot], y[boot], rng, self.cfg, len(self.classes_)))
        return self

    def predict(self, X: np.ndarray) -> list[str]:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self._dim:
            raise DimensionMismatch(f"expected {self._dim} features, got {X.shape}")
        votes = np.zeros((X.shape[0], len(self.classes_)), dtype=np.int64)
        for tree in self._trees:
            pred = _tree_predict(tree, X)
            votes[np.arange(X.shape[0]), pred] += 1
        winners = np.argmax(votes, axis=1)  # vote ties: lowest class index
        return [self.classes_[w] for w in winners]


class KNearestNeighbors:
    """Plain Euclidean k-NN; equal distances resolved by lower train index."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.classes_: list[str] = []
        self._X: np.ndarray | None = None
        self._y: np.ndarray | None = None

    def fit(self, X: np.ndarray, labels: list[str]) -> "KNearestNeighbors":
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] < self.k:
            raise InsufficientSamples(f"{X.shape[0]} samples < k={self.k}")
        self.classes_ = sorted(set(labels))
        class_index = {c: i for i, c in enumerate(self.classes_)}
        self._X = X
        self._y = np.array([class_index[l] for l in labels], dtype=np.int64)
        return self

    def predict(self, X: np.ndarray) -> list[str]:
        if self._X is None:
            raise RuntimeError("predict before fit")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self._X.shape[1]:
            raise DimensionMismatch(f"expected {self._X.shape[1]} features, got {X.shape}")
        out = []
        for row in X:
            d2 = np.sum((self._X - row) ** 2, axis=1)
            order = np.argsort(d2, kind="stable")[: self.k]
            votes = np.bincount(self._y[order], minlength=len(self.classes_))
            out.append(self.classes_[int(np.argmax(votes))])
        return out


def make_classifier(kind: str, forest_cfg: RandomForestConfig | None = None):
    if kind == "random-forest":
        return RandomForest(forest_cfg or RandomForestConfig())
    if kind == "1nn":
        return KNearestNeighbors(1)
    if kind == "3nn":
        return KNearestNeighbors(3)
    raise ValueError(f"unknown classifier kind {kind!r}")


# ---------------------------------------------------------------------------
# Model persistence: one-line JSON header followed by a pickle body. The
# header is enough to sanity-check compatibility without unpickling.


def save_model(path: str | Path, model, header: dict) -> Path:
    path = Path(path)
    with path.open("wb") as f:
        f.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        pickle.dump(model, f, protocol=pickle.HIGHEST_PROTOCOL)
    return path


def read_model_header(path: str | Path) -> dict:
    with Path(path).open("rb") as f:
        return json.loads(f.readline().decode("utf-8"))


def load_model(path: str | Path) -> tuple[dict, object]:
    with Path(path).open("rb") as f:
        header = json.loads(f.readline().decode("utf-8"))
        model = pickle.load(f)
    return header, model
