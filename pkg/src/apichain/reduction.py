"""Dimensionality reduction: PCA and class clustering.

PCA runs over feature matrices via SVD of the row-centered data. The
class-mode pipeline shrinks the 5,973-label state space by clustering
classes on the cosine similarity of their co-occurrence rows (k-means,
400 clusters by default), leaving cluster labels plus the self-defined
and obfuscated pass-throughs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .callgraph import TransitionCounts
from .errors import DegenerateInput, DimensionMismatch, InsufficientPoints
from .signatures import OBFUSCATED, SELF_DEFINED, AbstractionTable

KMEANS_MAX_ITER = 300


@dataclass
class PcaModel:
    mean: np.ndarray                      # (d,)
    components: np.ndarray                # (k, d), orthonormal rows
    explained_variance_ratio: np.ndarray  # (k,), non-increasing

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]


def fit_pca(matrix: np.ndarray, k: int) -> PcaModel:
    """Top-k principal directions of the row-centered matrix.

    Components carry a deterministic sign (first nonzero coordinate
    positive). A zero-variance matrix yields zero components with ratio 0.
    """
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DegenerateInput("PCA needs at least 2 rows")
    n, d = X.shape
    if not (1 <= k <= min(n, d)):
        raise DegenerateInput(f"component count {k} outside [1, {min(n, d)}]")
    mean = X.mean(axis=0)
    centered = X - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    total = float(np.sum(s**2))
    if total <= 0.0:
        return PcaModel(mean, np.zeros((k, d)), np.zeros(k))
    components = vt[:k].copy()
    for row in components:
        nz = np.nonzero(np.abs(row) > 1e-12)[0]
        if nz.size and row[nz[0]] < 0:
            row *= -1.0
    ratios = (s[:k] ** 2) / total
    return PcaModel(mean, components, ratios)


def transform_pca(model: PcaModel, matrix: np.ndarray) -> np.ndarray:
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise DimensionMismatch(f"expected {model.dim} columns, got {X.shape}")
    return (X - model.mean) @ model.components.T


def save_pca(path: str | Path, model: PcaModel, seed: int | None = None) -> Path:
    path = Path(path)
    header = {
        "d": model.dim,
        "k": model.k,
        "seed": seed,
        "ratios": [float(r) for r in model.explained_variance_ratio],
    }
    with path.open("wb") as f:
        f.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        np.save(f, model.mean)
        np.save(f, model.components)
    return path


def load_pca(path: str | Path) -> PcaModel:
    with Path(path).open("rb") as f:
        header = json.loads(f.readline().decode("utf-8"))
        mean = np.load(f)
        components = np.load(f)
    return PcaModel(mean, components, np.array(header["ratios"], dtype=np.float64))


# ---------------------------------------------------------------------------
# Class clustering


@dataclass
class ClassClustering:
    """Assignment of every whitelisted class to one of n_clusters labels."""

    class_names: tuple[str, ...]
    assignment: dict[str, str]
    n_clusters: int

    def __post_init__(self):
        missing = [c for c in self.class_names if c not in self.assignment]
        if missing:
            raise ValueError(f"{len(missing)} classes without a cluster assignment")

    def label_space(self) -> tuple[str, ...]:
        labels = set(self.assignment.values()) | {SELF_DEFINED, OBFUSCATED}
        return tuple(sorted(labels))

    def label_map(self) -> dict[str, str]:
        return self.assignment


def cluster_label(i: int, k: int) -> str:
    width = max(3, len(str(k - 1)))
    return f"cluster_{i:0{width}d}"


def build_cooccurrence(
    corpus: Iterable[TransitionCounts | set | frozenset],
    class_names: list[str] | tuple[str, ...],
) -> np.ndarray:
    """Symmetric count matrix of classes appearing in the same sequence.

    Each corpus item is one sequence: either a TransitionCounts (the app's
    whole abstracted edge set) or a plain set of labels (per-entry-node
    granularity). Labels outside class_names are ignored, which drops the
    self-defined/obfuscated pass-throughs.
    """
    index = {c: i for i, c in enumerate(class_names)}
    n = len(class_names)
    C = np.zeros((n, n), dtype=np.float64)
    for item in corpus:
        labels = item.present_labels() if isinstance(item, TransitionCounts) else item
        ids = sorted(index[l] for l in labels if l in index)
        for a, ai in enumerate(ids):
            C[ai, ai] += 1.0
            for bi in ids[a + 1 :]:
                C[ai, bi] += 1.0
                C[bi, ai] += 1.0
    return C


def cosine_similarity(C: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarity of the rows of C; zero rows map to 0."""
    C = np.asarray(C, dtype=np.float64)
    norms = np.linalg.norm(C, axis=1)
    S = C @ C.T
    outer = np.outer(norms, norms)
    with np.errstate(invalid="ignore", divide="ignore"):
        S = np.where(outer > 0, S / outer, 0.0)
    return np.clip(S, 0.0, 1.0)


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.RandomState) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[rng.randint(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.randint(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers[i] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[i]) ** 2, axis=1))
    return centers


def _sq_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # |x - c|^2 via the expansion; clamp tiny negatives from cancellation.
    d2 = (
        np.sum(X**2, axis=1)[:, None]
        - 2.0 * (X @ centers.T)
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def lloyd_kmeans(
    X: np.ndarray, k: int, seed: int, max_iter: int = KMEANS_MAX_ITER
) -> tuple[np.ndarray, np.ndarray, float]:
    """Lloyd's algorithm with k-means++ seeding.

    Deterministic under seed. Empty clusters are reseeded from the point
    farthest from its assigned center. Returns (labels, centers, inertia).
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    distinct = np.unique(X, axis=0).shape[0]
    if k > distinct:
        raise InsufficientPoints(f"k={k} exceeds {distinct} distinct points")
    rng = np.random.RandomState(seed)
    centers = _kmeans_pp_init(X, k, rng)
    labels = np.full(n, -1, dtype=np.int64)
    for _ in range(max_iter):
        d2 = _sq_distances(X, centers)
        new_labels = np.argmin(d2, axis=1)
        empty = [c for c in range(k) if not np.any(new_labels == c)]
        if empty:
            point_d2 = d2[np.arange(n), new_labels]
            for c in empty:
                far = int(np.argmax(point_d2))
                centers[c] = X[far]
                new_labels[far] = c
                point_d2[far] = 0.0
            # Recompute with the repaired centers before testing convergence.
            d2 = _sq_distances(X, centers)
            new_labels = np.argmin(d2, axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = X[labels == c]
            if members.shape[0]:
                centers[c] = members.mean(axis=0)
    d2 = _sq_distances(X, centers)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(n), labels].sum())
    return labels, centers, inertia


def kmeans_cluster(
    vectors: np.ndarray,
    k: int,
    seed: int,
    class_names: list[str] | tuple[str, ...],
) -> ClassClustering:
    """Cluster similarity rows; row i belongs to class_names[i]."""
    if len(class_names) != np.asarray(vectors).shape[0]:
        raise DimensionMismatch("one vector per class name required")
    labels, _, _ = lloyd_kmeans(vectors, k, seed)
    assignment = {c: cluster_label(int(l), k) for c, l in zip(class_names, labels)}
    return ClassClustering(tuple(class_names), assignment, k)


def cluster_classes(
    sequences: Iterable[TransitionCounts | set | frozenset],
    table: AbstractionTable,
    k: int = 400,
    seed: int = 0,
) -> ClassClustering:
    """Full class-mode clustering: co-occurrence, cosine, k-means.

    Classes never observed in the corpus all share the zero co-occurrence
    row; they are assigned to the cluster whose center is nearest the
    origin (lowest cluster index on ties), so the result covers the whole
    whitelist with exactly k cluster labels.
    """
    sequences = list(sequences)
    observed = set()
    for item in sequences:
        labels = item.present_labels() if isinstance(item, TransitionCounts) else item
        observed.update(l for l in labels if l in table.class_whitelist)
    observed_names = sorted(observed)
    if len(observed_names) < k:
        raise InsufficientPoints(
            f"only {len(observed_names)} whitelisted classes observed; need at least k={k}"
        )
    C = build_cooccurrence(sequences, observed_names)
    S = cosine_similarity(C)
    labels, centers, _ = lloyd_kmeans(S, k, seed)
    assignment = {c: cluster_label(int(l), k) for c, l in zip(observed_names, labels)}
    rest = sorted(set(table.class_whitelist) - observed)
    if rest:
        zero_cluster = int(np.argmin(np.sum(centers**2, axis=1)))
        zero_label = cluster_label(zero_cluster, k)
        for c in rest:
            assignment[c] = zero_label
    return ClassClustering(tuple(sorted(table.class_whitelist)), assignment, k)


def save_clustering(path: str | Path, clustering: ClassClustering) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["class_name", "cluster_label"])
        for name in clustering.class_names:
            writer.writerow([name, clustering.assignment[name]])
    return path


def load_clustering(path: str | Path) -> ClassClustering:
    names, assignment = [], {}
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != ["class_name", "cluster_label"]:
            raise ValueError(f"{path}: unexpected clustering header {header}")
        for row in reader:
            names.append(row[0])
            assignment[row[0]] = row[1]
    n_clusters = len(set(assignment.values()))
    return ClassClustering(tuple(names), assignment, n_clusters)
