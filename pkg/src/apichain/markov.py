"""Per-app Markov chains over abstracted calls and their feature vectors.

Each app becomes a row-stochastic transition matrix over the canonical
state list of its abstraction mode; the row-major flattening of that
matrix is the app's feature vector.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .callgraph import TransitionCounts
from .errors import DimensionMismatch
from .signatures import AbstractionMode, AbstractionTable

ROW_SUM_TOL = 1e-9

# CSV above this dimension is impractical; switch to the binary format.
CSV_MAX_DIM = 100_000


@dataclass
class MarkovChain:
    mode: AbstractionMode
    states: tuple[str, ...]
    probabilities: np.ndarray  # |states| x |states|, rows sum to 1 or 0

    def __post_init__(self):
        n = len(self.states)
        if self.probabilities.shape != (n, n):
            raise DimensionMismatch(
                f"probability matrix {self.probabilities.shape} vs {n} states"
            )


@dataclass
class MarkovFeatureVector:
    app_id: str
    mode: AbstractionMode
    values: np.ndarray  # length |states|^2, row-major
    label: str = "unknown"


def build_chain(
    counts: TransitionCounts,
    table: AbstractionTable,
    label_map: dict[str, str] | None = None,
    states: tuple[str, ...] | None = None,
) -> MarkovChain:
    """Normalize transition counts row-wise into a Markov chain.

    Counts on labels outside the featurization state space (the excluded
    families) are dropped before normalization, so remaining rows stay
    stochastic. label_map/states support the clustered class mode, where
    class labels collapse to cluster labels first.
    """
    if states is None:
        states = table.state_space(counts.mode, for_featurization=True)
    index = {name: i for i, name in enumerate(states)}
    n = len(states)
    occ = np.zeros((n, n), dtype=np.float64)
    for (j, k), c in counts.counts.items():
        if label_map is not None:
            j = label_map.get(j, j)
            k = label_map.get(k, k)
        ji = index.get(j)
        ki = index.get(k)
        if ji is None or ki is None:
            continue
        occ[ji, ki] += c
    row_sums = occ.sum(axis=1)
    nonzero = row_sums > 0
    probs = np.zeros_like(occ)
    probs[nonzero] = occ[nonzero] / row_sums[nonzero, None]
    return MarkovChain(counts.mode, tuple(states), probs)


def featurize(chain: MarkovChain, app_id: str = "", label: str = "unknown") -> MarkovFeatureVector:
    """Row-major flattening of the chain over its canonical state list."""
    return MarkovFeatureVector(app_id, chain.mode, chain.probabilities.reshape(-1).copy(), label)


def hash_states(states: tuple[str, ...] | list[str]) -> str:
    digest = hashlib.sha256("\n".join(states).encode("utf-8")).hexdigest()
    return digest


# ---------------------------------------------------------------------------
# Feature matrix persistence. CSV for small dimensions, .npy plus a one-line
# JSON sidecar for the package/class modes. The sidecar is always written:
# it carries app ids, ground-truth labels, year tags, and the state hash.


def _meta_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def save_feature_matrix(
    path: str | Path,
    matrix: np.ndarray,
    app_ids: list[str],
    labels: list[str],
    years: list[int | None],
    mode: AbstractionMode,
    states: tuple[str, ...] | list[str],
    featurizer: str = "markov",
) -> Path:
    path = Path(path)
    n, d = matrix.shape
    if not (len(app_ids) == len(labels) == len(years) == n):
        raise DimensionMismatch("metadata length does not match matrix rows")
    meta = {
        "featurizer": featurizer,
        "mode": mode.value,
        "dimension": d,
        "n_apps": n,
        "state_list_hash": hash_states(states),
        "app_ids": list(app_ids),
        "labels": list(labels),
        "years": [y if y is None else int(y) for y in years],
    }
    if path.suffix == ".csv":
        if d > CSV_MAX_DIM:
            raise ValueError(f"dimension {d} too large for CSV; use the .npy format")
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["app_id", "label"] + [f"f{i}" for i in range(d)])
            for i in range(n):
                writer.writerow([app_ids[i], labels[i]] + [repr(float(x)) for x in matrix[i]])
    elif path.suffix == ".npy":
        with path.open("wb") as f:
            np.save(f, np.ascontiguousarray(matrix, dtype=np.float64))
    else:
        raise ValueError(f"unsupported feature file extension: {path.suffix}")
    _meta_path(path).write_text(json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_feature_matrix(path: str | Path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    meta = json.loads(_meta_path(path).read_text(encoding="utf-8"))
    if path.suffix == ".csv":
        with path.open("r", encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            header = next(reader)
            d = len(header) - 2
            rows, app_ids, labels = [], [], []
            for row in reader:
                app_ids.append(row[0])
                labels.append(row[1])
                rows.append([float(x) for x in row[2:]])
        matrix = np.array(rows, dtype=np.float64).reshape(len(rows), d)
        if app_ids != meta["app_ids"] or labels != meta["labels"]:
            raise DimensionMismatch(f"{path}: sidecar metadata does not match CSV content")
    elif path.suffix == ".npy":
        matrix = np.load(path)
    else:
        raise ValueError(f"unsupported feature file extension: {path.suffix}")
    if matrix.shape != (meta["n_apps"], meta["dimension"]):
        raise DimensionMismatch(f"{path}: matrix shape {matrix.shape} does not match sidecar")
    return matrix, meta
