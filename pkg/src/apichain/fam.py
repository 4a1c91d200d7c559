"""Frequency-analysis variant: per-app label frequencies instead of chains.

Feature selection keeps only labels whose mean per-app relative frequency
is strictly higher in malware than in benign training apps; package mode
additionally caps the selection at the top 172 labels ranked by that
frequency gap.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ModeMismatch, NoDiscriminativeFeatures
from .signatures import AbstractionMode

PACKAGE_TOP_K = 172

# junit is test scaffolding; it never informs the family-mode model.
FAMILY_DROPPED = ("junit",)


@dataclass
class FrequencyProfile:
    app_id: str
    mode: AbstractionMode
    freq: dict[str, float] = field(default_factory=dict)
    label: str = "unknown"


@dataclass
class FamFeatureSet:
    mode: AbstractionMode
    selected: tuple[str, ...]
    selection_stats: dict[str, tuple[float, float]]  # label -> (malware, benign) mean


def profile_app(
    counts: Mapping[str, int] | Counter,
    mode: AbstractionMode,
    app_id: str = "",
    label: str = "unknown",
) -> FrequencyProfile:
    """Relative frequencies of abstracted calls; empty apps stay empty."""
    total = sum(counts.values())
    if total <= 0:
        return FrequencyProfile(app_id, mode, {}, label)
    return FrequencyProfile(app_id, mode, {k: v / total for k, v in counts.items() if v}, label)


def _class_means(profiles: Sequence[FrequencyProfile], labels: set[str]) -> dict[str, float]:
    n = len(profiles)
    means = {}
    for lab in labels:
        means[lab] = sum(p.freq.get(lab, 0.0) for p in profiles) / n
    return means


def select_features(
    profiles: Sequence[FrequencyProfile],
    mode: AbstractionMode,
    top_k: int = PACKAGE_TOP_K,
) -> FamFeatureSet:
    """Labels strictly more frequent in malware than in benign training apps.

    Family mode keeps every qualifying label (junit removed); package mode
    ranks by malware-benign mean difference and truncates to top_k. Ties on
    the mean (malware == benign) never qualify.
    """
    for p in profiles:
        if p.mode is not mode:
            raise ModeMismatch(f"profile {p.app_id!r} is {p.mode}, expected {mode}")
    malware = [p for p in profiles if p.label == "malware"]
    benign = [p for p in profiles if p.label == "benign"]
    if not malware or not benign:
        raise ValueError("need at least one malware and one benign training profile")
    labels = set()
    for p in profiles:
        labels.update(p.freq)
    if mode is AbstractionMode.FAMILY:
        labels -= set(FAMILY_DROPPED)
    mal_means = _class_means(malware, labels)
    ben_means = _class_means(benign, labels)
    qualifying = [lab for lab in labels if mal_means[lab] > ben_means[lab]]
    if not qualifying:
        raise NoDiscriminativeFeatures(
            f"no label is more frequent in malware than benign ({mode.value} mode)"
        )
    if mode is AbstractionMode.FAMILY:
        selected = tuple(sorted(qualifying))
    else:
        ranked = sorted(qualifying, key=lambda l: (-(mal_means[l] - ben_means[l]), l))
        selected = tuple(ranked[:top_k])
    stats = {lab: (mal_means[lab], ben_means[lab]) for lab in selected}
    return FamFeatureSet(mode, selected, stats)


def fam_featurize(profile: FrequencyProfile, feature_set: FamFeatureSet) -> np.ndarray:
    if profile.mode is not feature_set.mode:
        raise ModeMismatch(f"profile is {profile.mode}, feature set is {feature_set.mode}")
    return np.array([profile.freq.get(lab, 0.0) for lab in feature_set.selected], dtype=np.float64)


def save_feature_set(path: str | Path, feature_set: FamFeatureSet) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["label", "malware_mean", "benign_mean"])
        for lab in feature_set.selected:
            mal, ben = feature_set.selection_stats[lab]
            writer.writerow([lab, repr(mal), repr(ben)])
    return path


def load_feature_set(path: str | Path, mode: AbstractionMode) -> FamFeatureSet:
    selected, stats = [], {}
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        next(reader)
        for row in reader:
            selected.append(row[0])
            stats[row[0]] = (float(row[1]), float(row[2]))
    return FamFeatureSet(mode, tuple(selected), stats)
