"""Evaluation metrics and protocols.

Malware is the positive class throughout: TP counts samples correctly
classified as malicious. Degenerate denominators (no predicted or no
actual positives) report 0 with an explicit flag instead of NaN so CSV
reports stay total.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, MissingYearTag, SingleClassTraining, TooFewSamples

POSITIVE_CLASS = "malware"

# fit_predict(train_X, train_labels, test_X) -> predicted labels
FitPredict = Callable[[np.ndarray, list[str], np.ndarray], list[str]]


@dataclass
class EvaluationReport:
    experiment: str
    precision: float
    recall: float
    f_measure: float
    tp: int
    fp: int
    tn: int
    fn: int
    degenerate: tuple[str, ...] = ()
    per_fold: list["EvaluationReport"] = field(default_factory=list)

    def to_row(self) -> list:
        return [
            self.experiment,
            repr(self.precision),
            repr(self.recall),
            repr(self.f_measure),
            self.tp,
            self.fp,
            self.tn,
            self.fn,
        ]

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "degenerate": list(self.degenerate),
        }
        if self.per_fold:
            d["per_fold"] = [r.to_dict() for r in self.per_fold]
        return d


def report_from_confusion(experiment: str, tp: int, fp: int, tn: int, fn: int) -> EvaluationReport:
    flags = []
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision, flags = 0.0, flags + ["no_predicted_positives"]
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall, flags = 0.0, flags + ["no_actual_positives"]
    if precision + recall > 0:
        f_measure = 2.0 * precision * recall / (precision + recall)
    else:
        f_measure, flags = 0.0, flags + ["zero_f_denominator"]
    return EvaluationReport(experiment, precision, recall, f_measure, tp, fp, tn, fn, tuple(flags))


def report_from_predictions(
    experiment: str, truth: Sequence[str], predicted: Sequence[str]
) -> EvaluationReport:
    if len(truth) != len(predicted):
        raise DimensionMismatch("prediction count does not match ground truth")
    tp = fp = tn = fn = 0
    for t, p in zip(truth, predicted):
        if p == POSITIVE_CLASS:
            if t == POSITIVE_CLASS:
                tp += 1
            else:
                fp += 1
        else:
            if t == POSITIVE_CLASS:
                fn += 1
            else:
                tn += 1
    return report_from_confusion(experiment, tp, fp, tn, fn)


def evaluate(model, X: np.ndarray, labels: Sequence[str], experiment: str = "eval") -> EvaluationReport:
    if len(labels) == 0:
        raise ValueError("test set is empty")
    return report_from_predictions(experiment, list(labels), model.predict(X))


def _mean(values: list[float]) -> float:
    return float(sum(values) / len(values))


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Shuffled partition into `folds` chunks with sizes differing by <= 1."""
    rng = np.random.RandomState(seed)
    order = rng.permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(order, folds)]


def cross_validate(
    X: np.ndarray,
    labels: Sequence[str],
    fit_predict: FitPredict,
    folds: int = 10,
    seed: int = 0,
    experiment: str = "crossval",
) -> EvaluationReport:
    """Plain shuffled k-fold CV; fold metrics averaged arithmetically."""
    labels = list(labels)
    n = len(labels)
    if n < folds:
        raise TooFewSamples(f"{n} samples < {folds} folds")
    if len(set(labels)) < 2:
        raise SingleClassTraining("cross-validation needs both classes")
    parts = fold_indices(n, folds, seed)
    per_fold = []
    for i, test_idx in enumerate(parts):
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        train_idx = np.nonzero(mask)[0]
        train_labels = [labels[j] for j in train_idx]
        test_labels = [labels[j] for j in test_idx]
        predicted = fit_predict(X[train_idx], train_labels, X[test_idx])
        per_fold.append(report_from_predictions(f"{experiment} fold {i}", test_labels, predicted))
    report = EvaluationReport(
        experiment,
        _mean([r.precision for r in per_fold]),
        _mean([r.recall for r in per_fold]),
        _mean([r.f_measure for r in per_fold]),
        sum(r.tp for r in per_fold),
        sum(r.fp for r in per_fold),
        sum(r.tn for r in per_fold),
        sum(r.fn for r in per_fold),
        tuple(sorted(set(f for r in per_fold for f in r.degenerate))),
        per_fold,
    )
    return report


def temporal_evaluate(
    X: np.ndarray,
    labels: Sequence[str],
    years: Sequence[int | None],
    fit_predict: FitPredict,
    experiment: str = "temporal",
) -> list[EvaluationReport]:
    """Train on one year, test on every other; one report per ordered pair.

    Offsets follow test_year - train_year, so positive offsets mean older
    training data classifying newer samples.
    """
    labels = list(labels)
    if any(y is None for y in years):
        raise MissingYearTag("every sample needs a year tag")
    year_values = sorted(set(int(y) for y in years))
    if len(year_values) < 2:
        raise MissingYearTag("temporal evaluation needs at least 2 distinct years")
    by_year = {y: np.array([i for i, v in enumerate(years) if int(v) == y]) for y in year_values}
    reports = []
    for train_year in year_values:
        tr = by_year[train_year]
        train_labels = [labels[i] for i in tr]
        for test_year in year_values:
            if test_year == train_year:
                continue
            te = by_year[test_year]
            offset = test_year - train_year
            predicted = fit_predict(X[tr], train_labels, X[te])
            name = f"{experiment} train={train_year} test={test_year} offset={offset:+d}"
            reports.append(report_from_predictions(name, [labels[i] for i in te], predicted))
    return reports


def offset_of(report: EvaluationReport) -> int:
    tag = [p for p in report.experiment.split() if p.startswith("offset=")]
    if not tag:
        raise ValueError(f"no offset in experiment {report.experiment!r}")
    return int(tag[0].split("=")[1])


def average_f_by_offset(reports: Sequence[EvaluationReport]) -> dict[int, float]:
    buckets: dict[int, list[float]] = {}
    for r in reports:
        buckets.setdefault(offset_of(r), []).append(r.f_measure)
    return {off: _mean(vals) for off, vals in sorted(buckets.items())}


# ---------------------------------------------------------------------------
# Report files: CSV for the grid-friendly view, JSON with the full detail.

REPORT_CSV_HEADER = ["experiment", "precision", "recall", "f_measure", "tp", "fp", "tn", "fn"]


def write_reports(
    base_path: str | Path,
    reports: Sequence[EvaluationReport],
    status: str = "ok",
    include_folds: bool = True,
) -> tuple[Path, Path]:
    """Write <base>.csv and <base>.json for a list of reports."""
    base = Path(base_path)
    csv_path = base.with_suffix(".csv")
    json_path = base.with_suffix(".json")
    with csv_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_CSV_HEADER)
        for r in reports:
            writer.writerow(r.to_row())
            if include_folds:
                for fr in r.per_fold:
                    writer.writerow(fr.to_row())
    doc = {"status": status, "reports": [r.to_dict() for r in reports]}
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return csv_path, json_path


def write_unavailable_report(base_path: str | Path, experiment: str, reason: str) -> tuple[Path, Path]:
    """Record an experiment that could not run (no discriminative features)."""
    base = Path(base_path)
    csv_path = base.with_suffix(".csv")
    json_path = base.with_suffix(".json")
    with csv_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_CSV_HEADER)
        writer.writerow([experiment, "", "", "", "", "", "", ""])
    doc = {"status": "unavailable", "reason": reason, "experiment": experiment, "reports": []}
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return csv_path, json_path
