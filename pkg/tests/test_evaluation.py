import numpy as np
import pytest
from hypothesis import given, strategies as st

from apichain.classify import KNearestNeighbors
from apichain.errors import MissingYearTag, SingleClassTraining, TooFewSamples
from apichain.evaluation import (
    average_f_by_offset,
    cross_validate,
    evaluate,
    fold_indices,
    report_from_confusion,
    report_from_predictions,
    temporal_evaluate,
    write_reports,
    write_unavailable_report,
)


def knn_fit_predict(train_X, train_labels, test_X):
    return KNearestNeighbors(1).fit(train_X, train_labels).predict(test_X)


class TestMetrics:
    def test_table_row_values(self):
        # P=0.95 and R=0.97 exactly; F rounds to 0.96 at 2 decimal places.
        report = report_from_confusion("t", tp=1843, fp=97, tn=0, fn=57)
        assert report.precision == 0.95
        assert report.recall == 0.97
        assert round(report.f_measure, 2) == 0.96

    def test_perfect_predictions(self):
        r = report_from_predictions("t", ["malware", "benign"], ["malware", "benign"])
        assert (r.precision, r.recall, r.f_measure) == (1.0, 1.0, 1.0)
        assert (r.tp, r.fp, r.tn, r.fn) == (1, 0, 1, 0)

    def test_zero_predicted_positives_flagged(self):
        r = report_from_predictions("t", ["malware", "benign"], ["benign", "benign"])
        assert r.precision == 0.0
        assert "no_predicted_positives" in r.degenerate

    def test_no_actual_positives_flagged(self):
        r = report_from_predictions("t", ["benign", "benign"], ["benign", "benign"])
        assert r.recall == 0.0
        assert "no_actual_positives" in r.degenerate

    @given(
        st.integers(0, 500), st.integers(0, 500), st.integers(0, 500), st.integers(0, 500)
    )
    def test_identities_hold_exactly(self, tp, fp, tn, fn):
        r = report_from_confusion("t", tp, fp, tn, fn)
        if tp + fp > 0:
            assert r.precision == tp / (tp + fp)
        if tp + fn > 0:
            assert r.recall == tp / (tp + fn)
        if r.precision + r.recall > 0:
            assert r.f_measure == 2 * r.precision * r.recall / (r.precision + r.recall)

    def test_malware_is_positive_class(self):
        r = report_from_predictions("t", ["malware", "benign"], ["benign", "malware"])
        assert (r.tp, r.fp, r.tn, r.fn) == (0, 1, 0, 1)


class TestCrossValidate:
    def _dataset(self, n=100, seed=0):
        rng = np.random.RandomState(seed)
        X = rng.rand(n, 3)
        labels = ["malware" if x > 0.5 else "benign" for x in X[:, 0]]
        return X, labels

    def test_fold_sizes_equal(self):
        parts = fold_indices(100, 10, seed=1)
        assert [len(p) for p in parts] == [10] * 10

    def test_folds_partition(self):
        parts = fold_indices(53, 10, seed=2)
        sizes = [len(p) for p in parts]
        assert max(sizes) - min(sizes) <= 1
        all_idx = np.concatenate(parts)
        assert sorted(all_idx.tolist()) == list(range(53))

    def test_fixed_seed_identical_folds(self):
        assert [p.tolist() for p in fold_indices(40, 5, 7)] == [
            p.tolist() for p in fold_indices(40, 5, 7)
        ]

    def test_metrics_are_fold_means(self):
        X, labels = self._dataset()
        report = cross_validate(X, labels, knn_fit_predict, folds=10, seed=3)
        assert abs(report.precision - np.mean([r.precision for r in report.per_fold])) < 1e-12
        assert abs(report.recall - np.mean([r.recall for r in report.per_fold])) < 1e-12
        assert abs(report.f_measure - np.mean([r.f_measure for r in report.per_fold])) < 1e-12
        assert len(report.per_fold) == 10

    def test_too_few_samples(self):
        X, labels = self._dataset(5)
        with pytest.raises(TooFewSamples):
            cross_validate(X, labels, knn_fit_predict, folds=10)

    def test_single_class_rejected(self):
        X = np.random.RandomState(0).rand(20, 2)
        with pytest.raises(SingleClassTraining):
            cross_validate(X, ["benign"] * 20, knn_fit_predict, folds=5)


class TestTemporal:
    def _corpus(self):
        rng = np.random.RandomState(5)
        X, labels, years = [], [], []
        for year in (2013, 2014, 2015):
            for i in range(20):
                x = rng.rand(2)
                X.append(x)
                labels.append("malware" if x[0] > 0.5 else "benign")
                years.append(year)
        return np.array(X), labels, years

    def test_grid_shape_three_years(self):
        X, labels, years = self._corpus()
        reports = temporal_evaluate(X, labels, years, knn_fit_predict)
        assert len(reports) == 6
        offsets = sorted(average_f_by_offset(reports))
        assert offsets == [-2, -1, 1, 2]

    def test_single_pair(self):
        X, labels, years = self._corpus()
        keep = [i for i, y in enumerate(years) if y in (2013, 2014)]
        reports = temporal_evaluate(
            X[keep], [labels[i] for i in keep], [years[i] for i in keep], knn_fit_predict
        )
        assert len(reports) == 2
        assert {("offset=+1" in r.experiment) or ("offset=-1" in r.experiment) for r in reports} == {True}

    def test_same_year_absent(self):
        X, labels, years = self._corpus()
        reports = temporal_evaluate(X, labels, years, knn_fit_predict)
        assert all("offset=+0" not in r.experiment for r in reports)

    def test_missing_year_rejected(self):
        X, labels, years = self._corpus()
        years[0] = None
        with pytest.raises(MissingYearTag):
            temporal_evaluate(X, labels, years, knn_fit_predict)

    def test_single_year_rejected(self):
        X, labels, _ = self._corpus()
        with pytest.raises(MissingYearTag):
            temporal_evaluate(X, labels, [2013] * len(labels), knn_fit_predict)


class TestReportFiles:
    def test_csv_and_json(self, tmp_path):
        r = report_from_confusion("exp", 5, 1, 4, 2)
        csv_path, json_path = write_reports(tmp_path / "report", [r])
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "experiment,precision,recall,f_measure,tp,fp,tn,fn"
        assert lines[1].startswith("exp,")
        assert json_path.exists()

    def test_unavailable_report(self, tmp_path):
        csv_path, json_path = write_unavailable_report(tmp_path / "report", "exp", "why")
        import json

        doc = json.loads(json_path.read_text())
        assert doc["status"] == "unavailable"
        assert doc["reason"] == "why"
        assert csv_path.read_text().splitlines()[1] == "exp,,,,,,,"
