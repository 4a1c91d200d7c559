import numpy as np
import pytest

from apichain.classify import (
    KNearestNeighbors,
    RandomForest,
    RandomForestConfig,
    _gini_best_split,
    load_model,
    make_classifier,
    read_model_header,
    save_model,
)
from apichain.errors import DimensionMismatch, InsufficientSamples, SingleClassTraining


def threshold_separable(n=200, seed=0):
    """2-D set split by an axis-aligned threshold on feature 0."""
    rng = np.random.RandomState(seed)
    X = rng.rand(n, 2)
    labels = ["malware" if x > 0.5 else "benign" for x in X[:, 0]]
    return X, labels


class TestGiniSplit:
    def test_lowest_threshold_on_tie(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0, 1, 0, 1])
        score, feature, threshold = _gini_best_split(X, y, [0], 2)
        assert feature == 0
        assert threshold == 0.5  # 0.5 and 2.5 tie; lowest wins

    def test_lowest_feature_on_tie(self):
        X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
        y = np.array([0, 0, 1, 1])
        score, feature, threshold = _gini_best_split(X, y, [0, 1], 2)
        assert score == 0.0
        assert feature == 0

    def test_constant_features_give_no_split(self):
        X = np.ones((4, 2))
        y = np.array([0, 1, 0, 1])
        assert _gini_best_split(X, y, [0, 1], 2) is None


class TestRandomForest:
    def test_separable_training_accuracy(self):
        X, labels = threshold_separable()
        clf = RandomForest(RandomForestConfig(n_trees=51, max_depth=8, seed=1)).fit(X, labels)
        assert clf.predict(X) == labels

    def test_feature_equals_label(self):
        X = np.array([[0.0], [1.0]] * 20)
        labels = ["benign", "malware"] * 20
        clf = RandomForest(RandomForestConfig(n_trees=5, max_depth=1, seed=0)).fit(X, labels)
        assert clf.predict(X) == labels

    def test_single_class_rejected(self):
        X = np.zeros((10, 2))
        with pytest.raises(SingleClassTraining):
            RandomForest(RandomForestConfig()).fit(X, ["benign"] * 10)

    def test_seed_reproducibility(self):
        X, labels = threshold_separable(seed=3)
        test = np.random.RandomState(9).rand(50, 2)
        p1 = RandomForest(RandomForestConfig(seed=7)).fit(X, labels).predict(test)
        p2 = RandomForest(RandomForestConfig(seed=7)).fit(X, labels).predict(test)
        assert p1 == p2

    def test_more_trees_never_flip_on_separable(self):
        # Every bootstrap sample splits perfectly when the feature IS the
        # label, so training predictions stay unanimous for any tree count.
        X = np.array([[0.0], [1.0]] * 25)
        labels = ["benign", "malware"] * 25
        for n in (1, 3, 9, 21):
            clf = RandomForest(RandomForestConfig(n_trees=n, max_depth=2, seed=5)).fit(X, labels)
            assert clf.predict(X) == labels

    def test_dimension_guard(self):
        X, labels = threshold_separable(40)
        clf = RandomForest(RandomForestConfig(n_trees=3)).fit(X, labels)
        with pytest.raises(DimensionMismatch):
            clf.predict(np.zeros((2, 5)))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            RandomForestConfig(n_trees=0)
        with pytest.raises(ValueError):
            RandomForestConfig(max_depth=0)

    def test_depth_limits_tree(self):
        # XOR cannot be separated at depth 1 but depth-2 trees can.
        rng = np.random.RandomState(2)
        base = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        X = np.repeat(base, 30, axis=0) + rng.rand(120, 2) * 0.1
        labels = ["benign", "malware", "malware", "benign"] * 30
        labels = [l for l in np.repeat(["benign", "malware", "malware", "benign"], 30)]
        deep = RandomForest(RandomForestConfig(n_trees=21, max_depth=4, seed=0, features_per_split=2))
        acc_deep = np.mean(np.array(deep.fit(X, labels).predict(X)) == np.array(labels))
        assert acc_deep == 1.0


class TestKnn:
    def test_exact_match_k1(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0]])
        clf = KNearestNeighbors(1).fit(X, ["benign", "malware"])
        assert clf.predict(np.array([[1.0, 1.0]])) == ["malware"]

    def test_majority_k3(self):
        X = np.array([[0.0], [0.1], [5.0]])
        clf = KNearestNeighbors(3).fit(X, ["malware", "malware", "benign"])
        assert clf.predict(np.array([[0.05]])) == ["malware"]

    def test_tie_lower_index_wins(self):
        # Query equidistant from all four points; the k nearest are then the
        # lowest-index training rows, which are malware.
        X = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        labels = ["malware", "malware", "benign", "benign"]
        clf = KNearestNeighbors(3).fit(X, labels)
        assert clf.predict(np.array([[0.0, 0.0]])) == ["malware"]

    def test_training_accuracy_distinct_points(self):
        rng = np.random.RandomState(4)
        X = rng.rand(30, 3)
        labels = ["malware" if i % 2 else "benign" for i in range(30)]
        clf = KNearestNeighbors(1).fit(X, labels)
        assert clf.predict(X) == labels

    def test_insufficient_samples(self):
        with pytest.raises(InsufficientSamples):
            KNearestNeighbors(3).fit(np.zeros((2, 2)), ["benign", "malware"])

    def test_factory(self):
        assert isinstance(make_classifier("1nn"), KNearestNeighbors)
        assert isinstance(make_classifier("3nn"), KNearestNeighbors)
        assert isinstance(make_classifier("random-forest"), RandomForest)
        with pytest.raises(ValueError):
            make_classifier("svm")


class TestModelIO:
    def test_roundtrip(self, tmp_path):
        X, labels = threshold_separable(60)
        clf = RandomForest(RandomForestConfig(n_trees=5, seed=2)).fit(X, labels)
        header = {"kind": "random-forest", "seed": 2, "feature_dimension": 2,
                  "state_list_hash": "abc", "config": {"n_trees": 5}}
        path = save_model(tmp_path / "model.bin", clf, header)
        assert read_model_header(path) == header
        loaded_header, loaded = load_model(path)
        assert loaded_header == header
        assert loaded.predict(X) == clf.predict(X)
