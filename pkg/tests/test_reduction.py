import itertools
from collections import Counter

import numpy as np
import pytest

from apichain.callgraph import TransitionCounts, extract_transitions, load_call_graph, path_label_sets
from apichain.errors import DegenerateInput, DimensionMismatch, InsufficientPoints
from apichain.reduction import (
    ClassClustering,
    build_cooccurrence,
    cluster_classes,
    cosine_similarity,
    fit_pca,
    kmeans_cluster,
    lloyd_kmeans,
    load_clustering,
    load_pca,
    save_clustering,
    save_pca,
    transform_pca,
)
from apichain.signatures import AbstractionMode, AbstractionTable


def pca_eig_oracle(X, k):
    """Brute-force covariance eigendecomposition (independent of SVD path)."""
    Xc = X - X.mean(axis=0)
    cov = Xc.T @ Xc
    w, v = np.linalg.eigh(cov)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    return v[:, :k].T, w[:k] / w.sum()


def match_up_to_sign(a, b, tol):
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < tol


class TestPca:
    def test_rank_one_data(self):
        t = np.linspace(-1, 1, 10)
        X = np.stack([2 * t, -3 * t], axis=1)
        model = fit_pca(X, 1)
        assert abs(model.explained_variance_ratio[0] - 1.0) < 1e-9

    def test_matches_eigendecomposition_oracle(self):
        rng = np.random.RandomState(42)
        for _ in range(20):
            X = rng.randn(20, 5)
            model = fit_pca(X, 5)
            comps, ratios = pca_eig_oracle(X, 5)
            assert np.allclose(model.explained_variance_ratio, ratios, atol=1e-8)
            for i in range(5):
                assert match_up_to_sign(model.components[i], comps[i], 1e-8)

    def test_components_orthonormal(self):
        X = np.random.RandomState(0).randn(30, 7)
        model = fit_pca(X, 6)
        gram = model.components @ model.components.T
        assert np.allclose(gram, np.eye(6), atol=1e-8)

    def test_ratios_non_increasing_and_sum_to_one(self):
        X = np.random.RandomState(1).randn(25, 6)
        model = fit_pca(X, 6)
        r = model.explained_variance_ratio
        assert np.all(np.diff(r) <= 1e-12)
        assert abs(r.sum() - 1.0) < 1e-8

    def test_projection_variance_matches_ratio(self):
        X = np.random.RandomState(2).randn(40, 5)
        model = fit_pca(X, 5)
        proj = transform_pca(model, X)
        var = proj.var(axis=0)
        assert np.allclose(var / var.sum(), model.explained_variance_ratio, atol=1e-8)

    def test_projections_uncorrelated(self):
        X = np.random.RandomState(3).randn(50, 6)
        proj = transform_pca(fit_pca(X, 6), X)
        corr = np.cov(proj, rowvar=False)
        off = corr - np.diag(np.diag(corr))
        assert np.max(np.abs(off)) < 1e-6

    def test_full_rank_reconstruction(self):
        X = np.random.RandomState(4).randn(20, 5)
        model = fit_pca(X, 5)
        recon = transform_pca(model, X) @ model.components + model.mean
        assert np.max(np.abs(recon - X)) < 1e-8

    def test_zero_vector_projects_minus_mean(self):
        X = np.random.RandomState(5).randn(10, 4)
        model = fit_pca(X, 2)
        out = transform_pca(model, np.zeros((1, 4)))
        expected = (-model.mean) @ model.components.T
        assert np.allclose(out[0], expected)

    def test_sign_convention(self):
        X = np.random.RandomState(6).randn(15, 4)
        model = fit_pca(X, 4)
        for row in model.components:
            nz = np.nonzero(np.abs(row) > 1e-12)[0]
            assert row[nz[0]] > 0

    def test_degenerate_single_row(self):
        with pytest.raises(DegenerateInput):
            fit_pca(np.ones((1, 3)), 1)

    def test_degenerate_k(self):
        with pytest.raises(DegenerateInput):
            fit_pca(np.ones((4, 3)), 4)

    def test_zero_variance_zero_components(self):
        model = fit_pca(np.ones((5, 3)), 2)
        assert not model.components.any()
        assert not model.explained_variance_ratio.any()

    def test_dimension_mismatch(self):
        model = fit_pca(np.random.RandomState(7).randn(6, 3), 2)
        with pytest.raises(DimensionMismatch):
            transform_pca(model, np.zeros((2, 4)))

    def test_persistence_roundtrip(self, tmp_path):
        X = np.random.RandomState(8).randn(12, 5)
        model = fit_pca(X, 3)
        path = save_pca(tmp_path / "pca.bin", model, seed=9)
        loaded = load_pca(path)
        assert np.array_equal(loaded.mean, model.mean)
        assert np.array_equal(loaded.components, model.components)
        assert np.allclose(loaded.explained_variance_ratio, model.explained_variance_ratio)


class TestCooccurrence:
    def test_one_sequence(self):
        C = build_cooccurrence([{"X", "Y"}], ["X", "Y"])
        assert C[0, 1] == 1 and C[1, 0] == 1
        assert C[0, 0] == 1 and C[1, 1] == 1

    def test_two_apps_same_pair(self):
        C = build_cooccurrence([{"X", "Y"}, {"X", "Y"}], ["X", "Y"])
        assert C[0, 1] == 2

    def test_trycatch_paths_oracle(self, trycatch_path, table):
        # Three simple paths; brute-force pair listing over their label sets.
        g = load_call_graph(trycatch_path)
        seqs = path_label_sets(g, AbstractionMode.CLASS, table)
        assert len(seqs) == 3
        names = ["android.util.Log", "java.lang.Throwable"]
        C = build_cooccurrence(seqs, names)
        oracle = np.zeros((2, 2))
        for s in seqs:
            present = [i for i, n in enumerate(names) if n in s]
            for i, j in itertools.product(present, repeat=2):
                oracle[i, j] += 1
        assert np.array_equal(C, oracle)
        # The log and throwable calls sit on different paths.
        assert C[0, 1] == 0 and C[0, 0] == 1 and C[1, 1] == 1

    def test_trycatch_app_granularity(self, trycatch_path, table):
        g = load_call_graph(trycatch_path)
        counts = extract_transitions(g, AbstractionMode.CLASS, table)
        C = build_cooccurrence([counts], ["android.util.Log", "java.lang.Throwable"])
        assert C[0, 1] == 1  # one sequence spanning the whole app

    def test_symmetric_nonnegative(self):
        seqs = [{"a", "b", "c"}, {"b", "d"}, {"a"}, set()]
        C = build_cooccurrence(seqs, ["a", "b", "c", "d"])
        assert np.array_equal(C, C.T)
        assert np.all(C >= 0)

    def test_unknown_labels_ignored(self):
        C = build_cooccurrence([{"X", "self-defined"}], ["X"])
        assert C.shape == (1, 1) and C[0, 0] == 1


class TestCosine:
    def test_identical_rows(self):
        C = np.array([[1.0, 2.0], [1.0, 2.0]])
        S = cosine_similarity(C)
        assert abs(S[0, 1] - 1.0) < 1e-12

    def test_orthogonal_rows(self):
        C = np.array([[1.0, 0.0], [0.0, 5.0]])
        assert cosine_similarity(C)[0, 1] == 0.0

    def test_hand_computed_matrix(self):
        C = np.array([[1.0, 2.0, 2.0], [2.0, 4.0, 4.0], [0.0, 3.0, 4.0]])
        S = cosine_similarity(C)
        assert abs(S[0, 1] - 1.0) < 1e-12
        assert abs(S[0, 2] - 14.0 / 15.0) < 1e-12
        assert abs(S[1, 2] - 14.0 / 15.0) < 1e-12

    def test_zero_rows_zero_similarity(self):
        C = np.array([[0.0, 0.0], [1.0, 1.0]])
        S = cosine_similarity(C)
        assert S[0, 0] == 0.0 and S[0, 1] == 0.0

    def test_range_and_self_similarity(self):
        rng = np.random.RandomState(11)
        C = rng.randint(0, 5, size=(20, 20)).astype(float)
        S = cosine_similarity(C)
        assert np.all(S >= 0.0) and np.all(S <= 1.0)
        nonzero = np.linalg.norm(C, axis=1) > 0
        assert np.allclose(S[nonzero, nonzero], 1.0, atol=1e-12)


class TestKmeans:
    def test_each_point_own_cluster(self):
        X = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 0.0]])
        clustering = kmeans_cluster(X, 3, seed=0, class_names=["a", "b", "c"])
        assert len(set(clustering.assignment.values())) == 3

    def test_two_blobs_recovered(self):
        rng = np.random.RandomState(12)
        a = rng.randn(30, 2) * 0.2
        b = rng.randn(30, 2) * 0.2 + np.array([10.0, 10.0])
        X = np.vstack([a, b])
        labels, _, _ = lloyd_kmeans(X, 2, seed=3)
        assert len(set(labels[:30])) == 1
        assert len(set(labels[30:])) == 1
        assert labels[0] != labels[30]

    def test_identical_points_single_cluster(self):
        X = np.ones((5, 3))
        labels, _, inertia = lloyd_kmeans(X, 1, seed=0)
        assert set(labels) == {0}
        assert inertia == 0.0

    def test_insufficient_points(self):
        X = np.ones((5, 3))
        with pytest.raises(InsufficientPoints):
            lloyd_kmeans(X, 2, seed=0)

    def test_deterministic_under_seed(self):
        X = np.random.RandomState(13).randn(40, 3)
        l1, c1, i1 = lloyd_kmeans(X, 4, seed=21)
        l2, c2, i2 = lloyd_kmeans(X, 4, seed=21)
        assert np.array_equal(l1, l2) and np.array_equal(c1, c2) and i1 == i2

    def test_inertia_non_increasing_in_iterations(self):
        X = np.random.RandomState(14).randn(60, 4)
        inertias = [lloyd_kmeans(X, 5, seed=2, max_iter=m)[2] for m in range(1, 12)]
        for a, b in zip(inertias, inertias[1:]):
            assert b <= a + 1e-9

    def test_final_assignment_is_fixed_point(self):
        X = np.random.RandomState(15).randn(50, 3)
        labels, centers, _ = lloyd_kmeans(X, 4, seed=5)
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assert np.array_equal(labels, np.argmin(d2, axis=1))


class TestClusterClasses:
    def _small_table(self):
        classes = {f"java.lang.C{i}" for i in range(8)}
        return AbstractionTable({"java.lang"}, classes)

    def test_covers_whole_whitelist(self):
        table = self._small_table()
        seqs = [
            {"java.lang.C0", "java.lang.C1"},
            {"java.lang.C2", "java.lang.C3"},
            {"java.lang.C4", "java.lang.C0"},
            {"java.lang.C5"},
        ]
        clustering = cluster_classes(seqs, table, k=3, seed=1)
        assert set(clustering.class_names) == set(table.class_whitelist)
        assert len(clustering.label_space()) == 3 + 2
        assert set(clustering.label_space()) >= {"self-defined", "obfuscated"}

    def test_insufficient_observed(self):
        table = self._small_table()
        with pytest.raises(InsufficientPoints):
            cluster_classes([{"java.lang.C0"}], table, k=3, seed=0)

    def test_unobserved_share_one_cluster(self):
        table = self._small_table()
        seqs = [{"java.lang.C0"}, {"java.lang.C1"}, {"java.lang.C2", "java.lang.C1"}]
        clustering = cluster_classes(seqs, table, k=2, seed=0)
        unobserved = {f"java.lang.C{i}" for i in range(3, 8)}
        labels = {clustering.assignment[c] for c in unobserved}
        assert len(labels) == 1

    def test_persistence_roundtrip(self, tmp_path):
        clustering = ClassClustering(
            ("a", "b", "c"), {"a": "cluster_000", "b": "cluster_001", "c": "cluster_000"}, 2
        )
        path = save_clustering(tmp_path / "clusters.csv", clustering)
        loaded = load_clustering(path)
        assert loaded.assignment == clustering.assignment
        assert loaded.class_names == clustering.class_names
