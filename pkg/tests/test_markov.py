from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apichain.callgraph import TransitionCounts, extract_transitions, load_call_graph
from apichain.markov import (
    build_chain,
    featurize,
    hash_states,
    load_feature_matrix,
    save_feature_matrix,
)
from apichain.signatures import AbstractionMode

FAMILY = AbstractionMode.FAMILY


def chain_prob(chain, a, b):
    i, j = chain.states.index(a), chain.states.index(b)
    return chain.probabilities[i, j]


class TestBuildChain:
    def test_trycatch_family_probabilities_exact(self, trycatch_path, table):
        g = load_call_graph(trycatch_path)
        counts = extract_transitions(g, FAMILY, table)
        chain = build_chain(counts, table)
        assert chain_prob(chain, "self-defined", "self-defined") == 0.5
        assert chain_prob(chain, "self-defined", "android") == 0.25
        assert chain_prob(chain, "self-defined", "java") == 0.25

    def test_trycatch_package_and_class_exact(self, trycatch_path, table):
        g = load_call_graph(trycatch_path)
        for mode, target_android, target_java in [
            (AbstractionMode.PACKAGE, "android.util", "java.lang"),
            (AbstractionMode.CLASS, "android.util.Log", "java.lang.Throwable"),
        ]:
            counts = extract_transitions(g, mode, table)
            if mode is AbstractionMode.CLASS:
                states = tuple(
                    sorted({"self-defined", "obfuscated", target_android, target_java})
                )
                chain = build_chain(counts, table, states=states)
            else:
                chain = build_chain(counts, table)
            assert chain_prob(chain, "self-defined", "self-defined") == 0.5
            assert chain_prob(chain, "self-defined", target_android) == 0.25
            assert chain_prob(chain, "self-defined", target_java) == 0.25

    def test_single_transition(self, table):
        counts = TransitionCounts(FAMILY, Counter({("java", "android"): 4}))
        chain = build_chain(counts, table)
        assert chain_prob(chain, "java", "android") == 1.0

    def test_empty_counts_zero_chain(self, table):
        chain = build_chain(TransitionCounts(FAMILY, Counter()), table)
        assert not chain.probabilities.any()

    def test_excluded_family_dropped_before_normalization(self, table):
        counts = TransitionCounts(
            FAMILY, Counter({("java", "json"): 1, ("java", "android"): 3})
        )
        chain = build_chain(counts, table)
        assert "json" not in chain.states
        assert chain_prob(chain, "java", "android") == 1.0

    def test_zero_rows_stay_zero(self, table):
        counts = TransitionCounts(FAMILY, Counter({("java", "android"): 1}))
        chain = build_chain(counts, table)
        row = chain.states.index("xml")
        assert not chain.probabilities[row].any()

    def test_label_map_collapses_states(self, table):
        counts = TransitionCounts(
            AbstractionMode.CLASS,
            Counter({("java.lang.String", "java.lang.Throwable"): 2}),
        )
        mapping = {"java.lang.String": "cluster_000", "java.lang.Throwable": "cluster_000"}
        chain = build_chain(
            counts, table, label_map=mapping, states=("cluster_000", "obfuscated", "self-defined")
        )
        assert chain_prob(chain, "cluster_000", "cluster_000") == 1.0

    def test_normalization_scale_invariance(self, table):
        base = Counter({("java", "android"): 1, ("java", "xml"): 3})
        scaled = Counter({k: 7 * v for k, v in base.items()})
        c1 = build_chain(TransitionCounts(FAMILY, base), table)
        c2 = build_chain(TransitionCounts(FAMILY, scaled), table)
        assert np.array_equal(c1.probabilities, c2.probabilities)

    def test_new_transition_changes_only_its_row(self, table):
        base = Counter({("java", "android"): 2, ("xml", "java"): 1})
        more = Counter(base)
        more[("java", "xml")] += 1
        c1 = build_chain(TransitionCounts(FAMILY, base), table)
        c2 = build_chain(TransitionCounts(FAMILY, more), table)
        jrow = c1.states.index("java")
        diff = np.nonzero(np.any(c1.probabilities != c2.probabilities, axis=1))[0]
        assert list(diff) == [jrow]

    @settings(max_examples=200, deadline=None)
    @given(
        st.dictionaries(
            st.tuples(
                st.sampled_from(["android", "java", "xml", "self-defined", "obfuscated"]),
                st.sampled_from(["android", "java", "xml", "self-defined", "obfuscated"]),
            ),
            st.integers(min_value=0, max_value=50),
            max_size=20,
        )
    )
    def test_rows_stochastic_property(self, table, raw):
        counts = TransitionCounts(FAMILY, Counter({k: v for k, v in raw.items() if v}))
        chain = build_chain(counts, table)
        sums = chain.probabilities.sum(axis=1)
        for s in sums:
            assert s == 0.0 or abs(s - 1.0) < 1e-9


class TestFeaturize:
    def test_family_dimension(self, table):
        chain = build_chain(TransitionCounts(FAMILY, Counter()), table)
        assert featurize(chain).values.shape == (64,)

    def test_package_dimension(self, table):
        counts = TransitionCounts(AbstractionMode.PACKAGE, Counter())
        assert featurize(build_chain(counts, table)).values.shape == (116281,)

    def test_zero_chain_zero_vector(self, table):
        chain = build_chain(TransitionCounts(FAMILY, Counter()), table)
        assert not featurize(chain).values.any()

    def test_row_major_order(self, table):
        counts = TransitionCounts(FAMILY, Counter({("android", "java"): 1}))
        chain = build_chain(counts, table)
        vec = featurize(chain).values
        i = chain.states.index("android")
        j = chain.states.index("java")
        assert vec[i * len(chain.states) + j] == 1.0

    def test_injective_on_distinct_chains(self, table):
        c1 = build_chain(TransitionCounts(FAMILY, Counter({("android", "java"): 1})), table)
        c2 = build_chain(TransitionCounts(FAMILY, Counter({("java", "android"): 1})), table)
        assert not np.array_equal(featurize(c1).values, featurize(c2).values)

    def test_entries_in_unit_interval(self, table):
        counts = TransitionCounts(
            FAMILY, Counter({("android", "java"): 3, ("android", "xml"): 1})
        )
        vec = featurize(build_chain(counts, table)).values
        assert np.all(vec >= 0.0) and np.all(vec <= 1.0)


class TestMatrixIO:
    def _sample(self):
        matrix = np.array([[0.5, 0.25, 0.0, 0.25], [0.0, 1.0, 0.0, 0.0]])
        return matrix, ["app1", "app2"], ["malware", "benign"], [2013, 2014]

    def test_csv_roundtrip(self, tmp_path):
        matrix, ids, labels, years = self._sample()
        path = tmp_path / "features.csv"
        save_feature_matrix(path, matrix, ids, labels, years, FAMILY, ("a", "b"))
        loaded, meta = load_feature_matrix(path)
        assert np.array_equal(loaded, matrix)
        assert meta["app_ids"] == ids
        assert meta["labels"] == labels
        assert meta["years"] == years
        assert meta["state_list_hash"] == hash_states(("a", "b"))

    def test_csv_header(self, tmp_path):
        matrix, ids, labels, years = self._sample()
        path = tmp_path / "features.csv"
        save_feature_matrix(path, matrix, ids, labels, years, FAMILY, ("a", "b"))
        header = path.read_text().splitlines()[0]
        assert header == "app_id,label,f0,f1,f2,f3"

    def test_npy_roundtrip(self, tmp_path):
        matrix, ids, labels, years = self._sample()
        path = tmp_path / "features.npy"
        save_feature_matrix(path, matrix, ids, labels, years, FAMILY, ("a", "b"))
        loaded, meta = load_feature_matrix(path)
        assert np.array_equal(loaded, matrix)
        assert meta["dimension"] == 4

    def test_deterministic_bytes(self, tmp_path):
        matrix, ids, labels, years = self._sample()
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (p1, p2):
            save_feature_matrix(p, matrix, ids, labels, years, FAMILY, ("a", "b"))
        assert p1.read_bytes() == p2.read_bytes()

    def test_csv_dimension_cap(self, tmp_path):
        big = np.zeros((1, 100_001))
        with pytest.raises(ValueError):
            save_feature_matrix(
                tmp_path / "f.csv", big, ["a"], ["benign"], [None], FAMILY, ("s",)
            )
