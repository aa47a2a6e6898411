import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkfusion.metrics import (RankedPredictions, ScoredEvaluation, auc_exact,
                                auc_from_counts, auc_sampled, ks_statistic, map_at_k,
                                ndcg_at_k, paired_t_test, rank_predictions)


def ranked_from_relevance(rels):
    n = len(rels)
    return RankedPredictions(items=[((0, i), float(n - i), rel)
                                    for i, rel in enumerate(rels)])


class TestAucSampled:
    def test_perfect_separation(self):
        ev = ScoredEvaluation(pos_scores=[2.0, 3.0], neg_scores=[0.5, 1.0])
        assert auc_sampled(ev, 1000, seed=0) == 1.0

    def test_formula(self):
        assert auc_from_counts(3, 2, 10) == 0.4

    def test_identical_distributions_near_half(self):
        rng = np.random.default_rng(0)
        scores = rng.normal(size=200)
        ev = ScoredEvaluation(pos_scores=scores[:100], neg_scores=scores[100:])
        assert abs(auc_sampled(ev, 100_000, seed=1) - auc_exact(ev)) < 0.02

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(2)
        ev = ScoredEvaluation(pos_scores=rng.normal(size=30), neg_scores=rng.normal(size=30))
        assert auc_sampled(ev, 1000, seed=5) == auc_sampled(ev, 1000, seed=5)

    def test_empty_side_errors(self):
        with pytest.raises(ValueError):
            ScoredEvaluation(pos_scores=[], neg_scores=[1.0])


class TestAucExact:
    def test_single_win(self):
        assert auc_exact(ScoredEvaluation(pos_scores=[2.0], neg_scores=[1.0])) == 1.0

    def test_pure_tie(self):
        assert auc_exact(ScoredEvaluation(pos_scores=[1.0], neg_scores=[1.0])) == 0.5

    def test_mixed_pairs(self):
        ev = ScoredEvaluation(pos_scores=[3.0, 1.0], neg_scores=[2.0])
        assert auc_exact(ev) == 0.5

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(1)
        pos = rng.integers(0, 5, size=20).astype(float)
        neg = rng.integers(0, 5, size=15).astype(float)
        brute = sum(1.0 if p > n else 0.5 if p == n else 0.0
                    for p in pos for n in neg) / (20 * 15)
        ev = ScoredEvaluation(pos_scores=pos, neg_scores=neg)
        assert abs(auc_exact(ev) - brute) < 1e-12


class TestKs:
    def test_identical_samples_zero(self):
        ev = ScoredEvaluation(pos_scores=[1.0, 2.0], neg_scores=[1.0, 2.0])
        assert ks_statistic(ev) == 0.0

    def test_separated_supports_one(self):
        ev = ScoredEvaluation(pos_scores=[5.0, 6.0], neg_scores=[1.0, 2.0])
        assert ks_statistic(ev) == 1.0

    def test_hand_cdf_case(self):
        ev = ScoredEvaluation(pos_scores=[1.0, 2.0], neg_scores=[2.0, 3.0])
        assert ks_statistic(ev) == 0.5

    def test_bounded(self):
        rng = np.random.default_rng(3)
        ev = ScoredEvaluation(pos_scores=rng.normal(size=40), neg_scores=rng.normal(size=30))
        assert 0.0 <= ks_statistic(ev) <= 1.0


class TestNdcg:
    def test_all_relevant_top(self):
        assert ndcg_at_k(ranked_from_relevance([1, 1, 0, 0]), K=2) == 1.0

    def test_no_relevant_in_top_k(self):
        assert ndcg_at_k(ranked_from_relevance([0, 0, 1]), K=2) == 0.0

    def test_hand_value(self):
        value = ndcg_at_k(ranked_from_relevance([0, 1]), K=2)
        assert abs(value - 1.0 / np.log2(3)) < 1e-12
        assert abs(value - 0.63093) < 1e-5

    def test_no_relevant_anywhere_zero(self):
        assert ndcg_at_k(ranked_from_relevance([0, 0, 0]), K=3) == 0.0

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            ndcg_at_k(ranked_from_relevance([1]), K=0)
        with pytest.raises(ValueError):
            ndcg_at_k(ranked_from_relevance([1]), K=2)

    def test_in_unit_interval(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            rels = rng.integers(0, 2, size=10).tolist()
            assert 0.0 <= ndcg_at_k(ranked_from_relevance(rels), K=5) <= 1.0


class TestMap:
    def test_all_relevant(self):
        assert map_at_k(ranked_from_relevance([1, 1, 1]), K=3, test_size=5) == 1.0

    def test_zero_hits(self):
        assert map_at_k(ranked_from_relevance([0, 0, 0]), K=3, test_size=5) == 0.0

    def test_hand_value(self):
        value = map_at_k(ranked_from_relevance([1, 0, 1]), K=3, test_size=5)
        assert abs(value - (1.0 + 2.0 / 3.0) / 3.0) < 1e-12
        assert abs(value - 0.55556) < 1e-5

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            map_at_k(ranked_from_relevance([1]), K=0, test_size=1)
        with pytest.raises(ValueError):
            map_at_k(ranked_from_relevance([1]), K=1, test_size=0)

    def test_in_unit_interval(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            rels = rng.integers(0, 2, size=12).tolist()
            test_size = max(1, sum(rels))
            assert 0.0 <= map_at_k(ranked_from_relevance(rels), K=6, test_size=test_size) <= 1.0


class TestPairedTTest:
    def test_equal_runs_rejected(self):
        with pytest.raises(ValueError):
            paired_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])

    def test_constant_difference_rejected(self):
        with pytest.raises(ValueError):
            paired_t_test([2.0, 3.0, 4.0], [1.0, 2.0, 3.0])

    def test_hand_computed_t(self):
        a = [1.0, 1.0, 1.0, 1.0, 3.0]
        b = [0.0] * 5
        result = paired_t_test(a, b)
        diff = np.array(a)
        expected_t = diff.mean() / (diff.std(ddof=1) / np.sqrt(5))
        assert abs(result["t_stat"] - expected_t) < 1e-10

    def test_antisymmetry(self):
        a = [1.0, 2.0, 4.0, 3.0]
        b = [0.5, 2.5, 1.0, 2.0]
        r1 = paired_t_test(a, b)
        r2 = paired_t_test(b, a)
        assert abs(r1["t_stat"] + r2["t_stat"]) < 1e-12
        assert abs(r1["p_value"] - r2["p_value"]) < 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            paired_t_test([1.0], [1.0, 2.0])


class TestRankPredictions:
    def test_sorted_descending_with_tie_rule(self):
        candidates = [(2, 1), (0, 1), (1, 0)]
        scores = [0.5, 0.5, 0.9]
        ranked = rank_predictions(candidates, scores, positives={(1, 0)})
        assert [item[0] for item in ranked.items] == [(1, 0), (0, 1), (2, 1)]
        assert ranked.relevance == [1, 0, 0]

    def test_rejects_increasing_scores(self):
        with pytest.raises(ValueError):
            RankedPredictions(items=[((0, 1), 0.1, 0), ((0, 2), 0.9, 1)])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=3, max_size=20),
       st.lists(st.integers(-50, 50), min_size=3, max_size=20))
def test_metrics_invariant_under_monotone_transform(pos, neg):
    # integer grid keeps the tie structure exact under the transform
    pos = np.asarray(pos, dtype=np.float64)
    neg = np.asarray(neg, dtype=np.float64)
    ev = ScoredEvaluation(pos_scores=pos, neg_scores=neg)
    transformed = ScoredEvaluation(pos_scores=np.exp(0.05 * pos),
                                   neg_scores=np.exp(0.05 * neg))
    assert abs(auc_exact(ev) - auc_exact(transformed)) < 1e-12
    assert abs(ks_statistic(ev) - ks_statistic(transformed)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=2, max_size=15))
def test_ndcg_map_depend_only_on_relevance_order(rels):
    ranked_a = ranked_from_relevance(rels)
    # different but order-preserving scores
    n = len(rels)
    ranked_b = RankedPredictions(items=[((0, i), float(2 ** (n - i)), rel)
                                        for i, rel in enumerate(rels)])
    k = max(1, n // 2)
    assert ndcg_at_k(ranked_a, k) == ndcg_at_k(ranked_b, k)
    assert map_at_k(ranked_a, k, 3) == map_at_k(ranked_b, k, 3)
