"""Ranking metrics: sampled/exact AUC, KS statistic, NDCG@K, MAP@K, paired t-test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass
class ScoredEvaluation:
    """Scores for test-set links (pos) and non-existent links (neg)."""

    pos_scores: np.ndarray
    neg_scores: np.ndarray

    def __post_init__(self):
        self.pos_scores = np.asarray(self.pos_scores, dtype=np.float64)
        self.neg_scores = np.asarray(self.neg_scores, dtype=np.float64)
        if self.pos_scores.size == 0 or self.neg_scores.size == 0:
            raise ValueError("both score lists must be non-empty")
        if not (np.isfinite(self.pos_scores).all() and np.isfinite(self.neg_scores).all()):
            raise ValueError("scores must be finite")


@dataclass
class RankedPredictions:
    """(pair, score, relevance) sorted by descending score, ties by pair."""

    items: list  # [( (u,q), score, rel ), ...]

    def __post_init__(self):
        scores = [s for _, s, _ in self.items]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError("scores must be non-increasing")

    @property
    def relevance(self):
        return [rel for _, _, rel in self.items]

    def __len__(self):
        return len(self.items)


def rank_predictions(candidates, scores, positives):
    """Build RankedPredictions from parallel candidate/score lists."""
    positives = set(positives)
    order = sorted(range(len(candidates)), key=lambda i: (-scores[i], candidates[i]))
    items = [(candidates[i], float(scores[i]), int(candidates[i] in positives))
             for i in order]
    return RankedPredictions(items=items)


def auc_sampled(ev: ScoredEvaluation, n, seed):
    """n random (pos, neg) score comparisons: (wins + 0.5 ties) / n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    pos = ev.pos_scores[rng.integers(ev.pos_scores.size, size=n)]
    neg = ev.neg_scores[rng.integers(ev.neg_scores.size, size=n)]
    wins = np.count_nonzero(pos > neg)
    ties = np.count_nonzero(pos == neg)
    return (wins + 0.5 * ties) / n


def auc_from_counts(n_wins, n_ties, n):
    return (n_wins + 0.5 * n_ties) / n


def auc_exact(ev: ScoredEvaluation):
    """Exact rank AUC over all pos x neg pairs (ties count half)."""
    pooled = np.concatenate([ev.pos_scores, ev.neg_scores])
    ranks = stats.rankdata(pooled)
    n_pos = ev.pos_scores.size
    n_neg = ev.neg_scores.size
    rank_sum = ranks[:n_pos].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def ks_statistic(ev: ScoredEvaluation):
    """Max gap between the two empirical CDFs at the pooled sample points."""
    pos = np.sort(ev.pos_scores)
    neg = np.sort(ev.neg_scores)
    points = np.concatenate([pos, neg])
    f = np.searchsorted(pos, points, side="right") / pos.size
    g = np.searchsorted(neg, points, side="right") / neg.size
    return float(np.abs(f - g).max())


def ndcg_at_k(ranked: RankedPredictions, K):
    """Binary-relevance NDCG with IDCG from the ideal reordering, truncated at K."""
    if K <= 0:
        raise ValueError(f"K must be positive, got {K}")
    if K > len(ranked):
        raise ValueError(f"K={K} exceeds ranking length {len(ranked)}")
    rel = np.asarray(ranked.relevance)
    total_relevant = int(rel.sum())
    if total_relevant == 0:
        return 0.0
    discounts = 1.0 / np.log2(np.arange(2, K + 2))
    dcg = float((rel[:K] * discounts).sum())
    idcg = float(discounts[:min(K, total_relevant)].sum())
    return dcg / idcg


def map_at_k(ranked: RankedPredictions, K, test_size):
    """Average precision at K: sum of Precision@n over hit positions, over min(K, test_size)."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if test_size < 1:
        raise ValueError(f"test_size must be >= 1, got {test_size}")
    rel = ranked.relevance[:K]
    hits = 0
    ap = 0.0
    for n, r in enumerate(rel, start=1):
        if r:
            hits += 1
            ap += hits / n
    return ap / min(K, test_size)


def paired_t_test(runs_a, runs_b):
    """Two-sided paired t-test; rejects degenerate (zero-variance) inputs."""
    a = np.asarray(runs_a, dtype=np.float64)
    b = np.asarray(runs_b, dtype=np.float64)
    if a.shape != b.shape or a.size < 2:
        raise ValueError("runs must have equal length >= 2")
    diff = a - b
    if np.allclose(diff.std(ddof=1), 0.0):
        raise ValueError("degenerate input: per-run differences have zero variance")
    t_stat, p_value = stats.ttest_rel(a, b)
    return {"t_stat": float(t_stat), "p_value": float(p_value)}
