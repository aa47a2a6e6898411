"""Directed temporal graph, two-snapshot storage, edge splitting and negative sampling."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TemporalGraph:
    """Directed graph observed at time t with a later superset snapshot at t'.

    Immutable after construction; safe for concurrent reads.
    """

    node_count: int
    edges_t: frozenset
    edges_t_prime: frozenset
    ignored_records: int = 0

    def __post_init__(self):
        if not self.edges_t <= self.edges_t_prime:
            raise ValueError("edges at t must be a subset of edges at t'")
        for u, v in self.edges_t_prime:
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u},{v}) endpoint out of range [0,{self.node_count})")

    @property
    def nodes(self):
        return range(self.node_count)

    def new_links(self):
        """Links that appeared between t and t' (the prediction targets)."""
        return self.edges_t_prime - self.edges_t

    def out_neighbors_t(self, u):
        return {v for (a, v) in self.edges_t if a == u}

    def undirected_neighbors_t(self, u):
        nbrs = set()
        for a, b in self.edges_t:
            if a == u:
                nbrs.add(b)
            elif b == u:
                nbrs.add(a)
        return nbrs


@dataclass
class EdgeSplit:
    train_pos: list = field(default_factory=list)
    train_neg: list = field(default_factory=list)
    test_pos: list = field(default_factory=list)
    test_neg: list = field(default_factory=list)


def build_graph(edge_records, cutoff_t, cutoff_t_prime):
    """Build the two snapshots from (src, dst, timestamp) records.

    Records at or before cutoff_t populate the t snapshot; at or before
    cutoff_t_prime the t' snapshot. Self-loops are dropped, duplicates
    collapse, later records are counted but ignored.
    """
    if not edge_records:
        raise ValueError("empty edge record list")
    if not cutoff_t < cutoff_t_prime:
        raise ValueError(f"cutoff_t ({cutoff_t}) must precede cutoff_t_prime ({cutoff_t_prime})")

    edges_t = set()
    edges_tp = set()
    ignored = 0
    max_node = -1
    for src, dst, ts in edge_records:
        max_node = max(max_node, src, dst)
        if src == dst:
            continue
        if ts > cutoff_t_prime:
            ignored += 1
            continue
        edges_tp.add((src, dst))
        if ts <= cutoff_t:
            edges_t.add((src, dst))
    if ignored:
        warnings.warn(f"{ignored} edge record(s) beyond cutoff_t_prime ignored")
    return TemporalGraph(
        node_count=max_node + 1,
        edges_t=frozenset(edges_t),
        edges_t_prime=frozenset(edges_tp),
        ignored_records=ignored,
    )


def load_edge_file(path, cutoff_t, cutoff_t_prime):
    """Read tab-separated `src<TAB>dst<TAB>timestamp` lines; `#` starts a comment."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            src, dst, ts = line.split("\t")
            records.append((int(src), int(dst), int(ts)))
    return build_graph(records, cutoff_t, cutoff_t_prime)


def adjacency_with_self_loops(g: TemporalGraph) -> np.ndarray:
    """Symmetrized t-snapshot adjacency plus the identity (A_sym + I)."""
    n = g.node_count
    a = np.eye(n)
    for u, v in g.edges_t:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def normalized_adjacency(g: TemporalGraph) -> np.ndarray:
    """Symmetric normalization D^-1/2 (A_sym + I) D^-1/2 of the t snapshot."""
    a = adjacency_with_self_loops(g)
    d_inv_sqrt = 1.0 / np.sqrt(a.sum(axis=1))
    return a * d_inv_sqrt[:, None] * d_inv_sqrt[None, :]


def _sample_negatives(rng, g, count, forbidden, max_tries_factor=200):
    """Uniform pairs absent from edges_t_prime and from `forbidden`."""
    negs = []
    existing = g.edges_t_prime
    tries = 0
    limit = max_tries_factor * max(count, 1)
    n = g.node_count
    while len(negs) < count:
        if tries >= limit:
            raise RuntimeError(
                f"negative sampling exhausted after {tries} tries "
                f"({len(negs)}/{count} found); graph too dense")
        tries += 1
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        pair = (u, v)
        if u == v or pair in existing or pair in forbidden:
            continue
        forbidden.add(pair)
        negs.append(pair)
    return negs


def split_new_links(g: TemporalGraph, test_fraction, neg_per_pos, seed) -> EdgeSplit:
    """Split the new links (t' minus t) into train/test and sample matching negatives.

    Deterministic per seed; negatives are disjoint between train and test and
    never present at t'.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must lie in (0,1), got {test_fraction}")
    if neg_per_pos < 1:
        raise ValueError(f"neg_per_pos must be >= 1, got {neg_per_pos}")
    new = sorted(g.new_links())
    if not new:
        raise ValueError("no new links between t and t'; nothing to predict")

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(new))
    n_test = max(1, int(round(test_fraction * len(new))))
    if n_test >= len(new):
        n_test = len(new) - 1
    if n_test < 1:
        raise ValueError("too few new links to split")
    shuffled = [new[i] for i in order]
    test_pos = shuffled[:n_test]
    train_pos = shuffled[n_test:]

    used = set()
    train_neg = _sample_negatives(rng, g, neg_per_pos * len(train_pos), used)
    test_neg = _sample_negatives(rng, g, neg_per_pos * len(test_pos), used)
    return EdgeSplit(train_pos=train_pos, train_neg=train_neg,
                     test_pos=test_pos, test_neg=test_neg)
