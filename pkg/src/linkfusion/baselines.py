"""Common Neighbors and PageRank baseline scorers."""

from __future__ import annotations

import numpy as np

from .graph import TemporalGraph


def common_neighbors(g: TemporalGraph, u, q):
    """Shared neighbors of u and q over symmetrized t-snapshot neighborhoods."""
    if u == q:
        raise ValueError("common_neighbors requires distinct nodes")
    for node in (u, q):
        if not 0 <= node < g.node_count:
            raise IndexError(f"node {node} out of range [0,{g.node_count})")
    return len(g.undirected_neighbors_t(u) & g.undirected_neighbors_t(q))


def common_neighbor_scores(g: TemporalGraph, candidates):
    """CN scores for a candidate pair list (precomputes neighbor sets once)."""
    nbrs = [set() for _ in range(g.node_count)]
    for a, b in g.edges_t:
        nbrs[a].add(b)
        nbrs[b].add(a)
    return np.array([float(len(nbrs[u] & nbrs[q])) for u, q in candidates])


def pagerank(g: TemporalGraph, damping=0.85, tol=1e-10, max_iter=1000):
    """Power iteration on the directed out-degree-normalized walk.

    Dangling mass is redistributed uniformly; converged when the L1 change
    drops below tol. The result sums to 1.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must lie in (0,1), got {damping}")
    n = g.node_count
    out_nbrs = [[] for _ in range(n)]
    for u, v in g.edges_t:
        out_nbrs[u].append(v)
    out_deg = np.array([len(x) for x in out_nbrs], dtype=np.float64)
    dangling = out_deg == 0

    # column-sparse transition as (src, dst) index arrays
    src = np.array([u for u, v in g.edges_t], dtype=np.intp)
    dst = np.array([v for u, v in g.edges_t], dtype=np.intp)

    pr = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        contrib = np.zeros(n)
        if len(src):
            np.add.at(contrib, dst, pr[src] / out_deg[src])
        dangling_mass = pr[dangling].sum() / n
        new = (1.0 - damping) / n + damping * (contrib + dangling_mass)
        residual = np.abs(new - pr).sum()
        pr = new
        if residual < tol:
            return pr
    raise RuntimeError(f"PageRank did not converge in {max_iter} iterations "
                       f"(residual {residual:.3e})")


def pagerank_link_score(pr, u, q):
    """Candidate u->q scored by destination importance pr[q]."""
    return float(pr[q])


def pagerank_scores(g: TemporalGraph, candidates, damping=0.85, tol=1e-10,
                    max_iter=1000):
    pr = pagerank(g, damping=damping, tol=tol, max_iter=max_iter)
    return np.array([pagerank_link_score(pr, u, q) for u, q in candidates])
