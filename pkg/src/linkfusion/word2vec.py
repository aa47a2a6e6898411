"""Skip-gram word embeddings with negative sampling.

The inner SGD loop runs in a compiled Cython kernel when the extension is
available, otherwise in a pure-Python transliteration with identical
arithmetic; `scripts/benchmark_kernels.py` compares the two.
"""

from __future__ import annotations

import numpy as np

try:
    from . import _sgns_cy as _kernel
except ImportError:  # extension not built; fall back to pure Python
    from . import _sgns_py as _kernel

from .text import Corpus, WordEmbeddingTable

KERNEL_NAME = _kernel.KERNEL_NAME


def _build_pairs(doc_ids, window_size):
    centers, contexts = [], []
    for tokens in doc_ids:
        n = len(tokens)
        for i in range(n):
            lo = max(0, i - window_size)
            hi = min(n, i + window_size + 1)
            for j in range(lo, hi):
                if j != i:
                    centers.append(tokens[i])
                    contexts.append(tokens[j])
    return (np.asarray(centers, dtype=np.int64),
            np.asarray(contexts, dtype=np.int64))


def _negative_table(counts):
    """Unigram^0.75 cumulative distribution for negative draws."""
    probs = counts.astype(np.float64) ** 0.75
    probs /= probs.sum()
    return np.cumsum(probs)


def train_word_embeddings(corpus: Corpus, d=16, epochs=5, window_size=5,
                          negatives=5, seed=0, lr=0.025):
    """Train a WordEmbeddingTable on the corpus; deterministic per seed."""
    if d < 2:
        raise ValueError(f"embedding dimension must be >= 2, got {d}")
    if not corpus.documents:
        raise ValueError("corpus is empty")
    vocab = corpus.vocabulary
    if len(vocab) < 2:
        raise ValueError(f"vocabulary must have >= 2 words, got {len(vocab)}")

    doc_ids = [[vocab[t] for t in tokens] for _, _, _, tokens in corpus.documents]
    counts = np.zeros(len(vocab), dtype=np.int64)
    for ids in doc_ids:
        for w in ids:
            counts[w] += 1

    rng = np.random.default_rng(seed)
    w_in = rng.uniform(-0.5 / d, 0.5 / d, size=(len(vocab), d))
    w_out = np.zeros((len(vocab), d))

    centers, contexts = _build_pairs(doc_ids, window_size)
    cdf = _negative_table(counts)
    for _ in range(epochs):
        negs = np.searchsorted(cdf, rng.random((len(centers), negatives))).astype(np.int64)
        _kernel.sgns_train(w_in, w_out, centers, contexts,
                           np.ascontiguousarray(negs), lr)

    vectors = {word: w_in[idx].copy() for word, idx in vocab.items()}
    return WordEmbeddingTable(vectors=vectors, dim=d)
