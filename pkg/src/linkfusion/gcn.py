"""Two-layer graph convolutional encoder producing per-node topology embeddings."""

from __future__ import annotations

import numpy as np

from . import autodiff as ad


class GcnModel:
    """Trainable node lookup H0 followed by two propagation layers.

    Layer widths chain d_t0 -> d_t1 -> d_t; ReLU plus dropout after the
    first layer only, linear final layer.
    """

    def __init__(self, node_count, d_t0=64, d_t1=64, d_t=16, dropout_p=0.5, rng=None):
        rng = rng or np.random.default_rng(0)
        self.node_count = node_count
        self.dropout_p = dropout_p
        self.h0 = ad.Tensor(ad.glorot_uniform((node_count, d_t0), rng), requires_grad=True)
        self.w0 = ad.Tensor(ad.glorot_uniform((d_t0, d_t1), rng), requires_grad=True)
        self.w1 = ad.Tensor(ad.glorot_uniform((d_t1, d_t), rng), requires_grad=True)

    @property
    def d_t(self):
        return self.w1.shape[1]

    def parameters(self):
        return [self.h0, self.w0, self.w1]


def gcn_forward(model: GcnModel, norm_adj, training=False, seed=0):
    """Propagate: H2 = S relu(S H0 W0) W1 with S the normalized adjacency.

    Row u of the result is the topology embedding of node u.
    """
    norm_adj = np.asarray(norm_adj)
    if norm_adj.shape != (model.node_count, model.node_count):
        raise ValueError(
            f"normalized adjacency shape {norm_adj.shape} does not match "
            f"node count {model.node_count}")
    s = ad.Tensor(norm_adj)
    h1 = ad.relu(ad.matmul(ad.matmul(s, model.h0), model.w0))
    h1 = ad.dropout(h1, model.dropout_p, training=training, seed=seed)
    return ad.matmul(ad.matmul(s, h1), model.w1)


def node_embedding(model: GcnModel, norm_adj, user, training=False, seed=0):
    """Topology embedding t_u (row u of the forward pass), as a numpy vector."""
    if not 0 <= user < model.node_count:
        raise IndexError(f"user {user} out of range [0,{model.node_count})")
    return gcn_forward(model, norm_adj, training=training, seed=seed).data[user]
