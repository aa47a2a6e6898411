"""Attention layer correlating word features with topology features.

Per user: coefficients e_ij = relu(w_i * beta_ij * t_j), softmax over the
word index i, weighted node embedding t'_j = t_j * sum_i alpha_ij w_i,
then x_u = concat(w_u, t'_u).
"""

from __future__ import annotations

import numpy as np

from . import autodiff as ad


class AttentionParams:
    """Learnable d_w x d_t matrix of per-(word-dim, topology-dim) scalars."""

    def __init__(self, d_w, d_t, rng=None):
        rng = rng or np.random.default_rng(0)
        # 0.1 scale keeps initial coefficients in ReLU's active region
        self.beta = ad.Tensor(ad.glorot_uniform((d_w, d_t), rng, scale=0.1),
                              requires_grad=True)

    @property
    def shape(self):
        return self.beta.shape

    def parameters(self):
        return [self.beta]


def attention_coefficients(w, t, params: AttentionParams):
    """e_ij = relu(w_i * beta_ij * t_j) over the (word, topology) outer product."""
    w = np.asarray(w, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if params.shape != (w.shape[0], t.shape[0]):
        raise ValueError(
            f"beta shape {params.shape} does not match (d_w, d_t)=({w.shape[0]}, {t.shape[0]})")
    return np.maximum(w[:, None] * params.beta.data * t[None, :], 0.0)


def attention_weights(e):
    """Column softmax of the coefficient matrix (normalizes over the word index)."""
    e = np.asarray(e, dtype=np.float64)
    shifted = e - e.max(axis=0, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=0, keepdims=True)


def weighted_node_embedding(alpha, w, t):
    """t'_j = t_j * sum_i alpha_ij w_i."""
    alpha = np.asarray(alpha)
    w = np.asarray(w)
    t = np.asarray(t)
    return t * (alpha * w[:, None]).sum(axis=0)


def fuse(w_u, t_prime):
    """Final user embedding x_u = concat(w_u, t'_u)."""
    return np.concatenate([np.asarray(w_u), np.asarray(t_prime)])


def attend_user(w, t, params: AttentionParams):
    """Full per-user attention path on plain arrays (no gradient tracking).

    Uses the ratio form sum_i(exp(e_ij) w_i) / sum_k exp(e_kj), identical to
    normalizing alpha first; with beta = 0 it degenerates exactly to
    t_j * mean(w) bit-for-bit.
    """
    w = np.asarray(w, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    e = attention_coefficients(w, t, params)
    ex = np.exp(e - e.max(axis=0, keepdims=True))
    coef = np.empty(t.shape[0])
    for j in range(t.shape[0]):
        col = np.ascontiguousarray(ex[:, j])
        coef[j] = np.add.reduce(col * w) / np.add.reduce(col)
    return fuse(w, t * coef)


def fused_embeddings(word_mat, topo, params: AttentionParams, use_attention=True):
    """Batched differentiable fusion for all users at once.

    word_mat: Tensor/array N x d_w, topo: Tensor N x d_t. Returns a Tensor
    N x (d_w + d_t). With use_attention=False, raw topology embeddings are
    concatenated instead (the no-attention variant).
    """
    if not isinstance(word_mat, ad.Tensor):
        word_mat = ad.Tensor(word_mat)
    if not isinstance(topo, ad.Tensor):
        topo = ad.Tensor(topo)
    if not use_attention:
        return ad.concat([word_mat, topo], axis=1)
    n, d_w = word_mat.shape
    d_t = topo.shape[1]
    if params.shape != (d_w, d_t):
        raise ValueError(
            f"beta shape {params.shape} does not match (d_w, d_t)=({d_w}, {d_t})")
    beta = params.beta
    w, t, b = word_mat.data, topo.data, beta.data

    # Single fused op with an analytic backward: the generic elementwise graph
    # would materialize many (n, d_w, d_t) gradient buffers per epoch.
    s = np.einsum("ui,ij,uj->uij", w, b, t, optimize=True)
    active = s > 0.0
    e = np.where(active, s, 0.0)
    ex = np.exp(e - e.max(axis=1, keepdims=True))
    alpha = ex / ex.sum(axis=1, keepdims=True)
    coeff = np.einsum("uij,ui->uj", alpha, w, optimize=True)
    out_data = np.concatenate([w, t * coeff], axis=1)

    out = ad.Tensor(out_data, ad._needs_grad(word_mat, topo, beta),
                    (word_mat, topo, beta))
    if out.requires_grad:
        def bw(grad):
            g_w_direct = grad[:, :d_w]
            g_tp = grad[:, d_w:]
            g_coeff = g_tp * t
            g_alpha = np.einsum("uj,ui->uij", g_coeff, w, optimize=True)
            g_e = alpha * (g_alpha - (alpha * g_alpha).sum(axis=1, keepdims=True))
            g_s = np.where(active, g_e, 0.0)
            if word_mat.requires_grad:
                word_mat._accumulate(
                    g_w_direct
                    + np.einsum("uij,uj->ui", alpha, g_coeff, optimize=True)
                    + np.einsum("uij,ij,uj->ui", g_s, b, t, optimize=True))
            if topo.requires_grad:
                topo._accumulate(
                    g_tp * coeff
                    + np.einsum("uij,ij,ui->uj", g_s, b, w, optimize=True))
            if beta.requires_grad:
                beta._accumulate(np.einsum("uij,ui,uj->ij", g_s, w, t, optimize=True))
        out._backward = bw
    return out
