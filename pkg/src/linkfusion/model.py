"""MLP link scorer, cross-entropy training loop, ablation switches and ranking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .attention import AttentionParams, fused_embeddings
from .gcn import GcnModel, gcn_forward
from .graph import EdgeSplit, TemporalGraph, normalized_adjacency
from .interactions import SOCIAL_DIM, WEAK_LINK_DIM

EPS = 1e-12


@dataclass(frozen=True)
class AblationConfig:
    use_long: bool = True
    use_short: bool = True
    use_numeric: bool = True
    use_attention: bool = True

    def __post_init__(self):
        if not (self.use_long or self.use_short):
            raise ValueError("at least one of use_long/use_short must be enabled")

    @classmethod
    def variant(cls, name):
        table = {
            "full": cls(),
            "no-long": cls(use_long=False),
            "no-short": cls(use_short=False),
            "no-link": cls(use_numeric=False),
            "no-attention": cls(use_attention=False),
        }
        if name not in table:
            raise ValueError(f"unknown variant {name!r}; choose from {sorted(table)}")
        return table[name]


@dataclass
class Hyper:
    lr: float = 0.01
    l2: float = 5e-4
    dropout: float = 0.5
    epochs: int = 200
    seed: int = 0
    d_t0: int = 64
    d_t1: int = 64
    d_t: int = 16
    mlp_widths: tuple = (64, 32)


class Mlp:
    """Fully connected scorer: hidden ReLU layers, scalar sigmoid output."""

    def __init__(self, input_width, hidden_widths, rng):
        self.input_width = input_width
        widths = [input_width, *hidden_widths, 1]
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            self.weights.append(
                ad.Tensor(ad.glorot_uniform((fan_in, fan_out), rng), requires_grad=True))
            self.biases.append(ad.Tensor(np.zeros(fan_out), requires_grad=True))

    def parameters(self):
        return [*self.weights, *self.biases]

    def forward(self, x):
        """x: Tensor (B, input_width) -> probabilities Tensor (B,)."""
        if x.shape[1] != self.input_width:
            raise ValueError(
                f"MLP input width {x.shape[1]} does not match configured {self.input_width}")
        h = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = ad.add(ad.matmul(h, w), b)
            if i < len(self.weights) - 1:
                h = ad.relu(h)
        return ad.reshape(ad.sigmoid(h), (x.shape[0],))


def cross_entropy(predictions, labels):
    """Sum-form binary cross-entropy with probabilities clamped to [eps, 1-eps]."""
    predictions = np.asarray(predictions, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if predictions.shape != labels.shape:
        raise ValueError(
            f"length mismatch: {predictions.shape} predictions vs {labels.shape} labels")
    p = np.clip(predictions, EPS, 1.0 - EPS)
    return float(-(labels * np.log(p) + (1.0 - labels) * np.log(1.0 - p)).sum())


def _cross_entropy_graph(probs, labels):
    p = ad.clamp(probs, EPS, 1.0 - EPS)
    y = ad.Tensor(labels)
    one_minus_y = ad.Tensor(1.0 - labels)
    ll = ad.add(ad.mul(y, ad.log(p)),
                ad.mul(one_minus_y, ad.log(ad.sub(ad.Tensor(np.ones_like(labels)), p))))
    return ad.mul(ad.tensor_sum(ll), ad.Tensor(-1.0))


def build_word_matrix(profiles, node_count, ablation: AblationConfig):
    """Stack per-user interest vectors, zero-masking disabled halves.

    Profile layout is (short half, long half); masking keeps the width fixed
    so one architecture serves every ablation variant.
    """
    dims = {p.w_u.shape[0] for p in profiles.values()}
    if len(dims) != 1:
        raise ValueError(f"inconsistent profile dimensions: {sorted(dims)}")
    d_w = dims.pop()
    half = d_w // 2
    mat = np.zeros((node_count, d_w))
    for user, prof in profiles.items():
        mat[user] = prof.w_u
    if not ablation.use_short:
        mat[:, :half] = 0.0
    if not ablation.use_long:
        mat[:, half:] = 0.0
    return mat


def pair_numeric_features(social, weak_map, pairs, ablation: AblationConfig):
    """(B, d_s + d_l) matrix of [s_q, l_uq] rows; zeroed under the no-link variant."""
    out = np.zeros((len(pairs), SOCIAL_DIM + WEAK_LINK_DIM))
    if ablation.use_numeric:
        for i, (u, q) in enumerate(pairs):
            out[i, :SOCIAL_DIM] = social[q]
            wl = weak_map.get((u, q))
            if wl is not None:
                out[i, SOCIAL_DIM:] = wl
    return out


@dataclass
class LinkPredictor:
    """Trained model bundle; read-only scoring after training."""

    gcn: GcnModel
    attn: AttentionParams
    mlp: Mlp
    norm_adj: np.ndarray
    word_mat: np.ndarray
    social: np.ndarray
    weak_map: dict
    ablation: AblationConfig
    _x_eval: np.ndarray = field(default=None, repr=False)

    def user_embeddings(self):
        """Eval-mode fused embeddings x_u for all users (cached)."""
        if self._x_eval is None:
            topo = gcn_forward(self.gcn, self.norm_adj, training=False)
            x = fused_embeddings(ad.Tensor(self.word_mat), topo, self.attn,
                                 use_attention=self.ablation.use_attention)
            self._x_eval = x.data
        return self._x_eval

    def score_pairs(self, pairs):
        """Eval-mode probabilities for (u, q) candidate pairs."""
        x = self.user_embeddings()
        u_idx = np.fromiter((u for u, _ in pairs), dtype=np.intp, count=len(pairs))
        q_idx = np.fromiter((q for _, q in pairs), dtype=np.intp, count=len(pairs))
        numeric = pair_numeric_features(self.social, self.weak_map, pairs, self.ablation)
        feats = np.concatenate([x[u_idx], x[q_idx], numeric], axis=1)
        return self.mlp.forward(ad.Tensor(feats)).data

    def score_link(self, x_u, x_q, s_q, l_uq):
        """Single-pair score from explicit feature vectors."""
        if not self.ablation.use_numeric:
            s_q = np.zeros_like(s_q)
            l_uq = np.zeros_like(l_uq)
        feats = np.concatenate([x_u, x_q, s_q, l_uq])[None, :]
        return float(self.mlp.forward(ad.Tensor(feats)).data[0])


@dataclass
class TrainResult:
    predictor: LinkPredictor
    loss_trace: list


def train(graph: TemporalGraph, profiles, social, weak_map, split: EdgeSplit,
          ablation: AblationConfig = AblationConfig(), hyper: Hyper = None) -> TrainResult:
    """Full-batch training over train_pos + train_neg; deterministic per seed."""
    hyper = hyper or Hyper()
    if not split.train_pos or not split.train_neg:
        raise ValueError("degenerate split: empty train_pos or train_neg")

    rng = np.random.default_rng(hyper.seed)
    norm_adj = normalized_adjacency(graph)
    word_mat = build_word_matrix(profiles, graph.node_count, ablation)
    d_w = word_mat.shape[1]

    gcn = GcnModel(graph.node_count, d_t0=hyper.d_t0, d_t1=hyper.d_t1,
                   d_t=hyper.d_t, dropout_p=hyper.dropout, rng=rng)
    attn = AttentionParams(d_w, hyper.d_t, rng=rng)
    input_width = 2 * (d_w + hyper.d_t) + SOCIAL_DIM + WEAK_LINK_DIM
    mlp = Mlp(input_width, hyper.mlp_widths, rng)

    params = gcn.parameters() + mlp.parameters()
    if ablation.use_attention:
        params += attn.parameters()
    opt = ad.Adam(params, lr=hyper.lr, l2=hyper.l2)

    pairs = list(split.train_pos) + list(split.train_neg)
    labels = np.array([1.0] * len(split.train_pos) + [0.0] * len(split.train_neg))
    u_idx = np.array([u for u, _ in pairs], dtype=np.intp)
    q_idx = np.array([q for _, q in pairs], dtype=np.intp)
    numeric = ad.Tensor(pair_numeric_features(social, weak_map, pairs, ablation))
    word_t = ad.Tensor(word_mat)

    trace = []
    for epoch in range(hyper.epochs):
        drop_rng = np.random.default_rng([hyper.seed, epoch])
        topo = gcn_forward(gcn, norm_adj, training=True, seed=drop_rng)
        x = fused_embeddings(word_t, topo, attn, use_attention=ablation.use_attention)
        feats = ad.concat([ad.gather_rows(x, u_idx), ad.gather_rows(x, q_idx), numeric],
                          axis=1)
        probs = mlp.forward(feats)
        loss = _cross_entropy_graph(probs, labels)
        value = loss.item()
        if not np.isfinite(value):
            raise RuntimeError(f"non-finite training loss at epoch {epoch}")
        trace.append(value)
        loss.backward()
        opt.step()

    predictor = LinkPredictor(gcn=gcn, attn=attn, mlp=mlp, norm_adj=norm_adj,
                              word_mat=word_mat, social=social, weak_map=weak_map,
                              ablation=ablation)
    return TrainResult(predictor=predictor, loss_trace=trace)


def rank_candidates(predictor: LinkPredictor, candidates, K):
    """Top-K candidates by descending score; ties break by (src, dst)."""
    if not candidates:
        raise ValueError("empty candidate list")
    if K > len(candidates):
        raise ValueError(f"K={K} exceeds candidate count {len(candidates)}")
    scores = predictor.score_pairs(candidates)
    order = sorted(range(len(candidates)), key=lambda i: (-scores[i], candidates[i]))
    return [(candidates[i], float(scores[i])) for i in order[:K]]


CHECKPOINT_VERSION = 1


def save_checkpoint(path, predictor: LinkPredictor):
    """Write named parameter arrays plus layout metadata to an .npz container."""
    arrays = {
        "version": np.array(CHECKPOINT_VERSION),
        "gcn_h0": predictor.gcn.h0.data,
        "gcn_w0": predictor.gcn.w0.data,
        "gcn_w1": predictor.gcn.w1.data,
        "attn_beta": predictor.attn.beta.data,
        "ablation": np.array([predictor.ablation.use_long, predictor.ablation.use_short,
                              predictor.ablation.use_numeric, predictor.ablation.use_attention]),
        "mlp_widths": np.array([w.data.shape[1] for w in predictor.mlp.weights[:-1]]),
    }
    for i, (w, b) in enumerate(zip(predictor.mlp.weights, predictor.mlp.biases)):
        arrays[f"mlp_w{i}"] = w.data
        arrays[f"mlp_b{i}"] = b.data
    np.savez(path, **arrays)


def load_checkpoint(path, norm_adj, word_mat, social, weak_map):
    """Rebuild a LinkPredictor from a checkpoint plus its (re-derived) features."""
    with np.load(path) as data:
        version = int(data["version"])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        h0, w0, w1 = data["gcn_h0"], data["gcn_w0"], data["gcn_w1"]
        beta = data["attn_beta"]
        flags = data["ablation"].astype(bool)
        widths = tuple(int(w) for w in data["mlp_widths"])
        gcn = GcnModel(h0.shape[0], d_t0=h0.shape[1], d_t1=w0.shape[1], d_t=w1.shape[1])
        gcn.h0.data, gcn.w0.data, gcn.w1.data = h0, w0, w1
        attn = AttentionParams(beta.shape[0], beta.shape[1])
        attn.beta.data = beta
        mlp = Mlp(int(data["mlp_w0"].shape[0]), widths, np.random.default_rng(0))
        for i in range(len(widths) + 1):
            mlp.weights[i].data = data[f"mlp_w{i}"]
            mlp.biases[i].data = data[f"mlp_b{i}"]
    ablation = AblationConfig(use_long=bool(flags[0]), use_short=bool(flags[1]),
                              use_numeric=bool(flags[2]), use_attention=bool(flags[3]))
    return LinkPredictor(gcn=gcn, attn=attn, mlp=mlp, norm_adj=norm_adj,
                         word_mat=word_mat, social=social, weak_map=weak_map,
                         ablation=ablation)
