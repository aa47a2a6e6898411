"""Synthetic planted-community dataset with text, interaction, and temporal signals.

Produces the edge/activity/interaction file formats consumed by the loaders:
community-biased links for two snapshots, per-community long-term vocabulary
with a shared hot-topic pool in each user's most recent documents, and
weak-link interactions that raise the probability of a new link forming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

CUTOFF_T = 1000
CUTOFF_T_PRIME = 2000

_KINDS = ("endorse", "vote", "comment", "follow_question", "answer")
_COMMON_WORDS = ("the", "and", "for", "with")


@dataclass
class SynthConfig:
    n_nodes: int = 1000
    communities: int = 4
    p_in: float = 0.02
    p_out: float = 0.002
    vocab_per_community: int = 40
    docs_per_user: int = 10
    hot_topic_count: int = 15
    interaction_rate: float = 1.0
    new_link_weak_link_bias: float = 0.3
    new_link_rate: float = 0.3  # thinning of (p_in, p_out) for the t->t' window
    tokens_per_doc: int = 8
    seed: int = 0

    def validate(self):
        if not self.n_nodes >= self.communities >= 1:
            raise ValueError("need n_nodes >= communities >= 1")
        if not self.p_in > self.p_out:
            raise ValueError("p_in must exceed p_out")
        for name in ("p_in", "p_out", "interaction_rate", "new_link_weak_link_bias",
                     "new_link_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0,1], got {value}")


def _pair_prob_matrix(cfg, communities):
    same = communities[:, None] == communities[None, :]
    p = np.where(same, cfg.p_in, cfg.p_out)
    np.fill_diagonal(p, 0.0)
    return p


def generate(cfg: SynthConfig, out_dir):
    """Write edges.tsv / activities.tsv / interactions.tsv; byte-identical per seed.

    Returns a dict with the file paths, the snapshot cutoffs and the ground
    truth (community assignment, interacting pairs, new links).
    """
    cfg.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_nodes

    communities = np.arange(n) % cfg.communities
    p_link = _pair_prob_matrix(cfg, communities)

    expected_new = cfg.new_link_rate * p_link.sum()
    if expected_new < 1.0:
        raise ValueError(
            f"infeasible rates: expected new link count {expected_new:.3f} < 1")

    adj_t = rng.random((n, n)) < p_link
    np.fill_diagonal(adj_t, False)

    interact = (rng.random((n, n)) < cfg.interaction_rate * p_link) & ~adj_t
    np.fill_diagonal(interact, False)

    p_new = cfg.new_link_rate * p_link + cfg.new_link_weak_link_bias * interact
    new_links = (rng.random((n, n)) < p_new) & ~adj_t
    np.fill_diagonal(new_links, False)

    edge_path = out_dir / "edges.tsv"
    with open(edge_path, "w", encoding="utf-8") as fh:
        fh.write("# src\tdst\ttimestamp\n")
        for u, v in zip(*np.nonzero(adj_t)):
            ts = int(rng.integers(0, CUTOFF_T + 1))
            fh.write(f"{u}\t{v}\t{ts}\n")
        for u, v in zip(*np.nonzero(new_links)):
            ts = int(rng.integers(CUTOFF_T + 1, CUTOFF_T_PRIME + 1))
            fh.write(f"{u}\t{v}\t{ts}\n")

    inter_path = out_dir / "interactions.tsv"
    with open(inter_path, "w", encoding="utf-8") as fh:
        fh.write("# src\tdst\tkind\tquality\ttimestamp\n")
        for u, v in zip(*np.nonzero(interact)):
            for _ in range(int(rng.integers(1, 4))):
                kind = _KINDS[int(rng.integers(len(_KINDS)))]
                quality = int(rng.geometric(1.0 / 3.0) - 1)
                ts = int(rng.integers(0, CUTOFF_T + 1))
                fh.write(f"{u}\t{v}\t{kind}\t{quality}\t{ts}\n")

    vocab = [[f"c{c}w{i}" for i in range(cfg.vocab_per_community)]
             for c in range(cfg.communities)]
    hot = [f"hot{i}" for i in range(cfg.hot_topic_count)]

    act_path = out_dir / "activities.tsv"
    recent_start = cfg.docs_per_user - max(1, math.ceil(0.10 * cfg.docs_per_user))
    with open(act_path, "w", encoding="utf-8") as fh:
        fh.write("# user\ttimestamp\ttopic_tag\ttext\n")
        for user in range(n):
            words = vocab[communities[user]]
            for doc in range(cfg.docs_per_user):
                ts = 1 + doc * (CUTOFF_T - 1) // max(1, cfg.docs_per_user)
                tokens = [words[int(i)] for i in
                          rng.integers(len(words), size=cfg.tokens_per_doc)]
                if doc >= recent_start and hot:
                    half = cfg.tokens_per_doc // 2
                    tokens[:half] = [hot[int(i)] for i in rng.integers(len(hot), size=half)]
                tokens += [_COMMON_WORDS[int(i)] for i in
                           rng.integers(len(_COMMON_WORDS), size=2)]
                fh.write(f"{user}\t{ts}\t-\t{' '.join(tokens)}\n")

    return {
        "edge_file": edge_path,
        "activity_file": act_path,
        "interaction_file": inter_path,
        "cutoff_t": CUTOFF_T,
        "cutoff_t_prime": CUTOFF_T_PRIME,
        "communities": communities,
        "interacting_pairs": set(zip(*(arr.tolist() for arr in np.nonzero(interact)))),
        "new_links": set(zip(*(arr.tolist() for arr in np.nonzero(new_links)))),
    }
