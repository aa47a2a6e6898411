"""Social influence and weak-link features from an interaction log."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INTERACTION_KINDS = ("endorse", "vote", "comment", "follow_question", "answer")
_KIND_INDEX = {k: i for i, k in enumerate(INTERACTION_KINDS)}

SOCIAL_DIM = len(INTERACTION_KINDS)
WEAK_LINK_DIM = 2


@dataclass(frozen=True)
class InteractionLog:
    """Records (src, dst, kind, quality, timestamp); immutable after load."""

    records: tuple

    def __post_init__(self):
        for src, dst, kind, quality, _ in self.records:
            if src == dst:
                raise ValueError(f"self-interaction {src}->{dst} not allowed")
            if kind not in _KIND_INDEX:
                raise ValueError(f"unknown interaction kind {kind!r}")
            if quality < 0:
                raise ValueError(f"negative quality {quality}")


def load_interaction_file(path, cutoff_t):
    """Read `src<TAB>dst<TAB>kind<TAB>quality<TAB>timestamp`; keeps records up to cutoff_t."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            src, dst, kind, quality, ts = line.split("\t")
            ts = int(ts)
            if ts > cutoff_t:
                continue
            records.append((int(src), int(dst), kind, int(quality), ts))
    return InteractionLog(records=tuple(records))


def social_influence(log: InteractionLog, user):
    """Per-kind inbound interaction counts for `user`, ln(1+count) scaled."""
    counts = np.zeros(SOCIAL_DIM)
    for _, dst, kind, _, _ in log.records:
        if dst == user:
            counts[_KIND_INDEX[kind]] += 1
    return np.log1p(counts)


def weak_link(log: InteractionLog, u, q):
    """(quantity, quality) of u->q interactions, both ln(1+x) scaled."""
    if u == q:
        raise ValueError(f"weak_link requires distinct users, got u=q={u}")
    quantity = 0
    quality = 0
    for src, dst, _, qual, _ in log.records:
        if src == u and dst == q:
            quantity += 1
            quality += qual
    return np.array([math.log1p(quantity), math.log1p(quality)])


def all_social_influence(log: InteractionLog, node_count):
    """N x d_s matrix of social-influence vectors (vectorized over the log)."""
    counts = np.zeros((node_count, SOCIAL_DIM))
    for _, dst, kind, _, _ in log.records:
        if 0 <= dst < node_count:
            counts[dst, _KIND_INDEX[kind]] += 1
    return np.log1p(counts)


def weak_link_map(log: InteractionLog):
    """Dict (u,q) -> (quantity, quality) vector; absent pairs mean (0,0)."""
    quantity = {}
    quality = {}
    for src, dst, _, qual, _ in log.records:
        key = (src, dst)
        quantity[key] = quantity.get(key, 0) + 1
        quality[key] = quality.get(key, 0) + qual
    return {key: np.array([math.log1p(quantity[key]), math.log1p(quality[key])])
            for key in quantity}
