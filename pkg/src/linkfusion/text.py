"""TF-IDF keyword extraction and per-user interest profiles.

Each user gets W long-window and W short-window keywords scored by TF-IDF
over per-topic aggregate documents, then embedded and concatenated into a
fixed-length interest vector (short half first).
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field

import numpy as np

PAD_TOKEN = "<pad>"

_PUNCT = string.punctuation


def tokenize(text):
    """Lowercase, whitespace split, strip surrounding punctuation. No stemming."""
    tokens = []
    for raw in text.lower().split():
        tok = raw.strip(_PUNCT)
        if tok:
            tokens.append(tok)
    return tokens


@dataclass
class Corpus:
    """Documents: (user_id, timestamp, topic_tag, tokens). Immutable after build."""

    documents: list
    vocabulary: dict = field(default_factory=dict)
    doc_freq: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.vocabulary:
            for _, _, _, tokens in self.documents:
                for tok in tokens:
                    if tok not in self.vocabulary:
                        self.vocabulary[tok] = len(self.vocabulary)
        if not self.doc_freq:
            for _, _, _, tokens in self.documents:
                for tok in set(tokens):
                    self.doc_freq[tok] = self.doc_freq.get(tok, 0) + 1

    @property
    def num_documents(self):
        return len(self.documents)

    def user_documents(self, user):
        """The user's documents in stable chronological order."""
        index = getattr(self, "_user_index", None)
        if index is None:
            index = {}
            for i, (u, ts, tag, toks) in enumerate(self.documents):
                index.setdefault(u, []).append((ts, i, tag, toks))
            for docs in index.values():
                docs.sort(key=lambda rec: (rec[0], rec[1]))
            object.__setattr__(self, "_user_index", index)
        return [(tag, toks) for _, _, tag, toks in index.get(user, [])]


def load_activity_file(path, cutoff_t):
    """Read `user<TAB>timestamp<TAB>topic_tag<TAB>free text` lines up to cutoff_t."""
    documents = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            user, ts, tag, text = line.split("\t", 3)
            ts = int(ts)
            if ts > cutoff_t:
                continue
            tokens = tokenize(text)
            if tokens:
                documents.append((int(user), ts, tag, tokens))
    return Corpus(documents=documents)


def tf(word, doc_index, corpus: Corpus):
    """Term frequency: count of `word` in the document over its total token count."""
    tokens = corpus.documents[doc_index][3]
    if not tokens:
        raise ValueError(f"document {doc_index} is empty")
    return tokens.count(word) / len(tokens)


def idf(word, corpus: Corpus):
    """Inverse document frequency ln(M / m(word)); natural log."""
    if word not in corpus.vocabulary:
        raise KeyError(f"word {word!r} not in corpus vocabulary")
    return math.log(corpus.num_documents / corpus.doc_freq[word])


def tf_idf(word, doc_index, corpus: Corpus):
    return tf(word, doc_index, corpus) * idf(word, corpus)


def _tfidf_over_tokens(tokens, corpus: Corpus):
    """TF-IDF of each distinct word in an aggregate token list, against corpus IDF."""
    total = len(tokens)
    counts = {}
    for tok in tokens:
        counts[tok] = counts.get(tok, 0) + 1
    scores = {}
    for word, cnt in counts.items():
        if word in corpus.vocabulary:
            scores[word] = (cnt / total) * idf(word, corpus)
    return scores


def extract_top_words(user, corpus: Corpus, window, W, short_fraction=0.10):
    """Top-W keywords for the user's long or short window.

    Documents are grouped per topic tag into one aggregate document each
    and W is divided into per-tag quotas; scarce users are padded with a
    reserved token so the result always has length W. Ties break
    lexicographically.
    """
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    if window not in ("long", "short"):
        raise ValueError(f"window must be 'long' or 'short', got {window!r}")
    docs = corpus.user_documents(user)
    if window == "short" and docs:
        keep = max(1, math.ceil(short_fraction * len(docs)))
        docs = docs[len(docs) - keep:]
    if not docs:
        return [PAD_TOKEN] * W

    groups = {}
    for tag, tokens in docs:
        groups.setdefault(tag, []).extend(tokens)
    tags = sorted(groups)
    if tags == ["-"]:
        quotas = {"-": W}
    else:
        base, extra = divmod(W, len(tags))
        quotas = {tag: base + (1 if i < extra else 0) for i, tag in enumerate(tags)}

    selected = []
    for tag in tags:
        scores = _tfidf_over_tokens(groups[tag], corpus)
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        selected.extend(word for word, _ in ranked[:quotas[tag]])
    selected = selected[:W]
    selected += [PAD_TOKEN] * (W - len(selected))
    return selected


@dataclass
class UserTextProfile:
    """Fixed-length interest vector: short-window half first, then long-window."""

    user: int
    long_words: list
    short_words: list
    w_long: np.ndarray
    w_short: np.ndarray

    @property
    def w_u(self):
        return np.concatenate([self.w_short, self.w_long])


@dataclass
class WordEmbeddingTable:
    vectors: dict  # word -> np.ndarray of uniform dimension
    dim: int

    def lookup(self, word):
        vec = self.vectors.get(word)
        if vec is None:
            return np.zeros(self.dim)
        return vec


def assemble_profile(user, table: WordEmbeddingTable, long_words, short_words):
    """Concatenate the W short then W long word vectors into one profile."""
    if len(long_words) != len(short_words):
        raise ValueError("long and short word lists must have equal length W")
    w_long = np.concatenate([table.lookup(w) for w in long_words])
    w_short = np.concatenate([table.lookup(w) for w in short_words])
    return UserTextProfile(user=user, long_words=list(long_words),
                           short_words=list(short_words),
                           w_long=w_long, w_short=w_short)


def build_profiles(corpus: Corpus, table: WordEmbeddingTable, users, W,
                   short_fraction=0.10):
    """Profiles for every user id in `users` (missing users get all-pad profiles)."""
    profiles = {}
    for user in users:
        long_words = extract_top_words(user, corpus, "long", W, short_fraction)
        short_words = extract_top_words(user, corpus, "short", W, short_fraction)
        profiles[user] = assemble_profile(user, table, long_words, short_words)
    return profiles
