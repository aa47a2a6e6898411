"""Experiment orchestration: config parsing, pipeline assembly, reports and sweeps."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import baselines, metrics
from .graph import load_edge_file, split_new_links
from .interactions import all_social_influence, load_interaction_file, weak_link_map
from .model import AblationConfig, Hyper, rank_candidates, save_checkpoint, train
from .text import build_profiles, load_activity_file
from .word2vec import train_word_embeddings


class ConfigError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class ExperimentConfig:
    edges: str = ""
    activities: str = ""
    interactions: str = ""
    cutoff_t: int = 1000
    cutoff_t_prime: int = 2000
    top_words: int = 10          # W keywords per window
    embed_dim: int = 8           # word-vector dimension d
    short_fraction: float = 0.10
    w2v_epochs: int = 3
    w2v_window: int = 3
    w2v_negatives: int = 5
    gcn_input: int = 64
    gcn_hidden: int = 64
    gcn_output: int = 16
    mlp_widths: list = field(default_factory=lambda: [64, 32])
    lr: float = 0.01
    l2: float = 5e-4
    dropout: float = 0.5
    epochs: int = 200
    seed: int = 0
    repeats: int = 1
    k_list: list = field(default_factory=lambda: [500])
    variant: str = "full"
    auc_samples: int = 100000
    test_fraction: float = 0.2
    neg_per_pos: int = 1

    def validate(self):
        if self.repeats < 1:
            raise ConfigError(f"repeats must be >= 1, got {self.repeats}")
        if not self.k_list or sorted(self.k_list) != self.k_list:
            raise ConfigError(f"k_list must be non-empty and ascending, got {self.k_list}")
        AblationConfig.variant(self.variant)
        for name in ("edges", "activities", "interactions"):
            path = getattr(self, name)
            if not path:
                raise ConfigError(f"missing required config key: {name}")
            if not Path(path).exists():
                raise DataError(f"{name} file not found: {path}")

    def resolved_text(self):
        """Canonical `key = value` rendering of the full config (self-describing runs)."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def run_id(self):
        return hashlib.sha256(self.resolved_text().encode()).hexdigest()[:12]


_LIST_KEYS = {"k_list", "mlp_widths"}


def _parse_value(key, raw, current):
    if key in _LIST_KEYS:
        return [int(v) for v in raw.split(",") if v.strip()]
    if isinstance(current, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    return raw


def parse_config_file(path, overrides=None):
    """Line-oriented `key = value` config; `#` comments; unknown keys are errors."""
    cfg = ExperimentConfig()
    known = {f.name for f in fields(cfg)}
    updates = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                updates[key] = _parse_value(key, raw, getattr(cfg, key))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    cfg = replace(cfg, **updates)
    if overrides:
        bad = set(overrides) - known
        if bad:
            raise ConfigError(f"unknown config overrides: {sorted(bad)}")
        cfg = replace(cfg, **overrides)
    return cfg


@dataclass
class Pipeline:
    graph: object
    split: object
    profiles: dict
    social: np.ndarray
    weak_map: dict
    candidates: list
    test_pos: set


def build_pipeline(cfg: ExperimentConfig) -> Pipeline:
    """Load files, derive all features, and split new links (deterministic)."""
    cfg.validate()
    try:
        graph = load_edge_file(cfg.edges, cfg.cutoff_t, cfg.cutoff_t_prime)
        corpus = load_activity_file(cfg.activities, cfg.cutoff_t)
        log = load_interaction_file(cfg.interactions, cfg.cutoff_t)
    except (OSError, ValueError) as exc:
        raise DataError(f"loading inputs failed: {exc}") from exc

    table = train_word_embeddings(corpus, d=cfg.embed_dim, epochs=cfg.w2v_epochs,
                                  window_size=cfg.w2v_window,
                                  negatives=cfg.w2v_negatives, seed=cfg.seed)
    profiles = build_profiles(corpus, table, range(graph.node_count),
                              cfg.top_words, cfg.short_fraction)
    social = all_social_influence(log, graph.node_count)
    weak_map = weak_link_map(log)
    split = split_new_links(graph, cfg.test_fraction, cfg.neg_per_pos, cfg.seed)
    candidates = sorted(split.test_pos) + sorted(split.test_neg)
    return Pipeline(graph=graph, split=split, profiles=profiles, social=social,
                    weak_map=weak_map, candidates=candidates,
                    test_pos=set(split.test_pos))


def _hyper(cfg: ExperimentConfig, seed) -> Hyper:
    return Hyper(lr=cfg.lr, l2=cfg.l2, dropout=cfg.dropout, epochs=cfg.epochs,
                 seed=seed, d_t0=cfg.gcn_input, d_t1=cfg.gcn_hidden,
                 d_t=cfg.gcn_output, mlp_widths=tuple(cfg.mlp_widths))


def evaluate_scores(pipe: Pipeline, scores, cfg: ExperimentConfig, seed):
    """All four metrics for one score vector over the test candidate pool."""
    n_pos = len(pipe.test_pos)
    ev = metrics.ScoredEvaluation(pos_scores=scores[:n_pos], neg_scores=scores[n_pos:])
    ranked = metrics.rank_predictions(pipe.candidates, scores, pipe.test_pos)
    out = {("auc", "-"): metrics.auc_sampled(ev, cfg.auc_samples, seed),
           ("ks", "-"): metrics.ks_statistic(ev)}
    for k in cfg.k_list:
        kk = min(k, len(ranked))
        out[("ndcg", str(k))] = metrics.ndcg_at_k(ranked, kk)
        out[("map", str(k))] = metrics.map_at_k(ranked, kk, n_pos)
    return out


def train_model_runs(pipe: Pipeline, cfg: ExperimentConfig, run_dir=None):
    """Train `repeats` models with consecutive seeds; returns per-run scores and traces."""
    ablation = AblationConfig.variant(cfg.variant)
    runs = []
    for r in range(cfg.repeats):
        seed = cfg.seed + r
        result = train(pipe.graph, pipe.profiles, pipe.social, pipe.weak_map,
                       pipe.split, ablation, _hyper(cfg, seed))
        scores = result.predictor.score_pairs(pipe.candidates)
        if run_dir is not None:
            save_checkpoint(Path(run_dir) / f"checkpoint-{seed}.npz", result.predictor)
        runs.append({"seed": seed, "scores": scores, "trace": result.loss_trace,
                     "predictor": result.predictor})
    return runs


def baseline_scores(pipe: Pipeline, method):
    if method == "cn":
        return baselines.common_neighbor_scores(pipe.graph, pipe.candidates)
    if method == "pr":
        return baselines.pagerank_scores(pipe.graph, pipe.candidates)
    raise ConfigError(f"unknown baseline {method!r}")


def write_predictions(path, candidates, scores):
    """Tab-separated `src<TAB>dst<TAB>score` sorted by descending score."""
    order = sorted(range(len(candidates)), key=lambda i: (-scores[i], candidates[i]))
    with open(path, "w", encoding="utf-8") as fh:
        for i in order:
            u, q = candidates[i]
            fh.write(f"{u}\t{q}\t{scores[i]:.10f}\n")


def read_predictions(path):
    candidates, scores = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            u, q, s = line.split("\t")
            candidates.append((int(u), int(q)))
            scores.append(float(s))
    return candidates, np.array(scores)


def run_experiment(cfg: ExperimentConfig, out_root, with_baselines=True):
    """Train, evaluate, compare against baselines, emit report.tsv and sweep.csv."""
    pipe = build_pipeline(cfg)
    run_dir = Path(out_root) / cfg.run_id()
    run_dir.mkdir(parents=True, exist_ok=True)

    with open(run_dir / "test-positives.tsv", "w", encoding="utf-8") as fh:
        for u, q in sorted(pipe.test_pos):
            fh.write(f"{u}\t{q}\n")

    per_method = {}  # method -> list of per-run metric dicts
    runs = train_model_runs(pipe, cfg, run_dir=run_dir)
    per_method["model"] = []
    for run in runs:
        write_predictions(run_dir / f"predictions-model-seed{run['seed']}.tsv",
                          pipe.candidates, run["scores"])
        per_method["model"].append(evaluate_scores(pipe, run["scores"], cfg, run["seed"]))

    if with_baselines:
        for method in ("cn", "pr"):
            scores = baseline_scores(pipe, method)
            write_predictions(run_dir / f"predictions-{method}.tsv",
                              pipe.candidates, scores)
            per_method[method] = [evaluate_scores(pipe, scores, cfg, cfg.seed)]

    report_path = run_dir / "report.tsv"
    with open(report_path, "w", encoding="utf-8") as fh:
        for line in cfg.resolved_text().splitlines():
            fh.write(f"# {line}\n")
        fh.write("method\tmetric\tK\tmean\tstddev\n")
        for method, metric_runs in per_method.items():
            for key in metric_runs[0]:
                values = np.array([m[key] for m in metric_runs])
                fh.write(f"{method}\t{key[0]}\t{key[1]}\t{values.mean():.6f}"
                         f"\t{values.std(ddof=0):.6f}\n")
        if with_baselines and cfg.repeats >= 2:
            model_runs = per_method["model"]
            for method in ("cn", "pr"):
                base = per_method[method][0]
                for key in base:
                    a = [m[key] for m in model_runs]
                    b = [base[key]] * len(a)
                    try:
                        t = metrics.paired_t_test(a, b)
                        fh.write(f"# t-test model vs {method} {key[0]}@{key[1]}: "
                                 f"t={t['t_stat']:.4f} p={t['p_value']:.6f}\n")
                    except ValueError:
                        fh.write(f"# t-test model vs {method} {key[0]}@{key[1]}: degenerate\n")

    sweep_k(cfg, run_dir)
    return run_dir, per_method


def sweep_k(cfg: ExperimentConfig, run_dir):
    """Recompute NDCG@K / MAP@K per K from emitted predictions, without retraining."""
    run_dir = Path(run_dir)
    positives = set()
    with open(run_dir / "test-positives.tsv", encoding="utf-8") as fh:
        for line in fh:
            u, q = line.split("\t")
            positives.add((int(u), int(q)))

    rows = []
    pred_files = sorted(run_dir.glob("predictions-*.tsv"))
    for path in pred_files:
        method = path.stem.removeprefix("predictions-")
        candidates, scores = read_predictions(path)
        ranked = metrics.rank_predictions(candidates, scores, positives)
        for k in cfg.k_list:
            if k > len(ranked):
                raise ConfigError(f"K={k} exceeds candidate count {len(ranked)}")
            rows.append((method, "ndcg", k, metrics.ndcg_at_k(ranked, k)))
            rows.append((method, "map", k, metrics.map_at_k(ranked, k, len(positives))))

    # aggregate model seeds into mean/stddev per (base method, metric, K)
    grouped = {}
    for method, metric, k, value in rows:
        base = method.split("-seed")[0]
        grouped.setdefault((base, metric, k), []).append(value)
    sweep_path = run_dir / "sweep.csv"
    with open(sweep_path, "w", encoding="utf-8") as fh:
        fh.write("method,metric,K,mean,stddev\n")
        for (method, metric, k), values in sorted(grouped.items()):
            arr = np.array(values)
            fh.write(f"{method},{metric},{k},{arr.mean():.6f},{arr.std(ddof=0):.6f}\n")
    return sweep_path
