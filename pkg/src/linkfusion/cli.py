"""Command-line experiment driver.

Subcommands: generate, train, evaluate, sweep-k, ablate, baseline.
Exit codes: 0 success, 1 config error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import datagen, metrics
from .experiment import (ConfigError, DataError, ExperimentConfig, baseline_scores,
                         build_pipeline, evaluate_scores, parse_config_file,
                         run_experiment, sweep_k, train_model_runs, write_predictions)

VARIANTS = ("full", "no-long", "no-short", "no-link", "no-attention")


def _add_config_args(p):
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key (repeatable)")
    p.add_argument("--out", default="runs", help="output root directory")


def _load_config(args) -> ExperimentConfig:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        overrides[key.strip()] = raw.strip()
    cfg = parse_config_file(args.config)
    if overrides:
        # re-parse overrides with type coercion against the file-derived config
        from .experiment import _parse_value
        typed = {k: _parse_value(k, v, getattr(cfg, k)) for k, v in overrides.items()
                 if hasattr(cfg, k)}
        bad = set(overrides) - set(typed)
        if bad:
            raise ConfigError(f"unknown config overrides: {sorted(bad)}")
        cfg = replace(cfg, **typed)
    return cfg


def cmd_generate(args):
    cfg = datagen.SynthConfig(
        n_nodes=args.nodes, communities=args.communities, p_in=args.p_in,
        p_out=args.p_out, interaction_rate=args.interaction_rate,
        new_link_weak_link_bias=args.bias, seed=args.seed)
    info = datagen.generate(cfg, args.out)
    config_path = Path(args.out) / "experiment.cfg"
    with open(config_path, "w", encoding="utf-8") as fh:
        fh.write(f"edges = {info['edge_file']}\n")
        fh.write(f"activities = {info['activity_file']}\n")
        fh.write(f"interactions = {info['interaction_file']}\n")
        fh.write(f"cutoff_t = {info['cutoff_t']}\n")
        fh.write(f"cutoff_t_prime = {info['cutoff_t_prime']}\n")
    print(f"wrote synthetic dataset and {config_path}")
    return 0


def cmd_train(args):
    cfg = _load_config(args)
    pipe = build_pipeline(cfg)
    run_dir = Path(args.out) / cfg.run_id()
    run_dir.mkdir(parents=True, exist_ok=True)
    runs = train_model_runs(pipe, cfg, run_dir=run_dir)
    for run in runs:
        write_predictions(run_dir / f"predictions-model-seed{run['seed']}.tsv",
                          pipe.candidates, run["scores"])
        print(f"seed {run['seed']}: final loss {run['trace'][-1]:.4f} "
              f"(initial {run['trace'][0]:.4f})")
    print(f"checkpoints and predictions under {run_dir}")
    return 0


def cmd_evaluate(args):
    cfg = _load_config(args)
    run_dir, per_method = run_experiment(cfg, args.out)
    for method, metric_runs in per_method.items():
        for key in metric_runs[0]:
            values = np.array([m[key] for m in metric_runs])
            print(f"{method}\t{key[0]}\t{key[1]}\t{values.mean():.6f}")
    print(f"report: {run_dir / 'report.tsv'}")
    return 0


def cmd_sweep_k(args):
    cfg = _load_config(args)
    run_dir = Path(args.run_dir)
    if not run_dir.exists():
        raise DataError(f"run directory not found: {run_dir}")
    path = sweep_k(cfg, run_dir)
    print(f"sweep: {path}")
    return 0


def cmd_ablate(args):
    cfg = _load_config(args)
    summary = []
    for variant in VARIANTS:
        vcfg = replace(cfg, variant=variant)
        run_dir, per_method = run_experiment(vcfg, args.out, with_baselines=False)
        for key in per_method["model"][0]:
            values = np.array([m[key] for m in per_method["model"]])
            summary.append((variant, key[0], key[1], values.mean(), values.std(ddof=0)))
        print(f"{variant}: {run_dir}")
    out_path = Path(args.out) / "ablate-report.tsv"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("variant\tmetric\tK\tmean\tstddev\n")
        for row in summary:
            fh.write(f"{row[0]}\t{row[1]}\t{row[2]}\t{row[3]:.6f}\t{row[4]:.6f}\n")
    print(f"ablation report: {out_path}")
    return 0


def cmd_baseline(args):
    cfg = _load_config(args)
    pipe = build_pipeline(cfg)
    run_dir = Path(args.out) / cfg.run_id()
    run_dir.mkdir(parents=True, exist_ok=True)
    for method in ("cn", "pr"):
        scores = baseline_scores(pipe, method)
        write_predictions(run_dir / f"predictions-{method}.tsv", pipe.candidates, scores)
        for key, value in evaluate_scores(pipe, scores, cfg, cfg.seed).items():
            print(f"{method}\t{key[0]}\t{key[1]}\t{value:.6f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="linkfusion",
                                     description="multimodal link-prediction experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--out", default="data")
    g.add_argument("--nodes", type=int, default=1000)
    g.add_argument("--communities", type=int, default=4)
    g.add_argument("--p-in", type=float, default=0.02)
    g.add_argument("--p-out", type=float, default=0.002)
    g.add_argument("--interaction-rate", type=float, default=1.0)
    g.add_argument("--bias", type=float, default=0.3,
                   help="extra new-link probability for interacting pairs")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_generate)

    for name, func in (("train", cmd_train), ("evaluate", cmd_evaluate),
                       ("ablate", cmd_ablate), ("baseline", cmd_baseline)):
        p = sub.add_parser(name)
        _add_config_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("sweep-k", help="recompute NDCG@K/MAP@K from predictions")
    _add_config_args(p)
    p.add_argument("--run-dir", required=True)
    p.set_defaults(func=cmd_sweep_k)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
