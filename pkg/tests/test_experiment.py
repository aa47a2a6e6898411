import numpy as np
import pytest

from linkfusion import metrics
from linkfusion.datagen import SynthConfig, generate
from linkfusion.experiment import (ConfigError, DataError, ExperimentConfig,
                                   build_pipeline, parse_config_file, read_predictions,
                                   run_experiment, sweep_k, write_predictions)


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    cfg = SynthConfig(n_nodes=60, communities=3, p_in=0.25, p_out=0.03,
                      vocab_per_community=10, docs_per_user=5, hot_topic_count=4,
                      seed=0)
    return generate(cfg, out)


def tiny_config(info, **kw):
    defaults = dict(edges=str(info["edge_file"]), activities=str(info["activity_file"]),
                    interactions=str(info["interaction_file"]),
                    cutoff_t=info["cutoff_t"], cutoff_t_prime=info["cutoff_t_prime"],
                    top_words=4, embed_dim=4, w2v_epochs=1, gcn_input=8, gcn_hidden=8,
                    gcn_output=4, mlp_widths=[8], epochs=5, auc_samples=2000,
                    k_list=[10], repeats=1, seed=0)
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestConfigParsing:
    def test_key_value_and_comments(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("# comment\nlr = 0.02\nk_list = 100,200\nepochs = 7\n")
        cfg = parse_config_file(path)
        assert cfg.lr == 0.02
        assert cfg.k_list == [100, 200]
        assert cfg.epochs == 7

    def test_unknown_key_fails_fast(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("learning_rate = 0.02\n")
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config_file(path)

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("lr = 0.02\n")
        cfg = parse_config_file(path, overrides={"lr": 0.5})
        assert cfg.lr == 0.5

    def test_defaults_mirror_standard_setup(self):
        cfg = ExperimentConfig()
        assert cfg.lr == 0.01
        assert cfg.l2 == 5e-4
        assert cfg.dropout == 0.5
        assert cfg.gcn_input == 64
        assert cfg.gcn_output == 16
        assert cfg.k_list == [500]

    def test_validation_rules(self, tiny_dataset):
        with pytest.raises(ConfigError):
            tiny_config(tiny_dataset, repeats=0).validate()
        with pytest.raises(ConfigError):
            tiny_config(tiny_dataset, k_list=[300, 200]).validate()
        with pytest.raises(DataError):
            tiny_config(tiny_dataset, edges="/nonexistent/edges.tsv").validate()

    def test_run_id_stable(self, tiny_dataset):
        assert tiny_config(tiny_dataset).run_id() == tiny_config(tiny_dataset).run_id()
        assert tiny_config(tiny_dataset).run_id() != tiny_config(tiny_dataset, seed=1).run_id()


class TestPredictionsIO:
    def test_round_trip_sorted_descending(self, tmp_path):
        path = tmp_path / "predictions.tsv"
        candidates = [(0, 1), (2, 3), (4, 5)]
        scores = np.array([0.2, 0.9, 0.5])
        write_predictions(path, candidates, scores)
        got_pairs, got_scores = read_predictions(path)
        assert got_pairs == [(2, 3), (4, 5), (0, 1)]
        assert (np.diff(got_scores) <= 0).all()


class TestRunExperiment:
    def test_smoke_report_has_all_rows(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset)
        run_dir, per_method = run_experiment(cfg, tmp_path)
        assert set(per_method) == {"model", "cn", "pr"}
        report = (run_dir / "report.tsv").read_text()
        for method in ("model", "cn", "pr"):
            for metric in ("auc", "ks", "ndcg", "map"):
                assert f"{method}\t{metric}" in report
        assert (run_dir / "sweep.csv").exists()
        assert (run_dir / "checkpoint-0.npz").exists()

    def test_report_embeds_resolved_config(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset)
        run_dir, _ = run_experiment(cfg, tmp_path)
        report = (run_dir / "report.tsv").read_text()
        assert "# lr = 0.01" in report
        assert "# variant = full" in report

    def test_byte_identical_reports_across_runs(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset)
        run_dir_a, _ = run_experiment(cfg, tmp_path / "a")
        run_dir_b, _ = run_experiment(cfg, tmp_path / "b")
        assert (run_dir_a / "report.tsv").read_bytes() == (run_dir_b / "report.tsv").read_bytes()
        assert (run_dir_a / "sweep.csv").read_bytes() == (run_dir_b / "sweep.csv").read_bytes()

    def test_repeats_give_t_test_lines(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset, repeats=2, epochs=3)
        run_dir, per_method = run_experiment(cfg, tmp_path)
        assert len(per_method["model"]) == 2
        report = (run_dir / "report.tsv").read_text()
        assert "t-test model vs cn" in report


class TestSweepK:
    def test_values_match_direct_metric_calls(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset, k_list=[5, 10])
        run_dir, _ = run_experiment(cfg, tmp_path)
        sweep = (run_dir / "sweep.csv").read_text().splitlines()[1:]
        rows = {tuple(line.split(",")[:3]): float(line.split(",")[3]) for line in sweep}

        positives = set()
        for line in (run_dir / "test-positives.tsv").read_text().splitlines():
            u, q = line.split("\t")
            positives.add((int(u), int(q)))
        candidates, scores = read_predictions(run_dir / "predictions-cn.tsv")
        ranked = metrics.rank_predictions(candidates, scores, positives)
        for k in (5, 10):
            assert rows[("cn", "ndcg", str(k))] == pytest.approx(
                metrics.ndcg_at_k(ranked, k), abs=1e-6)
            assert rows[("cn", "map", str(k))] == pytest.approx(
                metrics.map_at_k(ranked, k, len(positives)), abs=1e-6)

    def test_singleton_k(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset, k_list=[5])
        run_dir, _ = run_experiment(cfg, tmp_path)
        lines = (run_dir / "sweep.csv").read_text().splitlines()
        methods = {line.split(",")[0] for line in lines[1:]}
        # one ndcg and one map row per method
        assert len(lines) - 1 == 2 * len(methods)

    def test_k_exceeding_candidates_errors(self, tiny_dataset, tmp_path):
        cfg = tiny_config(tiny_dataset)
        run_dir, _ = run_experiment(cfg, tmp_path)
        big = tiny_config(tiny_dataset, k_list=[10_000])
        with pytest.raises(ConfigError, match="exceeds candidate count"):
            sweep_k(big, run_dir)


def test_pipeline_candidates_are_test_pool(tiny_dataset):
    cfg = tiny_config(tiny_dataset)
    pipe = build_pipeline(cfg)
    assert len(pipe.candidates) == len(pipe.split.test_pos) + len(pipe.split.test_neg)
    assert pipe.test_pos == set(pipe.split.test_pos)
