import numpy as np
import pytest

from linkfusion.datagen import CUTOFF_T, CUTOFF_T_PRIME, SynthConfig, generate
from linkfusion.graph import load_edge_file
from linkfusion.interactions import load_interaction_file
from linkfusion.text import load_activity_file


def small_config(**kw):
    defaults = dict(n_nodes=60, communities=3, p_in=0.2, p_out=0.02,
                    vocab_per_community=10, docs_per_user=5, hot_topic_count=4,
                    interaction_rate=0.5, new_link_weak_link_bias=0.3, seed=0)
    defaults.update(kw)
    return SynthConfig(**defaults)


class TestValidation:
    def test_p_in_must_exceed_p_out(self):
        with pytest.raises(ValueError):
            small_config(p_in=0.01, p_out=0.02).validate()

    def test_rates_in_unit_interval(self):
        with pytest.raises(ValueError):
            small_config(interaction_rate=1.5).validate()

    def test_nodes_at_least_communities(self):
        with pytest.raises(ValueError):
            small_config(n_nodes=2, communities=3).validate()

    def test_infeasible_rates_error(self, tmp_path):
        cfg = small_config(new_link_rate=0.0)
        with pytest.raises(ValueError, match="infeasible"):
            generate(cfg, tmp_path)


class TestGenerate:
    def test_files_round_trip_through_loaders(self, tmp_path):
        info = generate(small_config(), tmp_path)
        g = load_edge_file(info["edge_file"], info["cutoff_t"], info["cutoff_t_prime"])
        corpus = load_activity_file(info["activity_file"], info["cutoff_t"])
        log = load_interaction_file(info["interaction_file"], info["cutoff_t"])
        assert g.node_count == 60
        assert corpus.num_documents == 60 * 5
        assert len(log.records) > 0

    def test_new_links_nonempty_and_disjoint(self, tmp_path):
        info = generate(small_config(), tmp_path)
        g = load_edge_file(info["edge_file"], info["cutoff_t"], info["cutoff_t_prime"])
        new = g.new_links()
        assert new
        assert not new & g.edges_t
        assert new == info["new_links"]

    def test_same_seed_byte_identical(self, tmp_path):
        generate(small_config(seed=7), tmp_path / "a")
        generate(small_config(seed=7), tmp_path / "b")
        for name in ("edges.tsv", "activities.tsv", "interactions.tsv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_zero_p_out_all_intra(self, tmp_path):
        info = generate(small_config(p_out=0.0, p_in=0.3), tmp_path)
        comm = info["communities"]
        g = load_edge_file(info["edge_file"], info["cutoff_t"], info["cutoff_t_prime"])
        for u, v in g.edges_t_prime:
            assert comm[u] == comm[v]

    def test_intra_fraction_matches_expectation(self, tmp_path):
        cfg = SynthConfig(n_nodes=1000, communities=4, p_in=0.02, p_out=0.002,
                          seed=1)
        info = generate(cfg, tmp_path)
        g = load_edge_file(info["edge_file"], info["cutoff_t"], info["cutoff_t_prime"])
        comm = info["communities"]
        intra = sum(1 for u, v in g.edges_t if comm[u] == comm[v])
        # analytic expectation of the intra-link fraction at snapshot t
        n_intra_pairs = sum(np.count_nonzero(comm == c) * (np.count_nonzero(comm == c) - 1)
                            for c in range(4))
        n_inter_pairs = 1000 * 999 - n_intra_pairs
        expected = cfg.p_in * n_intra_pairs / (cfg.p_in * n_intra_pairs
                                               + cfg.p_out * n_inter_pairs)
        assert abs(intra / len(g.edges_t) - expected) < 0.03

    def test_interacting_pairs_overrepresented_among_new_links(self, tmp_path):
        cfg = SynthConfig(n_nodes=1000, communities=4, p_in=0.02, p_out=0.002,
                          new_link_weak_link_bias=0.3, seed=2)
        info = generate(cfg, tmp_path)
        interact = info["interacting_pairs"]
        new = info["new_links"]
        rate_with = len(new & interact) / len(interact)
        others = len(new - interact)
        n_other_pairs = cfg.n_nodes * (cfg.n_nodes - 1) - len(interact)
        rate_without = others / n_other_pairs
        assert rate_with - rate_without >= cfg.new_link_weak_link_bias / 2

    def test_hot_topics_only_in_recent_documents(self, tmp_path):
        info = generate(small_config(docs_per_user=10), tmp_path)
        corpus = load_activity_file(info["activity_file"], info["cutoff_t"])
        docs = corpus.user_documents(0)
        early = [tok for _, toks in docs[:-1] for tok in toks]
        late = [tok for _, toks in docs[-1:] for tok in toks]
        assert not any(t.startswith("hot") for t in early)
        assert any(t.startswith("hot") for t in late)

    def test_cutoffs_exported(self, tmp_path):
        info = generate(small_config(), tmp_path)
        assert info["cutoff_t"] == CUTOFF_T
        assert info["cutoff_t_prime"] == CUTOFF_T_PRIME
