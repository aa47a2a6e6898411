import math

import numpy as np
import pytest

from linkfusion.interactions import (INTERACTION_KINDS, SOCIAL_DIM, InteractionLog,
                                     all_social_influence, load_interaction_file,
                                     social_influence, weak_link, weak_link_map)


def make_log(records):
    return InteractionLog(records=tuple(records))


class TestSocialInfluence:
    def test_no_inbound_zero_vector(self):
        log = make_log([(1, 2, "endorse", 0, 5)])
        np.testing.assert_array_equal(social_influence(log, 0), np.zeros(SOCIAL_DIM))

    def test_single_endorse_ln2(self):
        log = make_log([(1, 0, "endorse", 0, 5)])
        vec = social_influence(log, 0)
        assert abs(vec[0] - math.log(2)) < 1e-12
        assert abs(vec[0] - 0.693147) < 1e-6
        np.testing.assert_array_equal(vec[1:], np.zeros(SOCIAL_DIM - 1))

    def test_order_invariant(self):
        records = [(1, 0, "vote", 0, 1), (2, 0, "comment", 0, 2), (3, 0, "vote", 0, 3)]
        a = social_influence(make_log(records), 0)
        b = social_influence(make_log(list(reversed(records))), 0)
        np.testing.assert_array_equal(a, b)

    def test_monotone_in_inbound_records(self):
        base = [(1, 0, "answer", 0, 1)]
        more = base + [(2, 0, "answer", 0, 2)]
        kind_idx = INTERACTION_KINDS.index("answer")
        assert social_influence(make_log(more), 0)[kind_idx] > \
            social_influence(make_log(base), 0)[kind_idx]


class TestWeakLink:
    def test_no_interaction_zero(self):
        assert np.array_equal(weak_link(make_log([]), 0, 1), np.zeros(2))

    def test_hand_values(self):
        log = make_log([(0, 1, "answer", 2, 1), (0, 1, "answer", 0, 2),
                        (0, 1, "answer", 5, 3)])
        vec = weak_link(log, 0, 1)
        np.testing.assert_allclose(vec, [math.log(4), math.log(8)], atol=1e-12)
        np.testing.assert_allclose(vec, [1.386294, 2.079442], atol=1e-6)

    def test_direction_matters(self):
        log = make_log([(1, 0, "answer", 9, 1)])
        np.testing.assert_array_equal(weak_link(log, 0, 1), np.zeros(2))

    def test_same_user_errors(self):
        with pytest.raises(ValueError):
            weak_link(make_log([]), 3, 3)


class TestLogValidation:
    def test_self_interaction_rejected(self):
        with pytest.raises(ValueError):
            make_log([(0, 0, "vote", 0, 1)])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            make_log([(0, 1, "poke", 0, 1)])

    def test_negative_quality_rejected(self):
        with pytest.raises(ValueError):
            make_log([(0, 1, "vote", -1, 1)])


def test_all_social_influence_matches_per_user():
    log = make_log([(1, 0, "vote", 0, 1), (2, 0, "vote", 0, 2), (0, 1, "endorse", 3, 1)])
    mat = all_social_influence(log, 3)
    for user in range(3):
        np.testing.assert_array_equal(mat[user], social_influence(log, user))


def test_weak_link_map_matches_pairwise():
    log = make_log([(0, 1, "answer", 2, 1), (0, 1, "vote", 1, 2), (1, 2, "vote", 0, 3)])
    wl = weak_link_map(log)
    np.testing.assert_array_equal(wl[(0, 1)], weak_link(log, 0, 1))
    np.testing.assert_array_equal(wl[(1, 2)], weak_link(log, 1, 2))
    assert (2, 1) not in wl


def test_load_interaction_file_cutoff(tmp_path):
    path = tmp_path / "interactions.tsv"
    path.write_text("0\t1\tvote\t3\t5\n0\t1\tvote\t3\t99\n", encoding="utf-8")
    log = load_interaction_file(path, cutoff_t=10)
    assert len(log.records) == 1
