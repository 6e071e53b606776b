import math

import numpy as np
import pytest

from kplex.controller import (L_VALUES, Controller, ControllerConfig, ParameterTriple, generate_space,
                              interpolate_probabilities, prelearn, rank_triples, softmax)
from kplex.search import TabuList
from kplex.solver import greedy_construct
from kplex.state import new_state

from conftest import gnp


def test_space_shape():
    sp = generate_space()
    assert len(sp) == 4158 == 33 * 6 * 21
    assert (L_VALUES[0], L_VALUES[29], L_VALUES[30], L_VALUES[31], L_VALUES[32]) == (2, 31, 32, 64, 128)
    assert sp[0][:3] == (2, 95, 70) and sp[-1][:3] == (128, 100, 90)
    assert [t.all_index for t in sp] == list(range(4158))
    assert sorted(sp, key=lambda t: (L_VALUES.index(t.l), t.e, t.b)) == sp


def test_softmax_examples():
    p = softmax([3, 1, 1, 1, 1, 1], 2.0)
    assert p[0] == pytest.approx(math.exp(1.5) / (math.exp(1.5) + 5 * math.exp(0.5)))
    assert p[0] == pytest.approx(0.3521, abs=1e-4)
    w = [5, 1, 3, 0, 2, 4]
    assert np.ptp(softmax(w, 20.0)) < np.ptp(softmax(w, 2.0))


def test_softmax_normalised():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        w = rng.normal(0, 50, size=6)
        assert abs(softmax(w, 2.0).sum() - 1) < 1e-12


def test_uniform_selection_frequencies():
    ctl = Controller(ControllerConfig(), generate_space())
    rng = np.random.default_rng(1)
    counts = np.bincount([ctl.select(rng)[1] for _ in range(100_000)], minlength=6) / 100_000
    assert np.all(np.abs(counts - 1 / 6) < 0.01)


def test_reward_spot_values():
    ctl = Controller(ControllerConfig(), generate_space())
    assert ctl.compute_reward(1, 10, 10, 0) == 22
    assert ctl.compute_reward(2, 10, 10, 5) == 12
    assert ctl.compute_reward(1, 10, 10, 3) == 0
    assert 1 in ctl.lo_hashes and 2 in ctl.lo_hashes


def test_reward_monotone_in_rank_and_positive():
    ctl = Controller(ControllerConfig(), generate_space())
    rs = [ctl.compute_reward(100 + i, 8, 10, i) for i in range(6)]
    assert all(r > 0 for r in rs)
    assert np.allclose(np.diff(rs), -2.0)


def test_reward_quality_modes():
    verbatim = Controller(ControllerConfig(), generate_space())
    ratio = Controller(ControllerConfig(quality_mode="ratio"), generate_space())
    assert verbatim.quality(8, 10) == pytest.approx(1.2 ** 2 * 10)
    assert ratio.quality(8, 10) == pytest.approx(0.8 ** 2 * 10)
    with pytest.raises(ValueError):
        verbatim.compute_reward(5, 0, 0, 0)
    with pytest.raises(IndexError):
        verbatim.compute_reward(5, 1, 1, 6)


def test_lo_hash_cap_evicts_oldest():
    ctl = Controller(ControllerConfig(lo_hash_cap=3), generate_space())
    for h in range(5):
        ctl.compute_reward(h, 1, 1, 0)
    assert list(ctl.lo_hashes) == [2, 3, 4]
    assert ctl.compute_reward(0, 1, 1, 0) > 0


def test_apply_reward_window():
    ctl = Controller(ControllerConfig(), generate_space())
    ctl.apply_reward(0, 22)
    assert ctl.omega[0] == 22
    for _ in range(100):
        ctl.apply_reward(1, 10)
    ctl.apply_reward(1, 0)
    assert ctl.omega[1] == pytest.approx(9.9)
    for i in range(150):
        ctl.apply_reward(2, i)
    assert list(ctl.reward_window[2]) == list(range(50, 150))
    assert ctl.omega[3] == 1.0


def test_window_mean_matches_reference():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        ctl = Controller(ControllerConfig(), generate_space())
        seq = rng.uniform(0, 30, size=int(rng.integers(1, 250)))
        for r in seq:
            ctl.apply_reward(4, float(r))
        assert ctl.omega[4] == pytest.approx(float(np.mean(seq[-100:])), abs=1e-12)


def test_interpolation_figure_shape():
    positions = [2, 4, 7, 9]
    probs = [0.4, 0.3, 0.2, 0.1]
    est = interpolate_probabilities(positions, probs, 12)
    assert est[0] == pytest.approx(0.4 / 2)
    assert est[11] == pytest.approx(0.1 / (11 - 9))
    assert est[positions].tolist() == pytest.approx(probs)
    assert est[3] == pytest.approx(0.35)
    assert est[1] == pytest.approx((0.2 + 0.4) / 2)


def test_interpolation_endpoints_known():
    est = interpolate_probabilities([0, 5], [0.6, 0.4], 6)
    assert est[0] == 0.6 and est[5] == 0.4


def test_update_learning_list():
    sp = generate_space()[:50]
    ctl = Controller(ControllerConfig(n_prune=50), sp)
    for _ in range(5):
        ctl.apply_reward(0, 20)
    ctl.apply_reward(3, 0.0)
    before = set(ctl.p_learn)
    new = ctl.update_learning_list()
    assert len(ctl.p_learn) == 6 and ctl.p_learn == sorted(ctl.p_learn)
    assert 3 not in ctl.p_learn  # lowest probability slot removed
    assert len(set(ctl.p_learn) - before) == 1
    assert new == sp[(set(ctl.p_learn) - before).pop()]
    assert ctl.omega == [1.0] * 6 and all(len(w) == 0 for w in ctl.reward_window)


def test_update_equal_values_drops_last_slot():
    ctl = Controller(ControllerConfig(n_prune=20), generate_space()[:20])
    assert ctl.worst_slot() == 5
    ctl.update_learning_list()
    assert 5 not in ctl.p_learn


def test_update_noop_when_everything_active():
    ctl = Controller(ControllerConfig(kappa=3, n_prune=3), generate_space()[:3])
    assert ctl.update_learning_list() is None
    assert ctl.p_learn == [0, 1, 2]


def test_update_sample_mode_uses_rng():
    ctl = Controller(ControllerConfig(n_prune=100, replacement_mode="sample"), generate_space()[:100])
    new = ctl.update_learning_list(np.random.default_rng(0))
    assert new is not None and len(ctl.p_learn) == 6


def test_lo_hashes_survive_update():
    ctl = Controller(ControllerConfig(n_prune=20), generate_space()[:20])
    ctl.compute_reward(42, 3, 3, 0)
    ctl.update_learning_list()
    assert ctl.compute_reward(42, 3, 3, 0) == 0


def test_config_validation_and_file_round_trip(tmp_path):
    cfg = ControllerConfig(alpha=3, tau=1.5)
    path = tmp_path / "c.json"
    cfg.to_file(path)
    assert ControllerConfig.from_file(path) == cfg
    path.write_text('{"alpha": 2, "bogus": 1}')
    with pytest.raises(ValueError):
        ControllerConfig.from_file(path)
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        ControllerConfig.from_file(path)
    for bad in ({"kappa": 0}, {"tau": 0}, {"alpha": -1}, {"kappa": 10, "n_prune": 5},
                {"quality_mode": "x"}, {"replacement_mode": "x"}, {"lo_hash_cap": 0}):
        with pytest.raises(ValueError):
            ControllerConfig(**bad)


def test_rank_triples_order():
    sp = [ParameterTriple(2, 95, 70, i) for i in range(5)]
    ranked = rank_triples(sp, np.array([3, 0, 3, 1, 0]), np.array([10, 10, 10, 10, 0]))
    assert [t.all_index for t in ranked] == [1, 3, 0, 2, 4]


def _prelearn(seed, cfg, space):
    g = gnp(12, 0.5, 99)
    rng = np.random.default_rng(seed)
    st = new_state(g, 2, rng=rng)
    greedy_construct(st, rng)
    sizes = []
    res = prelearn(st, TabuList(12), rng, cfg, space,
                   on_local_optimum=lambda s: sizes.append(g.is_kplex(s.members, 2)))
    return res, sizes


def test_prelearn_iteration_count_and_feasibility():
    space = generate_space()[::40]
    res, feas = _prelearn(0, ControllerConfig(alpha=10), space)
    assert res.iterations == 10 * len(space) == len(feas)
    assert all(feas)
    assert res.visits.tolist() == [10] * len(space)
    counts = [res.revisits[t.all_index // 40] for t in res.ranked]
    assert counts == sorted(counts)


def test_prelearn_full_space_single_round():
    res, feas = _prelearn(1, ControllerConfig(alpha=1), generate_space())
    assert res.iterations == 4158 and all(feas)


def test_prelearn_deterministic():
    space = generate_space()[::60]
    a, _ = _prelearn(5, ControllerConfig(alpha=3), space)
    b, _ = _prelearn(5, ControllerConfig(alpha=3), space)
    assert a.ranked == b.ranked
