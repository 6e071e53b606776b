import numpy as np
import pytest

from kplex.oracle import exact_max_kplex
from kplex.search import (TabuList, acceptance_threshold, allowed_mask, apply_move, choose_operator, diversify,
                          intensify, perturb_directed, perturb_random)
from kplex.state import IN_S, NS0, NS1, NS2, NS3, new_state

from conftest import complete, gnp, random_kplex


def test_tabu_semantics():
    t = TabuList(5)
    assert not t.is_tabu(2)
    t.forbid(2, 3)
    assert t.is_tabu(2) and t.mask().tolist() == [False, False, True, False, False]
    for _ in range(3):
        t.tick()
    assert not t.is_tabu(2)


def test_tt2_range():
    t = TabuList(3)
    rng = np.random.default_rng(0)
    vals = {t.tt2(4, rng) for _ in range(500)}
    assert vals == {8, 9, 10, 11}
    assert {t.tt2(0, rng) for _ in range(20)} == {8}


def test_intensify_examples():
    st = new_state(complete(3), 1, {0})
    intensify(st, rng=0)
    assert st.S == {0, 1, 2}
    before = st.S
    intensify(st, rng=0)
    assert st.S == before


@pytest.mark.parametrize("seed", range(10))
def test_intensify_reaches_local_optimum(seed):
    g = gnp(12, 0.5, seed)
    start = int(np.argmax(g.degree))
    st = new_state(g, 2, {start}, rng=seed)
    intensify(st, TabuList(12), rng=seed)
    assert not (st.labels() == NS0).any()
    assert st.is_feasible() and start in st.S
    assert st.size <= exact_max_kplex(g, 2)
    again = st.S
    intensify(st, rng=seed)
    assert st.S == again


def test_intensify_prefers_highest_in_count():
    # S={0,1}, k=2: both 2 and 3 are addable; 2 sees two members, 3 sees one
    from kplex.graph import Graph
    g = Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    st = new_state(g, 2, {0, 1})
    lab = st.labels()
    assert lab[2] == NS0 and lab[3] == NS0
    tabu = TabuList(4)
    added = []
    orig = st.insert
    st.insert = lambda v: (added.append(v), orig(v))
    intensify(st, tabu, rng=0)
    assert added[0] == 2


def test_intensify_honours_tabu_except_aspiration():
    st = new_state(complete(4), 1, {0, 1})
    tabu = TabuList(4)
    tabu.forbid(2, 10)
    tabu.forbid(3, 10)
    intensify(st, tabu, rng=0, best_size=4)
    assert st.S == {0, 1}
    intensify(st, tabu, rng=0, best_size=2)  # |S|+1 > best: aspiration
    assert st.S == {0, 1, 2, 3}


def test_directed_first_move_is_add_when_ns0_nonempty():
    g = gnp(12, 0.5, 1)
    st = new_state(g, 2, {int(np.argmax(g.degree))}, rng=1)
    assert (st.labels() == NS0).any()
    size = st.size
    perturb_directed(st, 1, TabuList(12), rng=1)
    assert st.size == size + 1


def test_directed_counter_advances_by_steps():
    g = gnp(12, 0.5, 2)
    st = new_state(g, 2, rng=2)
    intensify(st, rng=2)
    tabu = TabuList(12)
    perturb_directed(st, 3, tabu, rng=2)
    assert tabu.move_counter == 3


@pytest.mark.parametrize("seed", range(100))
def test_directed_l5_feasible_and_moves(seed):
    g = gnp(12, 0.5, seed)
    rng = np.random.default_rng(seed)
    st = new_state(g, 2, rng=rng)
    intensify(st, rng=rng)
    before = st.S
    perturb_directed(st, 5, TabuList(12), rng=rng)
    st.check_consistency()
    assert st.S != before


def best_resulting_size(st, tabu, best_size):
    lab = st.labels()
    allowed = np.flatnonzero(allowed_mask(st, lab, tabu, best_size))
    sizes = []
    for v in allowed.tolist():
        if lab[v] == NS0 or st.size < st.k:
            sizes.append(st.size + 1)
        elif lab[v] in (NS1, NS2):
            sizes.append(st.size)
        else:
            sizes.append(st.size + 1 - len(st.removal_set(v)))
    return max(sizes) if sizes else None


def test_directed_picks_least_degrading_move():
    rng = np.random.default_rng(3)
    for trial in range(40):
        g = gnp(12, float(rng.choice([0.3, 0.5, 0.7])), trial)
        k = int(rng.integers(1, 4))
        st = new_state(g, k, rng=rng)
        tabu = TabuList(12)
        intensify(st, tabu, rng=rng)
        for _ in range(20):
            expect = best_resulting_size(st, tabu, st.size)
            perturb_directed(st, 1, tabu, rng=rng, best_size=st.size)
            if expect is not None:
                assert st.size == expect


def test_no_tabu_insertion_without_aspiration():
    rng = np.random.default_rng(9)
    g = gnp(12, 0.5, 9)
    st = new_state(g, 2, rng=rng)
    tabu = TabuList(12)
    intensify(st, tabu, rng=rng)
    best = st.size
    for it in range(400):
        mask = tabu.mask().copy()
        lab = st.labels().copy()
        ok = allowed_mask(st, lab, tabu, best)
        entry_pool = (lab == NS0) | (lab == NS3)
        if it % 2 or not entry_pool.any():
            all_tabu = not ok.any()
        else:
            all_tabu = not (ok & entry_pool).any()
        before = st.S
        if it % 2:
            perturb_directed(st, 1, tabu, rng=rng, best_size=best)
        else:
            perturb_random(st, 1, 80, tabu, rng=rng, best_size=best)
        (v,) = st.S - before
        if mask[v]:
            assert all_tabu or st.size > best
        best = max(best, st.size)


def test_tenures_assigned():
    rng = np.random.default_rng(4)
    g = gnp(12, 0.5, 4)
    for _ in range(30):
        st = new_state(g, 2, random_kplex(g, 2, rng), rng=rng)
        tabu = TabuList(12)
        lab = st.labels()
        n12 = int(((lab == NS1) | (lab == NS2)).sum())
        outside = np.flatnonzero(lab != IN_S)
        v = int(outside[rng.integers(outside.size)])
        removed = apply_move(st, v, tabu, rng)
        if len(removed) == 1:
            assert 8 <= tabu.until[removed[0]] - tabu.move_counter <= 7 + max(n12, 1)
        for w in removed if len(removed) >= 2 else []:
            assert tabu.until[w] - tabu.move_counter == 7


def test_acceptance_threshold():
    assert acceptance_threshold(20, 0) == 0
    assert acceptance_threshold(20, 70) == 14
    assert acceptance_threshold(21, 90) == 18
    assert acceptance_threshold(20, 100) == 20


def test_random_b0_accepts_first_draw():
    g = gnp(12, 0.5, 5)
    rng = np.random.default_rng(5)
    st = new_state(g, 2, rng=rng)
    intensify(st, rng=rng)
    perturb_random(st, 5, 0, TabuList(12), rng=rng)
    st.check_consistency()


def test_random_b100_keeps_entry_size_unless_forced():
    rng = np.random.default_rng(6)
    for trial in range(20):
        g = gnp(12, 0.5, 50 + trial)
        st = new_state(g, 2, rng=rng)
        tabu = TabuList(12)
        intensify(st, tabu, rng=rng)
        entry = st.size
        lab = st.labels()
        pool = np.flatnonzero(((lab == NS0) | (lab == NS3)) & allowed_mask(st, lab, tabu, None))
        reachable = max(st.size + 1 - len(st.removal_set(int(v))) for v in pool)
        perturb_random(st, 1, 100, tabu, rng=rng, retry_cap=10_000)
        # a huge retry cap only forces a move when no draw can keep the entry size
        assert st.size >= min(entry, reachable)
        st.check_consistency()


def test_random_feasible_over_many_moves():
    g = gnp(12, 0.5, 8)
    rng = np.random.default_rng(8)
    st = new_state(g, 3, rng=rng, debug=True)
    tabu = TabuList(12)
    for _ in range(10_000):
        perturb_random(st, 1, int(rng.integers(70, 91)), tabu, rng=rng)
        assert st.is_feasible()
    st.check_consistency()


def test_step_validation():
    st = new_state(complete(3), 1)
    with pytest.raises(ValueError):
        perturb_directed(st, 0)
    with pytest.raises(ValueError):
        perturb_random(st, 0, 80)
    with pytest.raises(ValueError):
        perturb_random(st, 1, 101)


def test_diversify_operator_choice():
    rng = np.random.default_rng(0)
    assert all(choose_operator(100, rng) == "directed" for _ in range(1000))
    assert all(choose_operator(0, rng) == "random" for _ in range(1000))
    frac = np.mean([choose_operator(95, rng) == "directed" for _ in range(100_000)])
    assert abs(frac - 0.95) < 0.005


def test_diversify_applies_l_moves():
    g = gnp(12, 0.5, 3)
    for e in (0, 100):
        rng = np.random.default_rng(e)
        st = new_state(g, 2, rng=rng)
        intensify(st, rng=rng)
        tabu = TabuList(12)
        diversify(st, (4, e, 80), tabu, rng)
        assert tabu.move_counter == 4
        st.check_consistency()
