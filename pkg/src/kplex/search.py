"""Descent and perturbation moves with tabu control.

All moves advance one shared move counter, which is also the clock used
for tabu tenures.
"""
from __future__ import annotations

import time

import numpy as np

from .state import IN_S, NS0, NS1, NS2, NS3, KPlexState

TT1 = 7
TT2_BASE = 7
RETRY_CAP = 50


class TabuList:
    """Per-vertex expiry counters; ``v`` is tabu while ``move_counter < until[v]``."""

    def __init__(self, n: int, tt1: int = TT1, tt2_base: int = TT2_BASE):
        self.until = np.zeros(n, dtype=np.int64)
        self.move_counter = 0
        self.tt1 = tt1
        self.tt2_base = tt2_base

    def is_tabu(self, v: int) -> bool:
        return self.move_counter < self.until[v]

    def mask(self) -> np.ndarray:
        return self.move_counter < self.until

    def tick(self) -> None:
        self.move_counter += 1

    def forbid(self, v: int, tenure: int) -> None:
        """Keep ``v`` out of S for the next ``tenure`` moves."""
        self.until[v] = self.move_counter + tenure

    def tt2(self, n_exchange: int, rng: np.random.Generator) -> int:
        # random(|NS1 u NS2|) is drawn from 1..|NS1 u NS2|; an empty pool counts as 1
        return self.tt2_base + int(rng.integers(1, max(n_exchange, 1) + 1))


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _timed_out(deadline: float | None) -> bool:
    return deadline is not None and time.perf_counter() >= deadline


def _add_only_mask(state: KPlexState, lab: np.ndarray) -> np.ndarray:
    """Outside vertices whose insertion needs no removal (q = 0)."""
    if state.size < state.k:
        # any set of at most k vertices is a k-plex
        return lab != IN_S
    return lab == NS0


def allowed_mask(state: KPlexState, lab: np.ndarray, tabu: TabuList | None, best_size: int | None) -> np.ndarray:
    """Outside vertices that may enter S: non-tabu, or tabu under aspiration.

    Aspiration admits a tabu vertex whose move gives |S| > best_size. Since
    |S| <= best_size during the search, only q = 0 moves can qualify.
    """
    outside = lab != IN_S
    if tabu is None:
        return outside
    ok = outside & ~tabu.mask()
    if best_size is not None and state.size + 1 > best_size:
        ok |= _add_only_mask(state, lab)
    return ok


def _fallback(pool: np.ndarray, tabu: TabuList | None, rng: np.random.Generator) -> int:
    """Every candidate is tabu: take one whose tenure expires first."""
    idx = np.flatnonzero(pool)
    if tabu is not None:
        until = tabu.until[idx]
        idx = idx[until == until.min()]
    return int(idx[rng.integers(idx.size)])


def apply_move(state: KPlexState, v: int, tabu: TabuList | None, rng: np.random.Generator, removed: list[int] | None = None) -> list[int]:
    """Insert ``v`` with the swap rule matching its class and assign tenures."""
    lab = state.labels()
    label = int(lab[v])
    n_exchange = int(np.count_nonzero((lab == NS1) | (lab == NS2)))
    if label == NS3 and removed is not None:
        for w in removed:
            state._drop(w)
        state._add(v)
    else:
        removed = state.swap(v, state.rule_for(label), rng=rng)
    if tabu is not None:
        tabu.tick()
        if len(removed) == 1:
            tabu.forbid(removed[0], tabu.tt2(n_exchange, rng))
        elif len(removed) >= 2:
            for w in removed:
                tabu.forbid(w, tabu.tt1)
    return removed


def intensify(state: KPlexState, tabu: TabuList | None = None, rng=None, best_size: int | None = None) -> KPlexState:
    """Descent: add ns0 vertices until none (non-tabu) remain.

    Among the admissible ns0 vertices the one with the largest in-S degree
    is added; ties are broken uniformly at random.
    """
    rng = _rng(rng)
    while True:
        lab = state.labels()
        cand = (lab == NS0) & allowed_mask(state, lab, tabu, best_size)
        idx = np.flatnonzero(cand)
        if idx.size == 0:
            return state
        ic = state.in_count[idx]
        top = idx[ic == ic.max()]
        v = int(top[rng.integers(top.size)])
        state.insert(v)
        if tabu is not None:
            tabu.tick()


def _directed_choice(state: KPlexState, tabu: TabuList | None, rng: np.random.Generator, best_size: int | None) -> tuple[int, list[int] | None] | None:
    lab = state.labels()
    allowed = allowed_mask(state, lab, tabu, best_size)
    outside = lab != IN_S
    if not outside.any():
        return None
    if not allowed.any():
        v = _fallback(outside, tabu, rng)
        return v, None

    zero = np.flatnonzero(allowed & _add_only_mask(state, lab))
    if zero.size:
        return int(zero[rng.integers(zero.size)]), None

    # one-degradation moves: ns1/ns2 exchanges and ns3 vertices repaired by a single removal
    ns3 = np.flatnonzero(allowed & (lab == NS3))
    exch = np.flatnonzero(allowed & ((lab == NS1) | (lab == NS2)))
    if exch.size:
        pre = ns3[state.in_count[ns3] >= state.threshold]
        q, first = state.repair_sizes(pre, max_q=1)
    else:
        # nothing removes one vertex unless some ns3 repair does: take the minimal q
        pre = ns3
        q, first = state.repair_sizes(pre, minimal_only=True)
    ok = q > 0
    if exch.size or (ok.any() and q[ok].min() == 1):
        one = np.concatenate([exch, pre[q == 1]])
        v = int(one[rng.integers(one.size)])
        if lab[v] == NS3:
            return v, [int(first[pre == v][0])]
        return v, None

    # every admissible move removes at least two vertices: pick the fewest
    pool = pre[ok]
    v = int(pool[rng.integers(pool.size)])
    return v, state.removal_set(v)


def perturb_directed(state: KPlexState, steps: int, tabu: TabuList | None = None, rng=None,
                     best_size: int | None = None, deadline: float | None = None) -> KPlexState:
    """Apply ``steps`` moves, each one losing as few vertices as possible."""
    if steps < 1:
        raise ValueError("perturbation depth must be >= 1")
    rng = _rng(rng)
    for _ in range(steps):
        if _timed_out(deadline):
            break
        choice = _directed_choice(state, tabu, rng, best_size)
        if choice is None:
            break
        v, removed = choice
        apply_move(state, v, tabu, rng, removed)
    return state


def acceptance_threshold(entry_size: int, b: int) -> int:
    """Smallest |S| a random move may produce: floor(b% of the entry size)."""
    return (b * entry_size) // 100


def perturb_random(state: KPlexState, steps: int, b: int, tabu: TabuList | None = None, rng=None,
                   best_size: int | None = None, deadline: float | None = None,
                   retry_cap: int = RETRY_CAP) -> KPlexState:
    """Apply ``steps`` random ns0/ns3 moves filtered by the strength ``b``.

    A drawn move is kept when the resulting |S| reaches
    :func:`acceptance_threshold`; after ``retry_cap`` rejections the best
    rejected draw is applied anyway.
    """
    if steps < 1:
        raise ValueError("perturbation depth must be >= 1")
    if not 0 <= b <= 100:
        raise ValueError("b must lie in 0..100")
    rng = _rng(rng)
    floor_size = acceptance_threshold(state.size, b)
    for _ in range(steps):
        if _timed_out(deadline):
            break
        lab = state.labels()
        entry_pool = (lab == NS0) | (lab == NS3)
        if not entry_pool.any():
            choice = _directed_choice(state, tabu, rng, best_size)
            if choice is None:
                break
            apply_move(state, choice[0], tabu, rng, choice[1])
            continue
        pool = np.flatnonzero(entry_pool & allowed_mask(state, lab, tabu, best_size))
        if pool.size == 0:
            v = _fallback(entry_pool, tabu, rng)
            apply_move(state, v, tabu, rng)
            continue
        best = None
        picked = None
        for _ in range(retry_cap):
            v = int(pool[rng.integers(pool.size)])
            if lab[v] == NS0:
                removed: list[int] = []
            else:
                removed = state.removal_set(v)
            size_after = state.size + 1 - len(removed)
            if size_after >= floor_size:
                picked = (v, removed)
                break
            if best is None or size_after > best[0]:
                best = (size_after, v, removed)
        if picked is None:
            picked = best[1], best[2]
        apply_move(state, picked[0], tabu, rng, picked[1])
    return state


def choose_operator(e: int, rng: np.random.Generator) -> str:
    """'directed' with probability e/100, otherwise 'random'."""
    return "directed" if rng.random() * 100.0 < e else "random"


def diversify(state: KPlexState, triple, tabu: TabuList | None, rng, best_size: int | None = None,
              deadline: float | None = None, retry_cap: int = RETRY_CAP) -> KPlexState:
    """Perturb with the (l, e, b) triple: one operator choice, ``l`` moves."""
    rng = _rng(rng)
    l, e, b = triple[0], triple[1], triple[2]
    if choose_operator(e, rng) == "directed":
        return perturb_directed(state, l, tabu, rng, best_size, deadline)
    return perturb_random(state, l, b, tabu, rng, best_size, deadline, retry_cap)
