"""BLS-RLE and the BLS-RND ablation."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .controller import (B_VALUES, E_VALUES, L_VALUES, Controller, ControllerConfig, ParameterTriple,
                         generate_space, prelearn)
from .graph import Graph
from .search import RETRY_CAP, TT1, TT2_BASE, TabuList, diversify, intensify
from .state import NS0, KPlexState


@dataclass
class SolverResult:
    """Outcome of one run. Timing fields are excluded from equality."""

    best_set: frozenset[int]
    best_size: int
    iterations: int
    iters_to_best: int
    algorithm: str
    k: int
    seed: int | None = None
    prelearn_iterations: int = 0
    time_to_best: float = field(default=0.0, compare=False)
    elapsed: float = field(default=0.0, compare=False)
    triple_trace: list[tuple] | None = field(default=None, repr=False)


class _Incumbent:
    def __init__(self, t0: float):
        self.t0 = t0
        self.best_set: frozenset[int] = frozenset()
        self.size = 0
        self.time = 0.0
        self.iteration = 0

    def offer(self, state: KPlexState, iteration: int) -> bool:
        if state.size <= self.size:
            return False
        if not state.graph.is_kplex(state.members, state.k):
            raise AssertionError("search produced an infeasible set")
        self.best_set = state.S
        self.size = state.size
        self.time = time.perf_counter() - self.t0
        self.iteration = iteration
        return True


def greedy_construct(state: KPlexState, rng: np.random.Generator) -> KPlexState:
    """Seed S with a random vertex, then add random ns0 vertices until none remain."""
    n = state.graph.n
    if n == 0:
        return state
    if state.size == 0:
        state.insert(int(rng.integers(n)))
    while True:
        cand = np.flatnonzero(state.labels() == NS0)
        if cand.size == 0:
            return state
        state.insert(int(cand[rng.integers(cand.size)]))


def _check_budget(time_limit, max_iter, target):
    if time_limit is None and max_iter is None and target is None:
        raise ValueError("give at least one of time_limit, max_iter or target")
    if time_limit is not None and time_limit < 0:
        raise ValueError("time_limit must be non-negative")
    if max_iter is not None and max_iter < 0:
        raise ValueError("max_iter must be non-negative")


class _Run:
    """Shared setup and loop bookkeeping for both solver variants."""

    def __init__(self, graph: Graph, k: int, time_limit, max_iter, seed, target, tt1, tt2_base, debug):
        if not isinstance(graph, Graph):
            raise TypeError("graph must be a kplex.Graph")
        if k < 1:
            raise ValueError("k must be a positive integer")
        _check_budget(time_limit, max_iter, target)
        self.t0 = time.perf_counter()
        self.deadline = None if time_limit is None else self.t0 + time_limit
        self.max_iter = max_iter
        self.target = target
        self.rng = np.random.default_rng(seed)
        self.state = KPlexState(graph, k, rng=self.rng, debug=debug)
        self.tabu = TabuList(graph.n, tt1, tt2_base)
        self.best = _Incumbent(self.t0)
        self.iteration = 0
        greedy_construct(self.state, self.rng)
        self.best.offer(self.state, 0)

    def reached(self) -> bool:
        """The incumbent cannot or need not improve."""
        if self.best.size >= self.state.graph.n:
            return True
        return self.target is not None and self.best.size >= self.target

    def done(self) -> bool:
        if self.reached():
            return True
        if self.max_iter is not None and self.iteration >= self.max_iter:
            return True
        return self.deadline is not None and time.perf_counter() >= self.deadline

    def step(self, triple, retry_cap: int) -> None:
        diversify(self.state, triple, self.tabu, self.rng, self.best.size, self.deadline, retry_cap)
        intensify(self.state, self.tabu, self.rng, self.best.size)
        self.iteration += 1
        self.best.offer(self.state, self.iteration)

    def result(self, algorithm: str, seed, trace, prelearn_iterations: int = 0) -> SolverResult:
        return SolverResult(
            best_set=self.best.best_set, best_size=self.best.size, iterations=self.iteration,
            iters_to_best=self.best.iteration, algorithm=algorithm, k=self.state.k, seed=seed,
            prelearn_iterations=prelearn_iterations, time_to_best=self.best.time,
            elapsed=time.perf_counter() - self.t0, triple_trace=trace)


def solve_rle(graph: Graph, k: int, *, time_limit: float | None = None, max_iter: int | None = None,
              seed: int | None = None, config: ControllerConfig | None = None, target: int | None = None,
              space: Sequence[ParameterTriple] | None = None, trace: bool = False,
              tt1: int = TT1, tt2_base: int = TT2_BASE, retry_cap: int = RETRY_CAP,
              debug: bool = False) -> SolverResult:
    """Breakout local search with a learned perturbation schedule.

    Parameters
    ----------
    graph : Graph
    k : int
    time_limit : float, optional
        Wall-clock budget in seconds, prelearning included.
    max_iter : int, optional
        Number of main-loop iterations (prelearning not counted).
    seed : int, optional
        Seeds the single random generator of the run.
    config : ControllerConfig, optional
        Learning parameters; defaults to the published settings.
    target : int, optional
        Stop as soon as a k-plex of this size is found.
    space : sequence of ParameterTriple, optional
        Replaces the full (l, e, b) grid.
    trace : bool
        Record (iteration, triple, reward) for every main-loop iteration.
    """
    cfg = config or ControllerConfig()
    run = _Run(graph, k, time_limit, max_iter, seed, target, tt1, tt2_base, debug)
    space = list(space) if space is not None else generate_space(cfg)
    ranked = space
    pre_iters = 0
    if cfg.alpha > 0 and not run.reached():
        pre = prelearn(run.state, run.tabu, run.rng, cfg, space,
                       best_size=lambda: run.best.size,
                       on_local_optimum=lambda st: run.best.offer(st, 0),
                       deadline=run.deadline, stop=run.reached)
        ranked, pre_iters = pre.ranked, pre.iterations
        run.state.reset_to(run.best.best_set)

    ctl = Controller(cfg, ranked)
    steps: list[tuple] | None = [] if trace else None
    while not run.done():
        triple, i = ctl.select(run.rng)
        run.step(triple, retry_cap)
        r = ctl.compute_reward(run.state.digest(), run.state.size, run.best.size, i)
        ctl.apply_reward(i, r)
        if ctl.iter_since_update > cfg.epsilon:
            ctl.update_learning_list(run.rng)
            ctl.iter_since_update = 0
        ctl.iter_since_update += 1
        if steps is not None:
            steps.append((run.iteration, (triple.l, triple.e, triple.b), r))
    return run.result("rle", seed, steps, pre_iters)


def random_triple(rng: np.random.Generator) -> ParameterTriple:
    """Uniform draw of l, e and b from their value sets."""
    l = L_VALUES[int(rng.integers(len(L_VALUES)))]
    e = E_VALUES[int(rng.integers(len(E_VALUES)))]
    b = B_VALUES[int(rng.integers(len(B_VALUES)))]
    return ParameterTriple(l, e, b)


def solve_rnd(graph: Graph, k: int, *, time_limit: float | None = None, max_iter: int | None = None,
              seed: int | None = None, target: int | None = None, trace: bool = False,
              tt1: int = TT1, tt2_base: int = TT2_BASE, retry_cap: int = RETRY_CAP,
              debug: bool = False) -> SolverResult:
    """Same search, with (l, e, b) drawn uniformly every iteration."""
    run = _Run(graph, k, time_limit, max_iter, seed, target, tt1, tt2_base, debug)
    steps: list[tuple] | None = [] if trace else None
    while not run.done():
        triple = random_triple(run.rng)
        run.step(triple, retry_cap)
        if steps is not None:
            steps.append((run.iteration, (triple.l, triple.e, triple.b), None))
    return run.result("rnd", seed, steps)


def solve(graph: Graph, k: int, algorithm: str = "rle", **kwargs) -> SolverResult:
    if algorithm == "rle":
        return solve_rle(graph, k, **kwargs)
    if algorithm == "rnd":
        kwargs.pop("config", None)
        kwargs.pop("space", None)
        return solve_rnd(graph, k, **kwargs)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected 'rle' or 'rnd'")
