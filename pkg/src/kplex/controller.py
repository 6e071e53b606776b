"""Reinforcement-learning control of the perturbation triple (l, e, b)."""
from __future__ import annotations

import json
import math
import os
import time
from collections import deque
from dataclasses import asdict, dataclass, fields
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .search import TabuList, diversify, intensify
from .state import KPlexState

L_VALUES = tuple([i + 2 for i in range(30)] + [2 ** (i - 25) for i in range(30, 33)])
E_VALUES = tuple(range(95, 101))
B_VALUES = tuple(range(70, 91))


class ParameterTriple(NamedTuple):
    l: int
    e: int
    b: int
    all_index: int = -1


@dataclass
class ControllerConfig:
    """Learning parameters; the defaults are the published settings."""

    kappa: int = 6
    alpha: int = 100
    tau: float = 2.0
    epsilon: int = 4000
    delta1: float = 2.0
    delta2: float = 1.0
    window: int = 100
    n_prune: int = 2375
    quality_mode: str = "verbatim"
    replacement_mode: str = "argmax"
    lo_hash_cap: int | None = None

    def __post_init__(self):
        for name in ("kappa", "window", "n_prune", "epsilon"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.kappa > self.n_prune:
            raise ValueError("kappa must not exceed n_prune")
        if self.quality_mode not in ("verbatim", "ratio"):
            raise ValueError(f"unknown quality_mode {self.quality_mode!r}")
        if self.replacement_mode not in ("argmax", "sample"):
            raise ValueError(f"unknown replacement_mode {self.replacement_mode!r}")
        if self.lo_hash_cap is not None and self.lo_hash_cap < 1:
            raise ValueError("lo_hash_cap must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "ControllerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ControllerConfig":
        """Read a flat JSON object whose keys are field names."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a flat JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_file(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)


def generate_space(cfg: ControllerConfig | None = None) -> list[ParameterTriple]:
    """All (l, e, b) triples in lexicographic (l-index, e, b) order."""
    out = []
    for l in L_VALUES:
        for e in E_VALUES:
            for b in B_VALUES:
                out.append(ParameterTriple(l, e, b, len(out)))
    return out


def softmax(values: Sequence[float], tau: float) -> np.ndarray:
    z = np.asarray(values, dtype=float) / tau
    z = np.exp(z - z.max())
    return z / z.sum()


def interpolate_probabilities(positions: Sequence[int], probs: Sequence[float], total: int) -> np.ndarray:
    """Estimate selection probabilities for every position in ``0..total-1``.

    Known values sit at ``positions``; neighbouring known points are joined
    by straight lines. Left of the first known point the curve runs to
    ``p_first / pos_first`` at position 0, right of the last known point to
    ``p_last / (total - 1 - pos_last)`` at the final position.
    """
    order = np.argsort(positions)
    xs = [float(positions[i]) for i in order]
    ys = [float(probs[i]) for i in order]
    last = total - 1
    if xs[0] > 0:
        xs.insert(0, 0.0)
        ys.insert(0, ys[0] / xs[1])
    if xs[-1] < last:
        ys.append(ys[-1] / (last - xs[-1]))
        xs.append(float(last))
    return np.interp(np.arange(total, dtype=float), xs, ys)


class Controller:
    """Softmax action selection over the active learning list.

    ``p_all`` is the prelearning-ranked triple list (truncated to
    ``n_prune``); ``p_learn`` holds positions into ``p_all`` kept in
    ascending order, so slot ``i`` is the learn-rank used by the reward.
    """

    def __init__(self, cfg: ControllerConfig, ranked: Sequence[ParameterTriple]):
        if not ranked:
            raise ValueError("empty parameter space")
        self.cfg = cfg
        self.p_all = list(ranked[: cfg.n_prune])
        self.kappa = min(cfg.kappa, len(self.p_all))
        self.p_learn = list(range(self.kappa))
        self.reward_window = [deque(maxlen=cfg.window) for _ in range(self.kappa)]
        self.omega = [1.0] * self.kappa
        self.lo_hashes: dict[int, None] = {}
        self.iter_since_update = 0

    @property
    def learning_list(self) -> list[ParameterTriple]:
        return [self.p_all[j] for j in self.p_learn]

    def probabilities(self) -> np.ndarray:
        return softmax(self.omega, self.cfg.tau)

    def select(self, rng: np.random.Generator) -> tuple[ParameterTriple, int]:
        p = self.probabilities()
        i = int(rng.choice(self.kappa, p=p))
        return self.p_all[self.p_learn[i]], i

    def quality(self, size: int, best_size: int) -> float:
        if best_size <= 0:
            raise ValueError("best size must be positive when rewarding")
        if self.cfg.quality_mode == "ratio":
            return (size / best_size) ** 2 * 10.0
        return (1.0 - (size - best_size) / best_size) ** 2 * 10.0

    def compute_reward(self, digest: int, size: int, best_size: int, i: int) -> float:
        """Distance-and-quality reward for slot ``i``; 0 for a revisited optimum."""
        if not 0 <= i < self.kappa:
            raise IndexError(f"learn-rank {i} out of range")
        if digest in self.lo_hashes:
            return 0.0
        self.lo_hashes[digest] = None
        cap = self.cfg.lo_hash_cap
        if cap is not None and len(self.lo_hashes) > cap:
            del self.lo_hashes[next(iter(self.lo_hashes))]
        return self.cfg.delta1 * (self.kappa - i) + self.cfg.delta2 * self.quality(size, best_size)

    def apply_reward(self, i: int, r: float) -> None:
        w = self.reward_window[i]
        w.append(r)
        self.omega[i] = math.fsum(w) / len(w)

    def worst_slot(self) -> int:
        p = self.probabilities()
        low = p.min()
        return int(np.flatnonzero(p == low)[-1])

    def update_learning_list(self, rng: np.random.Generator | None = None) -> ParameterTriple | None:
        """Swap the least likely triple for the most promising outside one.

        Returns the triple that joined the list, or None when every triple
        is already active.
        """
        total = len(self.p_all)
        if len(self.p_learn) >= total:
            return None
        p = self.probabilities()
        est = interpolate_probabilities(self.p_learn, p, total)
        outside = np.setdiff1d(np.arange(total), self.p_learn)
        scores = est[outside]
        if self.cfg.replacement_mode == "sample" and rng is not None and scores.sum() > 0:
            newcomer = int(rng.choice(outside, p=scores / scores.sum()))
        else:
            newcomer = int(outside[np.argmax(scores)])
        worst = self.worst_slot()
        members = [j for s, j in enumerate(self.p_learn) if s != worst]
        members.append(newcomer)
        self.p_learn = sorted(members)
        self.omega = [1.0] * self.kappa
        for w in self.reward_window:
            w.clear()
        return self.p_all[newcomer]


@dataclass
class PrelearnResult:
    ranked: list[ParameterTriple]
    revisits: np.ndarray
    visits: np.ndarray
    iterations: int


def rank_triples(space: Sequence[ParameterTriple], revisits: np.ndarray, visits: np.ndarray) -> list[ParameterTriple]:
    """Ascending revisit rate, ties by canonical index; unvisited triples last."""
    def key(j):
        v = visits[j]
        rate = revisits[j] / v if v else math.inf
        return (rate, space[j].all_index, j)
    return [space[j] for j in sorted(range(len(space)), key=key)]


def prelearn(state: KPlexState, tabu: TabuList, rng: np.random.Generator, cfg: ControllerConfig,
             space: Sequence[ParameterTriple] | None = None, best_size: Callable[[], int] | None = None,
             on_local_optimum: Callable[[KPlexState], None] | None = None,
             deadline: float | None = None, stop: Callable[[], bool] | None = None) -> PrelearnResult:
    """Rank triples by how often iterated local search revisits known optima.

    Every triple is applied ``cfg.alpha`` times (round-robin over the
    space) as perturb, descend, look up the optimum's digest. The result
    lists the space sorted by revisit count (rate when the deadline cut
    the schedule short). ``stop`` is polled before every iteration and
    ends prelearning early, like the deadline.
    """
    if space is None:
        space = generate_space(cfg)
    revisits = np.zeros(len(space), dtype=np.int64)
    visits = np.zeros(len(space), dtype=np.int64)
    seen: set[int] = set()
    iterations = 0
    halted = False
    for _ in range(cfg.alpha):
        for j, triple in enumerate(space):
            if (deadline is not None and time.perf_counter() >= deadline) or (stop is not None and stop()):
                halted = True
                break
            best = best_size() if best_size is not None else None
            diversify(state, triple, tabu, rng, best, deadline)
            intensify(state, tabu, rng, best)
            h = state.digest()
            if h in seen:
                revisits[j] += 1
            else:
                seen.add(h)
            visits[j] += 1
            iterations += 1
            if on_local_optimum is not None:
                on_local_optimum(state)
        if halted:
            break
    ranked = rank_triples(space, revisits, visits) if cfg.alpha else list(space)
    return PrelearnResult(ranked, revisits, visits, iterations)
