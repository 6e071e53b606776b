"""Incremental k-plex solution state and the unified (q,1)-swap."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import DENSE_LIMIT, Graph

# Class labels returned by KPlexState.labels(); members of S are IN_S.
IN_S = -1
NS0, NS1, NS2, NS3 = 0, 1, 2, 3


class InfeasibleError(ValueError):
    """The vertex set is not a k-plex."""


@dataclass(frozen=True)
class NeighborhoodSets:
    """Partition of V minus S by how each outside vertex can enter S.

    ``exchange`` maps ns1 vertices to their unique critical non-neighbour
    (a one-element frozenset) and ns2 vertices to ``S - N(v)``. Removal
    sets for ns3 vertices depend on a greedy repair and are computed on
    demand by :meth:`KPlexState.removal_set`.
    """

    ns0: frozenset[int]
    ns1: frozenset[int]
    ns2: frozenset[int]
    ns3: frozenset[int]
    exchange: dict[int, frozenset[int]] = field(default_factory=dict, compare=False)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class KPlexState:
    """A feasible k-plex ``S`` with incrementally maintained counters.

    Parameters
    ----------
    graph : Graph
    k : int
        Positive plex parameter (k=1 gives cliques).
    initial : iterable of int
        Feasible starting set, possibly empty.
    rng : numpy Generator or seed
        Source of the hash keys and the removal tie-break permutation.
    debug : bool
        Verify feasibility after every insertion and swap.
    """

    def __init__(self, graph: Graph, k: int, initial: Iterable[int] = (), rng=None, debug: bool = False):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.graph = graph
        self.k = int(k)
        self.debug = debug
        n = graph.n
        rng = _as_rng(rng)
        keys = rng.integers(0, 2**64, size=n + 1, dtype=np.uint64, endpoint=False)
        self._hash_base = int(keys[n])
        self._keys = [int(x) for x in keys[:n]]
        self._tie_rank = rng.permutation(n)
        self._mat = graph.matrix if n <= DENSE_LIMIT else None
        self.in_s = np.zeros(n, dtype=bool)
        self.in_count = np.zeros(n, dtype=np.int64)
        self.members: set[int] = set()
        self.size = 0
        self._hash = self._hash_base
        self._version = 0
        self._labels_cache: tuple[int, np.ndarray] | None = None

        initial = list(dict.fromkeys(int(v) for v in initial))
        for v in initial:
            if not 0 <= v < n:
                raise IndexError(f"vertex {v} out of range")
        if not graph.is_kplex(initial, self.k):
            raise InfeasibleError(f"initial set is not a {self.k}-plex")
        for v in initial:
            self._add(v)

    # -- primitive mutation -------------------------------------------------
    def _add(self, v: int) -> None:
        self.in_s[v] = True
        self.in_count[self.graph.neighbor_array(v)] += 1
        self.members.add(v)
        self.size += 1
        self._hash ^= self._keys[v]
        self._version += 1

    def _drop(self, v: int) -> None:
        self.in_s[v] = False
        self.in_count[self.graph.neighbor_array(v)] -= 1
        self.members.discard(v)
        self.size -= 1
        self._hash ^= self._keys[v]
        self._version += 1

    def insert(self, v: int) -> None:
        """Add ``v`` to S. The caller guarantees feasibility (checked when debug)."""
        if self.in_s[v]:
            raise ValueError(f"vertex {v} is already in S")
        self._add(v)
        if self.debug and not self.is_feasible():
            self._drop(v)
            raise InfeasibleError(f"inserting {v} breaks the {self.k}-plex property")

    def remove(self, v: int) -> None:
        if not self.in_s[v]:
            raise ValueError(f"vertex {v} is not in S")
        self._drop(v)

    def reset_to(self, vertices: Iterable[int]) -> None:
        """Move S to another k-plex, dropping first so every step stays feasible."""
        target = set(int(v) for v in vertices)
        if not self.graph.is_kplex(target, self.k):
            raise InfeasibleError(f"target set is not a {self.k}-plex")
        for v in sorted(self.members - target):
            self._drop(v)
        for v in sorted(target - self.members):
            self._add(v)

    # -- queries ------------------------------------------------------------
    @property
    def S(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def threshold(self) -> int:
        """Minimum in-S degree a member needs: |S| - k."""
        return self.size - self.k

    @property
    def critical(self) -> frozenset[int]:
        t = self.threshold
        if t < 0:
            return frozenset()
        return frozenset(int(v) for v in np.flatnonzero(self.in_s & (self.in_count == t)))

    def is_feasible(self) -> bool:
        if self.size == 0:
            return True
        return bool((self.in_count[self.in_s] >= self.threshold).all())

    def recount(self) -> np.ndarray:
        """|N(v) & S| for every v, recomputed from scratch."""
        out = np.zeros(self.graph.n, dtype=np.int64)
        for v in self.members:
            out[self.graph.neighbor_array(v)] += 1
        return out

    def check_consistency(self) -> None:
        """Raise AssertionError if incremental bookkeeping drifted."""
        assert np.array_equal(self.in_count, self.recount()), "in_count drift"
        assert self.size == len(self.members) == int(self.in_s.sum()), "size drift"
        assert set(np.flatnonzero(self.in_s).tolist()) == self.members, "membership drift"
        assert self._hash == self.digest_of(self.members), "hash drift"
        assert self.graph.is_kplex(self.members, self.k), "infeasible state"

    def digest(self) -> int:
        """Order-independent 64-bit digest of S."""
        return self._hash

    __hash__ = None  # mutable

    def digest_of(self, vertices: Iterable[int]) -> int:
        h = self._hash_base
        for v in set(vertices):
            h ^= self._keys[v]
        return h

    def _row(self, v: int) -> np.ndarray:
        if self._mat is not None:
            return self._mat[v]
        row = np.zeros(self.graph.n, dtype=bool)
        row[self.graph.neighbor_array(v)] = True
        return row

    def _critical_misses(self) -> tuple[np.ndarray, np.ndarray]:
        """(critical indices, |C - N(v)| for every vertex v)."""
        n = self.graph.n
        t = self.threshold
        if t < 0 or self.size == 0:
            return np.empty(0, dtype=np.intp), np.zeros(n, dtype=np.int64)
        crit = np.flatnonzero(self.in_s & (self.in_count == t))
        if crit.size == 0:
            return crit, np.zeros(n, dtype=np.int64)
        if self._mat is not None:
            adj = self._mat[crit].sum(axis=0, dtype=np.int64)
        else:
            adj = np.bincount(
                np.concatenate([self.graph.neighbor_array(c) for c in crit]), minlength=n
            )
        return crit, crit.size - adj

    def labels(self) -> np.ndarray:
        """Class label per vertex: IN_S for members, else NS0..NS3.

        The returned array is cached until the next mutation; do not modify it.
        """
        if self._labels_cache is not None and self._labels_cache[0] == self._version:
            return self._labels_cache[1]
        n = self.graph.n
        lab = np.full(n, NS3, dtype=np.int8)
        lab[self.in_s] = IN_S
        if self.size:
            t = self.threshold
            ic = self.in_count
            _, miss = self._critical_misses()
            frontier = ~self.in_s & (ic >= 1)
            lo = max(t, 0)
            ns2 = frontier & (ic == lo) & (miss == 0)
            ns1 = frontier & (ic >= lo) & (miss == 1)
            ns0 = frontier & (ic >= max(t + 1, 0)) & (miss == 0)
            lab[ns2] = NS2
            lab[ns1] = NS1
            lab[ns0] = NS0
        self._labels_cache = (self._version, lab)
        return lab

    def ns0_mask(self) -> np.ndarray:
        return self.labels() == NS0

    def classify(self) -> NeighborhoodSets:
        lab = self.labels()
        sets = [frozenset(np.flatnonzero(lab == c).tolist()) for c in (NS0, NS1, NS2, NS3)]
        exchange: dict[int, frozenset[int]] = {}
        crit = self.critical
        for v in sets[1]:
            exchange[v] = frozenset(c for c in crit if c not in self.graph.neighbors(v))
        for v in sets[2]:
            exchange[v] = frozenset(self.members - self.graph.neighbors(v))
        return NeighborhoodSets(*sets, exchange=exchange)

    # -- swaps --------------------------------------------------------------
    def unique_critical_nonneighbor(self, v: int) -> int:
        crit, _ = self._critical_misses()
        row = self._row(v)
        miss = crit[~row[crit]]
        if miss.size != 1:
            raise ValueError(f"vertex {v} does not have a unique critical non-neighbour")
        return int(miss[0])

    def removal_set(self, v: int) -> list[int]:
        """Vertices dropped to restore feasibility after inserting ``v``.

        Members of ``S - N(v)`` are removed one at a time, lowest in-S degree
        first (ties by a per-state random permutation), until the enlarged
        set is a k-plex again. Empty when ``v`` can be added directly.
        """
        if self.in_s[v]:
            raise ValueError(f"vertex {v} is already in S")
        mem = np.flatnonzero(self.in_s)
        if mem.size == 0:
            return []
        k = self.k
        vrow = self._row(v)
        adj_v = vrow[mem]
        ic = self.in_count[mem] + adj_v
        v_ic = int(self.in_count[v])
        size = mem.size + 1
        alive = np.ones(mem.size, dtype=bool)
        cand = ~adj_v
        rank = self._tie_rank[mem]
        removed: list[int] = []
        while True:
            need = size - k
            if v_ic >= need and not (ic[alive] < need).any():
                return removed
            pool = np.flatnonzero(cand & alive)
            # unreachable for a feasible S: dropping all of S - N(v) always repairs
            assert pool.size, "repair failed"
            best = pool[np.lexsort((rank[pool], ic[pool]))[0]]
            u = int(mem[best])
            alive[best] = False
            removed.append(u)
            size -= 1
            ic -= self._row(u)[mem]

    def repair_sizes(self, cands: np.ndarray, max_q: int | None = None,
                     minimal_only: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Batched :meth:`removal_set` for the outside vertices ``cands``.

        Returns ``(q, first)``: the number of vertices the greedy repair
        drops for each candidate, and the first one dropped (-1 when q = 0).
        Runs the same greedy on all candidates at once (dense graphs only;
        otherwise falls back to one repair per candidate).

        Candidates needing more than ``max_q`` removals get q = -1. With
        ``minimal_only`` the repair stops at the first level where some
        candidate is repaired, so only the minimal-q candidates are resolved.
        """
        cands = np.asarray(cands, dtype=np.intp)
        q = np.zeros(cands.size, dtype=np.int64)
        first = np.full(cands.size, -1, dtype=np.intp)
        mem = np.flatnonzero(self.in_s)
        if cands.size == 0 or mem.size == 0:
            return q, first
        if self._mat is None:
            for j, v in enumerate(cands):
                r = self.removal_set(int(v))
                q[j] = len(r)
                if r:
                    first[j] = r[0]
            if max_q is not None:
                q[q > max_q] = -1
            if minimal_only and q.size:
                q[q != q[q >= 0].min(initial=q.max())] = -1
            return q, first
        k = self.k
        A = self._mat[np.ix_(cands, mem)]
        IC = self.in_count[mem][None, :] + A
        v_ic = self.in_count[cands]
        pickable = ~A
        rank = self._tie_rank[mem][None, :]
        big = np.iinfo(np.int64).max
        size = mem.size + 1
        rows = np.arange(cands.size)
        while rows.size:
            need = size - k
            ic = IC[rows]
            # removed members are neither pickable nor adjacent to v and stop counting
            alive = pickable[rows] | A[rows]
            ok = (v_ic[rows] >= need) & np.where(alive, ic >= need, True).all(axis=1)
            done_now = ok.any()
            rows = rows[~ok]
            if rows.size == 0:
                break
            if (minimal_only and done_now) or (max_q is not None and q[rows[0]] >= max_q):
                q[rows] = -1
                break
            ic = IC[rows]
            key = np.where(pickable[rows], ic * (self.graph.n + 1) + rank, big)
            pick = key.argmin(axis=1)
            assert (key[np.arange(rows.size), pick] != big).all(), "repair failed"
            first[rows[q[rows] == 0]] = mem[pick[q[rows] == 0]]
            q[rows] += 1
            pickable[rows, pick] = False
            IC[rows] -= self._mat[np.ix_(mem[pick], mem)]
            size -= 1
        return q, first

    def move_size(self, v: int, label: int | None = None) -> int:
        """|S| after the swap that inserts ``v``."""
        if label is None:
            label = int(self.labels()[v])
        if label == NS0:
            return self.size + 1
        if label in (NS1, NS2):
            return self.size
        if label == NS3:
            return self.size + 1 - len(self.removal_set(v))
        raise ValueError(f"vertex {v} is already in S")

    def swap(self, v_in: int, rule: str, u: int | None = None, rng=None) -> list[int]:
        """Apply a (q,1)-swap inserting ``v_in``; returns the removed vertices.

        ``rule`` is ``"add"`` (v_in in ns0, q=0), ``"one-one"`` (v_in in ns1
        or ns2, q=1) or ``"q-one"`` (v_in in ns3, greedy repair). For ns2 the
        exchanged vertex ``u`` is drawn uniformly from ``S - N(v_in)`` when
        not given.
        """
        if self.in_s[v_in]:
            raise ValueError(f"vertex {v_in} is already in S")
        label = int(self.labels()[v_in])
        if rule == "add":
            if label != NS0:
                raise ValueError(f"add-only move needs an ns0 vertex, {v_in} is ns{label}")
            removed: list[int] = []
        elif rule == "one-one":
            if label == NS1:
                partner = self.unique_critical_nonneighbor(v_in)
                if u is not None and u != partner:
                    raise ValueError(f"ns1 vertex {v_in} must exchange with {partner}, not {u}")
                u = partner
            elif label == NS2:
                options = sorted(self.members - self.graph.neighbors(v_in))
                if u is None:
                    u = options[int(_as_rng(rng).integers(len(options)))]
                elif u not in options:
                    raise ValueError(f"{u} is not in S - N({v_in})")
            else:
                raise ValueError(f"one-one move needs an ns1/ns2 vertex, {v_in} is ns{label}")
            if not self.in_s[u]:
                raise ValueError(f"vertex {u} is not in S")
            removed = [u]
        elif rule == "q-one":
            if label != NS3:
                raise ValueError(f"q-one move needs an ns3 vertex, {v_in} is ns{label}")
            removed = self.removal_set(v_in)
        else:
            raise ValueError(f"unknown swap rule {rule!r}")
        for w in removed:
            self._drop(w)
        self._add(v_in)
        if self.debug and not self.is_feasible():
            raise InfeasibleError(f"swap inserting {v_in} left an infeasible set")
        return removed

    def rule_for(self, label: int) -> str:
        return ("add", "one-one", "one-one", "q-one")[label]


def new_state(graph: Graph, k: int, initial: Iterable[int] = (), rng=None, debug: bool = False) -> KPlexState:
    return KPlexState(graph, k, initial, rng=rng, debug=debug)


def classify(state: KPlexState) -> NeighborhoodSets:
    return state.classify()
