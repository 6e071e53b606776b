"""Exact maximum k-plex for small graphs, used to check the heuristic."""
from __future__ import annotations

from itertools import combinations

from .graph import Graph

EXACT_LIMIT = 30
EXHAUSTIVE_LIMIT = 16


def _masks(g: Graph) -> list[int]:
    out = []
    for v in range(g.n):
        m = 0
        for u in g.adjacency[v]:
            m |= 1 << u
        out.append(m)
    return out


def exact_max_kplex_set(g: Graph, k: int) -> frozenset[int]:
    """A maximum k-plex by branch and bound (``n <= 30``).

    Candidates are kept feasible with the current set, so every node of
    the search tree is a k-plex. A branch is cut when, for some member u,
    |S| + |cand & N(u)| + (non-neighbours u may still accept) cannot beat
    the incumbent.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if g.n > EXACT_LIMIT:
        raise ValueError(f"exact oracle limited to n <= {EXACT_LIMIT} (got {g.n})")
    n = g.n
    adj = _masks(g)
    best = [0, 0]  # size, mask

    def can_add(s_mask: int, size: int, v: int) -> bool:
        need = size + 1 - k
        if (adj[v] & s_mask).bit_count() < need:
            return False
        m = s_mask
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            if not (adj[v] >> u) & 1 and (adj[u] & s_mask).bit_count() < need:
                return False
        return True

    def bound(s_mask: int, size: int, cand: int) -> int:
        ub = size + cand.bit_count()
        m = s_mask
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            missing = size - (adj[u] & s_mask).bit_count()  # counts u itself
            near = (cand & adj[u]).bit_count()
            far = (cand & ~adj[u]).bit_count()
            ub = min(ub, size + near + min(far, k - missing))
        return ub

    def expand(s_mask: int, size: int, cand: int) -> None:
        if size > best[0]:
            best[0], best[1] = size, s_mask
        if cand == 0 or bound(s_mask, size, cand) <= best[0]:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        rest = cand ^ low
        s2 = s_mask | low
        nxt = 0
        m = rest
        while m:
            lw = m & -m
            u = lw.bit_length() - 1
            m ^= lw
            if can_add(s2, size + 1, u):
                nxt |= lw
        expand(s2, size + 1, nxt)
        expand(s_mask, size, rest)

    if n:
        expand(0, 0, (1 << n) - 1)
    return frozenset(v for v in range(n) if (best[1] >> v) & 1)


def exact_max_kplex(g: Graph, k: int) -> int:
    """Size of a maximum k-plex (``n <= 30``)."""
    return len(exact_max_kplex_set(g, k))


def brute_force_max_kplex(g: Graph, k: int) -> int:
    """Exhaustive subset search from the largest size down (``n <= 16``)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if g.n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive oracle limited to n <= {EXHAUSTIVE_LIMIT} (got {g.n})")
    for size in range(g.n, 0, -1):
        for sub in combinations(range(g.n), size):
            if g.is_kplex(sub, k):
                return size
    return 0
