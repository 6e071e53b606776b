"""Immutable undirected graphs and DIMACS ASCII I/O.

Vertices are 0-based internally; DIMACS files use 1-based ids and are
converted at the boundary.
"""
from __future__ import annotations

import io
import logging
import os
from bisect import bisect_left
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Largest vertex count for which a dense boolean adjacency matrix is kept.
DENSE_LIMIT = 8192


class DimacsParseError(ValueError):
    """Raised for malformed DIMACS input; carries the 1-based line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Graph:
    """Simple undirected graph on vertices ``0 .. n-1``.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of (int, int)
        Undirected edges. Orientation and duplicates are collapsed.

    Raises
    ------
    ValueError
        On a self-loop or an endpoint outside ``0 .. n-1``.
    """

    __slots__ = ("n", "edges", "adjacency", "degree", "_nbr_arrays", "_nbr_sets", "_matrix", "name")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), name: str | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = int(n)
        self.name = name
        pairs = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            pairs.add((u, v) if u < v else (v, u))
        self.edges: frozenset[tuple[int, int]] = frozenset(pairs)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in pairs:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)
        self.degree: tuple[int, ...] = tuple(len(a) for a in self.adjacency)
        self._nbr_arrays = tuple(np.asarray(a, dtype=np.intp) for a in self.adjacency)
        self._nbr_sets = tuple(frozenset(a) for a in self.adjacency)
        self._matrix = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range 0..{self.n - 1}")

    def neighbors(self, v: int) -> frozenset[int]:
        """Return N(v) as a frozenset."""
        self._check_vertex(v)
        return self._nbr_sets[v]

    def neighbor_array(self, v: int) -> np.ndarray:
        return self._nbr_arrays[v]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if self._matrix is not None:
            return bool(self._matrix[u, v])
        row = self.adjacency[u]
        i = bisect_left(row, v)
        return i < len(row) and row[i] == v

    @property
    def matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix (only for ``n <= DENSE_LIMIT``)."""
        if self._matrix is None:
            if self.n > DENSE_LIMIT:
                raise MemoryError(f"dense adjacency disabled above {DENSE_LIMIT} vertices")
            mat = np.zeros((self.n, self.n), dtype=bool)
            if self.edges:
                e = np.array(sorted(self.edges), dtype=np.intp)
                mat[e[:, 0], e[:, 1]] = True
                mat[e[:, 1], e[:, 0]] = True
            mat.flags.writeable = False
            self._matrix = mat
        return self._matrix

    def is_kplex(self, vertices: Iterable[int], k: int) -> bool:
        """From-scratch k-plex check: every member has >= |S|-k neighbours in S."""
        s = set(vertices)
        need = len(s) - k
        for v in s:
            self._check_vertex(v)
            if len(self._nbr_sets[v] & s) < need:
                return False
        return True


def parse_dimacs(source: str | bytes | io.IOBase, name: str | None = None) -> Graph:
    """Parse DIMACS clique-format ASCII text.

    Accepts ``c`` comment lines, exactly one ``p edge <n> <m>`` line and
    ``e <u> <v>`` lines with 1-based endpoints. The edge count on the
    problem line is only checked (a mismatch logs a warning).
    """
    if isinstance(source, bytes):
        lines: Iterable[str] = source.decode("ascii", errors="replace").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = (ln.decode("ascii", errors="replace") if isinstance(ln, bytes) else ln for ln in source)

    n = None
    declared_m = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise DimacsParseError("duplicate problem line", lineno)
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise DimacsParseError(f"malformed problem line {line!r}", lineno)
            try:
                n, declared_m = int(tok[2]), int(tok[3])
            except ValueError:
                raise DimacsParseError(f"non-integer size in {line!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise DimacsParseError("negative size on problem line", lineno)
        elif tok[0] == "e":
            if n is None:
                raise DimacsParseError("edge line before problem line", lineno)
            if len(tok) != 3:
                raise DimacsParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise DimacsParseError(f"non-integer vertex in {line!r}", lineno) from None
            for x in (u, v):
                if not 1 <= x <= n:
                    raise DimacsParseError(f"vertex {x} outside 1..{n}", lineno)
            if u == v:
                raise DimacsParseError(f"self-loop on vertex {u}", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise DimacsParseError(f"unknown line type {tok[0]!r}", lineno)
    if n is None:
        raise DimacsParseError("missing problem line")
    g = Graph(n, edges, name=name)
    if g.m != declared_m:
        logger.warning("%s: problem line declares %d edges, found %d", name or "graph", declared_m, g.m)
    return g


def read_dimacs(path: str | os.PathLike) -> Graph:
    name = os.path.basename(os.fspath(path))
    for ext in (".clq", ".col", ".txt", ".b"):
        if name.endswith(ext):
            name = name[: -len(ext)]
            break
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read(), name=name)


def to_dimacs(g: Graph, comments: Sequence[str] = ()) -> str:
    """Serialise ``g`` in DIMACS ASCII format (edges sorted, 1-based)."""
    out = [f"c {c}" for c in comments]
    out.append(f"p edge {g.n} {g.m}")
    out.extend(f"e {u + 1} {v + 1}" for u, v in sorted(g.edges))
    return "\n".join(out) + "\n"


def write_dimacs(g: Graph, path: str | os.PathLike, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_dimacs(g, comments))


def neighbors(g: Graph, v: int) -> frozenset[int]:
    return g.neighbors(v)
