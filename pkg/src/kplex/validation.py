"""Input checks shared by the estimator and the harness."""
from __future__ import annotations

import numbers
import os

import numpy as np

from .graph import Graph, read_dimacs


def check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return int(k)


def check_graph(X) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a Graph, a DIMACS file path, a networkx graph, or a square
    symmetric adjacency matrix (numpy array or scipy sparse) with an
    empty diagonal.
    """
    if isinstance(X, Graph):
        return X
    if isinstance(X, (str, os.PathLike)):
        return read_dimacs(X)
    if hasattr(X, "nodes") and hasattr(X, "edges") and hasattr(X, "is_directed"):
        if X.is_directed():
            raise ValueError("directed graphs are not supported")
        index = {v: i for i, v in enumerate(X.nodes())}
        return Graph(len(index), ((index[u], index[v]) for u, v in X.edges() if u != v))
    if hasattr(X, "tocoo"):
        coo = X.tocoo()
        if coo.shape[0] != coo.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {coo.shape}")
        rows, cols = coo.row[coo.data != 0], coo.col[coo.data != 0]
        n = coo.shape[0]
        A = None
    else:
        A = np.asarray(X)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {A.shape}")
        n = A.shape[0]
        rows, cols = np.nonzero(A)
    if np.any(rows == cols):
        raise ValueError("adjacency matrix has a non-zero diagonal (self-loop)")
    pairs = set(zip(rows.tolist(), cols.tolist()))
    if any((v, u) not in pairs for u, v in pairs):
        raise ValueError("adjacency matrix must be symmetric")
    return Graph(n, [(u, v) for u, v in pairs if u < v])
