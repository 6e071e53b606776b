"""Benchmark instances: DIMACS files when present, exact regenerations otherwise.

The deterministic DIMACS families (c-fat, hamming, johnson, keller and
MANN_a) are rebuilt from their published constructions. Random families
(brock, p_hat, san) cannot be rebuilt and must be supplied as files.
"""
from __future__ import annotations

import math
import os
import re
from itertools import combinations, product
from pathlib import Path

from .graph import Graph, read_dimacs

ENV_DIR = "KPLEX_DIMACS_DIR"


def c_fat(n: int, c: int, name: str | None = None) -> Graph:
    """c-fat ring: vertices split into consecutive parts, adjacent within and between neighbouring parts."""
    parts = int(n // (c * math.log(n)))
    base, extra = divmod(n, parts)
    part = []
    for i in range(parts):
        part += [i] * (base + (1 if i < extra else 0))
    edges = [(u, v) for u, v in combinations(range(n), 2)
             if (part[v] - part[u]) % parts in (0, 1, parts - 1)]
    return Graph(n, edges, name=name or f"c-fat{n}-{c}")


def hamming(bits: int, d: int, name: str | None = None) -> Graph:
    """Binary words of length ``bits``, adjacent when at Hamming distance >= d."""
    n = 1 << bits
    edges = [(u, v) for u, v in combinations(range(n), 2) if (u ^ v).bit_count() >= d]
    return Graph(n, edges, name=name or f"hamming{bits}-{d}")


def johnson(n: int, w: int, d: int, name: str | None = None) -> Graph:
    """Weight-w binary words of length n, adjacent when at Hamming distance >= d."""
    words = [sum(1 << i for i in c) for c in combinations(range(n), w)]
    edges = [(i, j) for i, j in combinations(range(len(words)), 2) if (words[i] ^ words[j]).bit_count() >= d]
    return Graph(len(words), edges, name=name or f"johnson{n}-{w}-{d}")


def keller(d: int, name: str | None = None) -> Graph:
    """Keller graph: words over Z_4 differing in >= 2 places, at least one by 2 (mod 4).

    Restricted to the neighbourhood of the zero word, which is how the
    DIMACS keller instances are built.
    """
    def adj(a, b):
        diff = [(x - y) % 4 for x, y in zip(a, b) if x != y]
        return len(diff) >= 2 and 2 in diff

    zero = (0,) * d
    verts = [w for w in product(range(4), repeat=d) if adj(w, zero)]
    edges = [(i, j) for i, j in combinations(range(len(verts)), 2) if adj(verts[i], verts[j])]
    return Graph(len(verts), edges, name=name or f"keller{d}")


def _affine_plane_3() -> list[tuple[int, int, int]]:
    """The 12 lines of AG(2,3): a Steiner triple system on 9 points."""
    lines = set()
    pts = [(x, y) for x in range(3) for y in range(3)]
    for p, q in combinations(pts, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        lines.add(tuple(sorted(3 * a + b for a, b in (p, q, r))))
    return sorted(lines)


def mann_a9(name: str = "MANN_a9") -> Graph:
    """Clique formulation of the Steiner triple covering problem on 9 points.

    The non-edges form the stable-set graph: one vertex per point, three
    per triple (one per incidence) joined in a triangle, and each
    incidence vertex joined to its point.
    """
    triples = _affine_plane_3()
    n_pts = 9
    n = n_pts + 3 * len(triples)
    non_edges = set()
    for t, triple in enumerate(triples):
        inc = [n_pts + 3 * t + r for r in range(3)]
        for a, b in combinations(inc, 2):
            non_edges.add((a, b))
        for r, j in enumerate(triple):
            non_edges.add((j, inc[r]))
    edges = [(u, v) for u, v in combinations(range(n), 2) if (u, v) not in non_edges]
    return Graph(n, edges, name=name)


_GENERATORS = {
    re.compile(r"c-fat(\d+)-(\d+)"): lambda m: c_fat(int(m[1]), int(m[2])),
    re.compile(r"hamming(\d+)-(\d+)"): lambda m: hamming(int(m[1]), int(m[2])),
    re.compile(r"johnson(\d+)-(\d+)-(\d+)"): lambda m: johnson(int(m[1]), int(m[2]), int(m[3])),
    re.compile(r"keller(\d+)"): lambda m: keller(int(m[1])),
    re.compile(r"MANN_a9"): lambda m: mann_a9(),
}


def generate(name: str) -> Graph:
    """Rebuild a deterministic DIMACS instance by name; KeyError if unsupported."""
    for pat, build in _GENERATORS.items():
        m = pat.fullmatch(name)
        if m:
            return build(m)
    raise KeyError(f"no generator for instance {name!r}")


def find_file(name: str, directory: str | os.PathLike | None = None) -> Path | None:
    directory = directory or os.environ.get(ENV_DIR)
    if not directory:
        return None
    for ext in (".clq", ".col", ".txt", ""):
        p = Path(directory) / f"{name}{ext}"
        if p.is_file():
            return p
    return None


def load_instance(name: str, directory: str | os.PathLike | None = None) -> Graph:
    """Read ``name`` from ``directory`` (default ``$KPLEX_DIMACS_DIR``), else regenerate it.

    Raises KeyError when there is neither a file nor a generator.
    """
    path = find_file(name, directory)
    if path is not None:
        return read_dimacs(path)
    return generate(name)
