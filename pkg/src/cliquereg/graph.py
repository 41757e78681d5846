"""Immutable dense-bitset graphs, core numbers, and clique validation.

Vertices are 0-based everywhere inside the package. External formats that
use 1-based labels (edge lists, DIMACS files) are converted at the boundary
by the constructors and parsers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Graph:
    """Undirected, unweighted, simple graph over vertices ``0..n-1``.

    Adjacency is one bitmask per vertex: bit ``j`` of ``rows[i]`` is set iff
    ``i`` and ``j`` are adjacent. Bitmasks make pairwise adjacency tests and
    candidate-set intersections cheap for every solver in the package.
    Instances are immutable and safe to share.
    """

    n: int
    rows: tuple[int, ...]
    edge_count: int

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from 1-based undirected edges.

        Duplicate edges (in either orientation) collapse to one. Endpoints
        outside ``1..n`` and self-loops are rejected.
        """
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        rows = [0] * n
        for edge in edges:
            try:
                i, j = edge
            except (TypeError, ValueError):
                raise InputError(f"edge {edge!r} is not a pair") from None
            if not (1 <= i <= n) or not (1 <= j <= n):
                raise InputError(f"edge ({i}, {j}) has an endpoint outside 1..{n}")
            if i == j:
                raise InputError(f"self-loop at vertex {i}")
            a, b = i - 1, j - 1
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        count = sum(r.bit_count() for r in rows) // 2
        return cls(n=n, rows=tuple(rows), edge_count=count)

    @classmethod
    def from_adjacency(cls, matrix: np.ndarray) -> "Graph":
        """Build a graph from a square boolean adjacency matrix.

        The matrix must be symmetric with an all-false diagonal.
        """
        mat = np.asarray(matrix, dtype=bool)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError(f"adjacency matrix must be square, got shape {mat.shape}")
        if mat.diagonal().any():
            raise InputError("adjacency matrix has a true diagonal entry")
        if not np.array_equal(mat, mat.T):
            raise InputError("adjacency matrix is not symmetric")
        n = mat.shape[0]
        rows = []
        for i in range(n):
            packed = np.packbits(mat[i], bitorder="little").tobytes()
            rows.append(int.from_bytes(packed, "little"))
        count = int(np.count_nonzero(mat)) // 2
        return cls(n=n, rows=tuple(rows), edge_count=count)

    def adjacent(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def neighbor_mask(self, v: int) -> int:
        return self.rows[v]

    def neighbors(self, v: int) -> list[int]:
        mask = self.rows[v]
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix (fresh copy)."""
        n = self.n
        mat = np.zeros((n, n), dtype=bool)
        nbytes = (n + 7) // 8
        for i, row in enumerate(self.rows):
            bits = np.frombuffer(row.to_bytes(nbytes, "little"), dtype=np.uint8)
            mat[i] = np.unpackbits(bits, bitorder="little")[:n]
        return mat

    def induced_subgraph(self, vertices: Sequence[int]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph on ``vertices`` plus the local-to-original index map."""
        keep = sorted(set(vertices))
        for v in keep:
            if not (0 <= v < self.n):
                raise InputError(f"vertex {v} outside 0..{self.n - 1}")
        local = {v: i for i, v in enumerate(keep)}
        rows = [0] * len(keep)
        for v in keep:
            mask = self.rows[v]
            while mask:
                low = mask & -mask
                w = low.bit_length() - 1
                mask ^= low
                if w in local:
                    rows[local[v]] |= 1 << local[w]
        count = sum(r.bit_count() for r in rows) // 2
        return Graph(n=len(keep), rows=tuple(rows), edge_count=count), tuple(keep)


@dataclass(frozen=True)
class CoreNumbers:
    """Per-vertex core numbers: ``values[v]`` is the largest k such that v
    belongs to a subgraph where every vertex has degree >= k."""

    values: tuple[int, ...]

    @property
    def max_core(self) -> int:
        return max(self.values) if self.values else 0


@dataclass(frozen=True)
class Clique:
    """A vertex set asserted to be pairwise adjacent, kept sorted."""

    members: tuple[int, ...]

    @staticmethod
    def of(members: Iterable[int]) -> "Clique":
        return Clique(members=tuple(sorted(set(members))))

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CliqueCheck:
    is_clique: bool
    is_maximal: bool


def core_numbers(g: Graph) -> CoreNumbers:
    """Core numbers of every vertex by iterative min-degree peeling.

    Bucket-queue implementation, O(|V| + |E|).
    """
    n = g.n
    if n == 0:
        return CoreNumbers(values=())
    degree = g.degrees()
    max_deg = max(degree)
    bins = [0] * (max_deg + 1)
    for d in degree:
        bins[d] += 1
    start = 0
    for d in range(max_deg + 1):
        count = bins[d]
        bins[d] = start
        start += count
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[degree[v]]
        vert[pos[v]] = v
        bins[degree[v]] += 1
    for d in range(max_deg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0

    core = degree[:]
    for i in range(n):
        v = vert[i]
        mask = g.rows[v]
        while mask:
            low = mask & -mask
            u = low.bit_length() - 1
            mask ^= low
            if core[u] > core[v]:
                du, pu = core[u], pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], vert[pu] = pw, w
                    pos[w], vert[pw] = pu, u
                bins[du] += 1
                core[u] -= 1
    return CoreNumbers(values=tuple(core))


def sparsity(g: Graph) -> float:
    """Fraction of absent edges, ``1 - |E| / (n(n-1)/2)``. Needs n >= 2."""
    if g.n < 2:
        raise InputError(f"sparsity needs at least 2 vertices, got n={g.n}")
    possible = g.n * (g.n - 1) // 2
    return 1.0 - g.edge_count / possible


def validate_clique(g: Graph, members: Iterable[int]) -> CliqueCheck:
    """Check whether ``members`` is a clique of g and whether it is maximal.

    Maximality means no outside vertex is adjacent to every member. The
    empty set counts as a (non-maximal, unless the graph is empty) clique.
    """
    verts = sorted(set(members))
    for v in verts:
        if not (0 <= v < g.n):
            raise InputError(f"vertex {v} outside 0..{g.n - 1}")
    member_mask = 0
    for v in verts:
        member_mask |= 1 << v
    is_clique = True
    for v in verts:
        others = member_mask & ~(1 << v)
        if others & ~g.rows[v]:
            is_clique = False
            break
    if not is_clique:
        return CliqueCheck(is_clique=False, is_maximal=False)
    # Common neighborhood of all members, restricted to outside vertices.
    common = (1 << g.n) - 1 if g.n else 0
    for v in verts:
        common &= g.rows[v]
    common &= ~member_mask
    return CliqueCheck(is_clique=True, is_maximal=common == 0)
