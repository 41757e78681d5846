"""Combined clique estimator: greedy seed, core pruning, then relaxation.

The greedy pass gives a maximal clique fast. Every vertex whose core number
is below that size cannot belong to a strictly larger clique, so the graph
is pruned down to the survivors. If nothing survives, the greedy clique is
provably maximum. Otherwise the continuous relaxation searches the pruned
graph, seeded with the binary complement of the greedy clique, and the
larger of the two answers wins (ties keep the greedy one).

Also hosts the exact branch-and-bound solver used as ground truth in
benchmarks and tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, InputError, SolverFailure
from .graph import Clique, CoreNumbers, Graph, core_numbers
from .greedy import greedy_maximal_clique
from .relaxation import SolverParams, solve_relaxation

DEFAULT_EXACT_BUDGET = 20_000_000


@dataclass(frozen=True)
class PrunedGraph:
    graph: Graph
    index_map: tuple[int, ...]  # local vertex -> original vertex


@dataclass(frozen=True)
class ClipperPlusReport:
    """Outcome of the combined solver, with per-phase timing in ms."""

    clique: Clique
    greedy_size: int
    pruned_n: int
    early_terminated: bool
    relaxation_ran: bool
    degraded: bool
    core_ms: float
    greedy_ms: float
    prune_ms: float
    relax_ms: float


def prune_by_core(g: Graph, k: CoreNumbers, threshold: int) -> PrunedGraph:
    """Keep only vertices with core number >= threshold.

    Any clique strictly larger than ``threshold`` lives entirely among the
    survivors, so pruning never discards an improving clique.
    """
    if len(k.values) != g.n:
        raise InputError(
            f"core-number vector has length {len(k.values)}, expected {g.n}"
        )
    keep = [v for v in range(g.n) if k.values[v] >= threshold]
    sub, index_map = g.induced_subgraph(keep)
    return PrunedGraph(graph=sub, index_map=index_map)


def clipper_plus(g: Graph, params: SolverParams | None = None) -> ClipperPlusReport:
    """Run the full pipeline on g and report the best maximal clique found.

    Relaxation failures degrade gracefully to the greedy clique with the
    ``degraded`` flag set.
    """
    if g.n == 0:
        raise InputError("clique search needs at least one vertex")

    t0 = time.perf_counter()
    k = core_numbers(g)
    t1 = time.perf_counter()
    greedy = greedy_maximal_clique(g, k).clique
    t2 = time.perf_counter()
    pruned = prune_by_core(g, k, greedy.size)
    t3 = time.perf_counter()

    core_ms = (t1 - t0) * 1e3
    greedy_ms = (t2 - t1) * 1e3
    prune_ms = (t3 - t2) * 1e3

    if pruned.graph.n == 0:
        # No vertex can sit in a clique larger than the greedy one: the
        # greedy clique is a maximum clique.
        return ClipperPlusReport(
            clique=greedy,
            greedy_size=greedy.size,
            pruned_n=0,
            early_terminated=True,
            relaxation_ran=False,
            degraded=False,
            core_ms=core_ms,
            greedy_ms=greedy_ms,
            prune_ms=prune_ms,
            relax_ms=0.0,
        )

    greedy_members = set(greedy.members)
    guess = np.array(
        [0.0 if v in greedy_members else 1.0 for v in pruned.index_map]
    )
    t4 = time.perf_counter()
    degraded = False
    best = greedy
    relaxed_size = 0
    try:
        local = solve_relaxation(pruned.graph, guess, params)
        relaxed = Clique.of(pruned.index_map[v] for v in local.members)
        relaxed_size = relaxed.size
        if relaxed.size > greedy.size:
            best = relaxed
    except SolverFailure:
        degraded = True
    relax_ms = (time.perf_counter() - t4) * 1e3

    return ClipperPlusReport(
        clique=best,
        greedy_size=greedy.size,
        pruned_n=pruned.graph.n,
        early_terminated=False,
        relaxation_ran=True,
        degraded=degraded,
        core_ms=core_ms,
        greedy_ms=greedy_ms,
        prune_ms=prune_ms,
        relax_ms=relax_ms,
    )


def accuracy_ratio(found_size: int, omega: int) -> float:
    """Found clique size over the true maximum clique size."""
    if omega <= 0:
        raise InputError(f"true clique size must be positive, got {omega}")
    if found_size < 0:
        raise InputError(f"found size must be non-negative, got {found_size}")
    return found_size / omega


def max_clique_exact(g: Graph, budget: int = DEFAULT_EXACT_BUDGET) -> Clique:
    """Exact maximum clique by branch and bound.

    Vertices are preordered by the min-degree peeling order, the greedy
    clique seeds the lower bound, and candidate sets are pruned with greedy
    colouring upper bounds. ``budget`` caps the number of search-tree nodes;
    running out raises :class:`BudgetExceeded` so callers can fall back to
    the heuristics.
    """
    if g.n == 0:
        raise InputError("clique search needs at least one vertex")
    if budget <= 0:
        raise InputError(f"budget must be positive, got {budget}")

    k = core_numbers(g)
    best = list(greedy_maximal_clique(g, k).clique.members)
    best_size = len(best)
    rows = g.rows

    # Min-degree peeling order; searching it in reverse keeps candidate
    # sets small (each vertex is combined only with later survivors).
    peel = sorted(range(g.n), key=lambda v: (k.values[v], v))
    rank = {v: i for i, v in enumerate(peel)}
    later = [0] * g.n
    for v in range(g.n):
        mask = rows[v]
        while mask:
            low = mask & -mask
            u = low.bit_length() - 1
            mask ^= low
            if rank[u] > rank[v]:
                later[v] |= 1 << u

    nodes_left = budget
    stack: list[int] = []

    def color_order(p_mask: int) -> list[tuple[int, int]]:
        classes: list[int] = []
        ordered: list[tuple[int, int]] = []
        mask = p_mask
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            for ci, cmask in enumerate(classes):
                if not (rows[v] & cmask):
                    classes[ci] |= low
                    ordered.append((v, ci + 1))
                    break
            else:
                classes.append(low)
                ordered.append((v, len(classes)))
        ordered.sort(key=lambda vc: vc[1])
        return ordered

    def expand(p_mask: int) -> None:
        nonlocal best, best_size, nodes_left
        nodes_left -= 1
        if nodes_left < 0:
            raise BudgetExceeded(
                f"exact search exceeded {budget} node expansions"
            )
        if p_mask == 0:
            if len(stack) > best_size:
                best = stack.copy()
                best_size = len(best)
            return
        ordered = color_order(p_mask)
        current = p_mask
        for v, color in reversed(ordered):
            if len(stack) + color <= best_size:
                return
            stack.append(v)
            expand(current & rows[v])
            stack.pop()
            current &= ~(1 << v)

    for v in reversed(peel):
        if k.values[v] + 1 <= best_size:
            continue
        stack.append(v)
        expand(later[v])
        stack.pop()

    return Clique.of(best)
