"""Seeded instance families.  Each ``*_graph`` builder has a text twin."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .formats import write_instance
from .graph import BipartiteGraph


def p6_graph(copies: int) -> BipartiteGraph:
    if copies < 1:
        raise ValueError("need at least one copy")
    edges = []
    for c in range(copies):
        a = 3 * c
        edges += [(a, a), (a + 1, a), (a + 1, a + 1), (a + 2, a + 1), (a + 2, a + 2)]
    return BipartiteGraph.from_edges(3 * copies, 3 * copies, edges)


def tight_graph(copies: int) -> BipartiteGraph:
    """Copies of the P6 with every left vertex doubled (9 vertices, optimum 2 each)."""
    if copies < 1:
        raise ValueError("need at least one copy")
    edges = []
    for c in range(copies):
        a, g = 6 * c, 3 * c
        edges += [(a, g), (a + 1, g)]
        edges += [(a + i, g + j) for i in (2, 3) for j in (0, 1)]
        edges += [(a + i, g + j) for i in (4, 5) for j in (1, 2)]
    return BipartiteGraph.from_edges(6 * copies, 3 * copies, edges)


def random_graph(n_left: int, n_right: int, p: float, seed: int) -> BipartiteGraph:
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    adj = np.random.default_rng(seed).random((n_left, n_right)) < p
    return BipartiteGraph.from_edges(n_left, n_right, ((int(x), int(y)) for x, y in zip(*np.nonzero(adj))))


def planted_graph(sizes: Sequence[tuple[int, int]], q: float, seed: int) -> tuple[BipartiteGraph, int]:
    """Disjoint complete blocks of the given (left, right) sizes, then each
    pair flipped with probability ``q``.  Returns the graph and the flip count."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("noise must lie in [0, 1]")
    nl = sum(a for a, _ in sizes)
    nr = sum(b for _, b in sizes)
    adj = np.zeros((nl, nr), dtype=bool)
    i = j = 0
    for a, b in sizes:
        if a < 0 or b < 0:
            raise ValueError("block sizes must be non-negative")
        adj[i : i + a, j : j + b] = True
        i += a
        j += b
    flips = np.random.default_rng(seed).random((nl, nr)) < q
    adj ^= flips
    g = BipartiteGraph.from_edges(nl, nr, ((int(x), int(y)) for x, y in zip(*np.nonzero(adj))))
    return g, int(flips.sum())


def gen_p6(copies: int) -> str:
    return write_instance(p6_graph(copies), [f"{copies} disjoint P6 copies", f"optimum {copies}"])


def gen_tight(copies: int) -> str:
    return write_instance(tight_graph(copies), [f"{copies} tight kernel copies", f"optimum {2 * copies}"])


def gen_random(n_left: int, n_right: int, p: float, seed: int) -> str:
    return write_instance(random_graph(n_left, n_right, p, seed), [f"random p={p} seed={seed}"])


def gen_planted(blocks: int, sizes, q: float, seed: int) -> str:
    """``sizes`` is one (left, right) pair used for every block, or one pair per block."""
    if blocks < 1:
        raise ValueError("need at least one block")
    if len(sizes) == 2 and all(isinstance(s, (int, np.integer)) for s in sizes):
        sizes = [tuple(sizes)] * blocks
    if len(sizes) != blocks:
        raise ValueError("one size pair per block")
    g, flips = planted_graph(sizes, q, seed)
    return write_instance(g, [f"planted blocks={blocks} q={q} seed={seed}", f"flips {flips}"])
