"""Brute-force ground truth: minimum over every biclustering of a small graph."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import BipartiteGraph, EditSet, GraphError, Side, component_masks, iter_bits, side_twin_classes
from .kernels import MODE_DELMAX, MODE_TWINS, scan_biclusterings

DEFAULT_STATE_LIMIT = 10**8


class OracleTooLarge(RuntimeError):
    """The instance is beyond the configured enumeration budget."""


@dataclass(frozen=True)
class Biclustering:
    """Cluster id per vertex; the bicluster graph joins left and right members of each cluster."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def edges(self) -> set[tuple[int, int]]:
        by_cluster: dict[int, list[int]] = {}
        for r, c in enumerate(self.right):
            by_cluster.setdefault(c, []).append(r)
        return {(l, r) for l, c in enumerate(self.left) for r in by_cluster.get(c, ())}

    def clusters(self) -> dict[int, tuple[list[int], list[int]]]:
        out: dict[int, tuple[list[int], list[int]]] = {}
        for l, c in enumerate(self.left):
            out.setdefault(c, ([], []))[0].append(l)
        for r, c in enumerate(self.right):
            out.setdefault(c, ([], []))[1].append(r)
        return out


def _check_cover(g: BipartiteGraph, b: Biclustering) -> None:
    if len(b.left) != g.n_left or len(b.right) != g.n_right:
        raise GraphError("biclustering does not cover the graph's vertices")
    if g.count(Side.LEFT) != g.n_left or g.count(Side.RIGHT) != g.n_right:
        raise GraphError("oracle works on graphs without removed vertices; compact() first")


def edits_of(g: BipartiteGraph, b: Biclustering) -> EditSet:
    _check_cover(g, b)
    target = b.edges()
    current = set(g.edges())
    return EditSet(frozenset(target - current), frozenset(current - target))


def cost(g: BipartiteGraph, b: Biclustering) -> int:
    """Size of the symmetric difference between the edges of ``g`` and of ``b``."""
    return edits_of(g, b).cost


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def state_bound(n_part: int, n_assign: int) -> int:
    return bell(n_part) * (n_part + 1) ** n_assign


def _reps(g: BipartiteGraph, side: Side) -> list[int]:
    rep = list(range(g.size(side)))
    for cls in side_twin_classes(g, side):
        for i in cls:
            rep[i] = cls[0]
    return rep


def _solve(g: BipartiteGraph, mode: int, limit: int, use_numba) -> tuple[int, Biclustering]:
    if g.count(Side.LEFT) != g.n_left or g.count(Side.RIGHT) != g.n_right:
        raise GraphError("oracle works on graphs without removed vertices; compact() first")
    swap = g.n_right < g.n_left
    h = g.transpose() if swap else g
    n, m = h.n_left, h.n_right
    if state_bound(n, m) > limit:
        raise OracleTooLarge(f"{g.n_left}x{g.n_right} graph needs more than {limit} states")
    best, rgs, asg, _ = scan_biclusterings(
        h.adjacency(Side.LEFT),
        h.adjacency(Side.RIGHT),
        mode,
        _reps(h, Side.LEFT),
        _reps(h, Side.RIGHT),
        use_numba=use_numba,
    )
    if best < 0:  # pragma: no cover - every graph admits the all-deletions biclustering
        raise AssertionError("no admissible biclustering found")
    nb = max(rgs, default=-1) + 1
    # unattached vertices share one cluster that has no partner side
    part = tuple(rgs)
    other = tuple(a if a < nb else nb for a in asg)
    b = Biclustering(other, part) if swap else Biclustering(part, other)
    return best, b


def oracle_opt(g: BipartiteGraph, *, limit: int = DEFAULT_STATE_LIMIT, use_numba=None) -> tuple[int, Biclustering]:
    """Exact optimum and the first optimal biclustering in enumeration order."""
    return _solve(g, 0, limit, use_numba)


def oracle_opt_twin_respecting(g: BipartiteGraph, *, limit: int = DEFAULT_STATE_LIMIT, use_numba=None):
    """Optimum over biclusterings that keep every twin class in one cluster."""
    return _solve(g, MODE_TWINS, limit, use_numba)


def oracle_opt_deletion_maximal(g: BipartiteGraph, *, limit: int = DEFAULT_STATE_LIMIT, use_numba=None):
    """Optimum over biclusterings where every vertex carries at most deg-1 edits,
    or exactly deg edits that are all deletions."""
    return _solve(g, MODE_DELMAX, limit, use_numba)


def oracle_opt_by_components(g: BipartiteGraph, *, limit: int = DEFAULT_STATE_LIMIT, use_numba=None) -> int:
    """Sum of per-component optima.

    Cutting a cluster along component boundaries only drops insertions, so
    some optimal biclustering never spans two components.
    """
    total = 0
    for lm, rm in component_masks(g):
        h = g.without(g.alive_mask(Side.LEFT) & ~lm, g.alive_mask(Side.RIGHT) & ~rm).compact()[0]
        total += oracle_opt(h, limit=limit, use_numba=use_numba)[0]
    return total


def satisfies_deletion_condition(g: BipartiteGraph, e: EditSet) -> bool:
    for side in Side:
        pos = int(side)
        for i in iter_bits(g.alive_mask(side)):
            deg = g.nmask(side, i).bit_count()
            n_ins = sum(1 for p in e.insertions if p[pos] == i)
            n_all = n_ins + sum(1 for p in e.deletions if p[pos] == i)
            if n_all > deg or (n_all == deg and n_ins):
                return False
    return True


__all__ = [
    "Biclustering",
    "DEFAULT_STATE_LIMIT",
    "OracleTooLarge",
    "bell",
    "cost",
    "edits_of",
    "oracle_opt",
    "oracle_opt_by_components",
    "oracle_opt_deletion_maximal",
    "oracle_opt_twin_respecting",
    "satisfies_deletion_condition",
    "state_bound",
]
