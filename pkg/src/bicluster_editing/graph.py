"""Bipartite graphs stored as mirrored per-vertex bitsets.

Each vertex keeps a Python ``int`` whose bit ``j`` is set when it is adjacent to
vertex ``j`` of the opposite side.  Vertex removal clears a bit of the alive
mask instead of renumbering, so indices stay stable through kernelization.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator, NamedTuple


class GraphError(ValueError):
    """Invalid vertex reference or malformed graph data."""


class EditError(GraphError):
    """An edit set that does not fit the graph it is applied to."""


class Side(IntEnum):
    LEFT = 0
    RIGHT = 1

    @property
    def other(self) -> "Side":
        return Side(1 - self)


class VertexRef(NamedTuple):
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{'lr'[self.side]}{self.index + 1}"


def left(i: int) -> VertexRef:
    return VertexRef(Side.LEFT, i)


def right(j: int) -> VertexRef:
    return VertexRef(Side.RIGHT, j)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class BipartiteGraph:
    """Immutable bipartite graph; all edges join a left and a right vertex."""

    __slots__ = ("n_left", "n_right", "_adj", "_alive", "_hash")

    def __init__(self, n_left: int, n_right: int, left_adj, right_adj, alive=None):
        self.n_left = n_left
        self.n_right = n_right
        self._adj = (tuple(left_adj), tuple(right_adj))
        if alive is None:
            alive = ((1 << n_left) - 1, (1 << n_right) - 1)
        self._alive = tuple(alive)
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges: Iterable[tuple[int, int]] = ()) -> "BipartiteGraph":
        if n_left < 0 or n_right < 0:
            raise GraphError("vertex counts must be non-negative")
        ladj = [0] * n_left
        radj = [0] * n_right
        for l, r in edges:
            if not (0 <= l < n_left and 0 <= r < n_right):
                raise GraphError(f"edge ({l}, {r}) out of range for {n_left}x{n_right} graph")
            ladj[l] |= 1 << r
            radj[r] |= 1 << l
        return cls(n_left, n_right, ladj, radj)

    @classmethod
    def from_left_masks(cls, n_right: int, masks: Iterable[int]) -> "BipartiteGraph":
        masks = list(masks)
        radj = [0] * n_right
        for l, m in enumerate(masks):
            if m >> n_right:
                raise GraphError("left mask has bits beyond n_right")
            for r in iter_bits(m):
                radj[r] |= 1 << l
        return cls(len(masks), n_right, masks, radj)

    @classmethod
    def _raw(cls, n_left, n_right, adj, alive) -> "BipartiteGraph":
        g = cls.__new__(cls)
        g.n_left = n_left
        g.n_right = n_right
        g._adj = adj
        g._alive = alive
        g._hash = None
        return g

    # basic queries -----------------------------------------------------

    def size(self, side: Side) -> int:
        return self.n_left if side == Side.LEFT else self.n_right

    def check(self, v: VertexRef) -> None:
        side, i = v
        if side not in (Side.LEFT, Side.RIGHT) or not 0 <= i < self.size(side):
            raise GraphError(f"vertex {v!r} out of range")
        if not (self._alive[side] >> i) & 1:
            raise GraphError(f"vertex {v} has been removed")

    def nmask(self, side: Side, i: int) -> int:
        return self._adj[side][i]

    def adjacency(self, side: Side) -> tuple[int, ...]:
        return self._adj[side]

    def alive_mask(self, side: Side) -> int:
        return self._alive[side]

    def is_alive(self, v: VertexRef) -> bool:
        return bool((self._alive[v.side] >> v.index) & 1)

    def vertices(self, side: Side) -> list[int]:
        return list(iter_bits(self._alive[side]))

    def all_vertices(self) -> list[VertexRef]:
        return [VertexRef(Side.LEFT, i) for i in iter_bits(self._alive[0])] + [
            VertexRef(Side.RIGHT, j) for j in iter_bits(self._alive[1])
        ]

    def count(self, side: Side) -> int:
        return self._alive[side].bit_count()

    @property
    def num_vertices(self) -> int:
        return self._alive[0].bit_count() + self._alive[1].bit_count()

    @property
    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self._adj[0])

    def degree(self, v: VertexRef) -> int:
        return self._adj[v.side][v.index].bit_count()

    def neighbors(self, v: VertexRef) -> frozenset[int]:
        self.check(v)
        return frozenset(iter_bits(self._adj[v.side][v.index]))

    def has_edge(self, l: int, r: int) -> bool:
        return bool((self._adj[0][l] >> r) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(l, r) for l, m in enumerate(self._adj[0]) for r in iter_bits(m)]

    def max_degree(self) -> int:
        return max((m.bit_count() for ms in self._adj for m in ms), default=0)

    # derived graphs -----------------------------------------------------

    def toggled(self, pairs: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        """Flip the adjacency of each (left, right) pair."""
        ladj = list(self._adj[0])
        radj = list(self._adj[1])
        for l, r in pairs:
            ladj[l] ^= 1 << r
            radj[r] ^= 1 << l
        return BipartiteGraph._raw(self.n_left, self.n_right, (tuple(ladj), tuple(radj)), self._alive)

    def without(self, left_mask: int = 0, right_mask: int = 0) -> "BipartiteGraph":
        """Remove vertices (by mask) together with their incident edges."""
        ladj = list(self._adj[0])
        radj = list(self._adj[1])
        for l in iter_bits(left_mask):
            for r in iter_bits(ladj[l]):
                radj[r] &= ~(1 << l)
            ladj[l] = 0
        for r in iter_bits(right_mask):
            for l in iter_bits(radj[r]):
                ladj[l] &= ~(1 << r)
            radj[r] = 0
        alive = (self._alive[0] & ~left_mask, self._alive[1] & ~right_mask)
        return BipartiteGraph._raw(self.n_left, self.n_right, (tuple(ladj), tuple(radj)), alive)

    def compact(self) -> tuple["BipartiteGraph", list[int], list[int]]:
        """Renumber alive vertices densely; returns the graph and old-index maps."""
        lmap = self.vertices(Side.LEFT)
        rmap = self.vertices(Side.RIGHT)
        rpos = {r: k for k, r in enumerate(rmap)}
        edges = [(k, rpos[r]) for k, l in enumerate(lmap) for r in iter_bits(self._adj[0][l])]
        return BipartiteGraph.from_edges(len(lmap), len(rmap), edges), lmap, rmap

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph._raw(
            self.n_right, self.n_left, (self._adj[1], self._adj[0]), (self._alive[1], self._alive[0])
        )

    # dunder ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.n_left == other.n_left
            and self.n_right == other.n_right
            and self._adj == other._adj
            and self._alive == other._alive
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n_left, self.n_right, self._adj, self._alive))
        return self._hash

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.count(Side.LEFT)}+{self.count(Side.RIGHT)} vertices, {self.num_edges} edges)"


# twins, conflicts, components ---------------------------------------------


@dataclass(frozen=True)
class TwinPartition:
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    def classes(self, side: Side) -> tuple[tuple[int, ...], ...]:
        return self.left if side == Side.LEFT else self.right

    def class_of(self, v: VertexRef) -> tuple[int, ...]:
        for cls in self.classes(v.side):
            if v.index in cls:
                return cls
        raise GraphError(f"vertex {v} not in partition")


def side_twin_classes(g: BipartiteGraph, side: Side) -> list[tuple[int, ...]]:
    groups: dict[int, list[int]] = {}
    adj = g.adjacency(side)
    for i in iter_bits(g.alive_mask(side)):
        groups.setdefault(adj[i], []).append(i)
    # insertion order already follows the smallest member
    return [tuple(c) for c in groups.values()]


def twin_classes(g: BipartiteGraph) -> TwinPartition:
    return TwinPartition(tuple(side_twin_classes(g, Side.LEFT)), tuple(side_twin_classes(g, Side.RIGHT)))


def twin_mask(g: BipartiteGraph, v: VertexRef) -> int:
    """Bitmask of ``v``'s twin class (``v`` included)."""
    adj = g.adjacency(v.side)
    target = adj[v.index]
    m = 0
    for i in iter_bits(g.alive_mask(v.side)):
        if adj[i] == target:
            m |= 1 << i
    return m


def in_conflict(g: BipartiteGraph, u: VertexRef, v: VertexRef) -> bool:
    g.check(u)
    g.check(v)
    if u.side != v.side:
        raise GraphError("conflict is only defined for vertices on the same side")
    a = g.nmask(u.side, u.index)
    b = g.nmask(v.side, v.index)
    return bool(a & b) and a != b


def conflict_partners(g: BipartiteGraph, u: VertexRef) -> Iterator[int]:
    """Same-side vertices in conflict with ``u``, ascending."""
    side = u.side
    a = g.nmask(side, u.index)
    adj = g.adjacency(side)
    cand = 0
    for x in iter_bits(a):
        cand |= g.nmask(side.other, x)
    for w in iter_bits(cand):
        if adj[w] != a:
            yield w


def find_conflict(g: BipartiteGraph, u: VertexRef) -> VertexRef | None:
    g.check(u)
    for w in conflict_partners(g, u):
        return VertexRef(u.side, w)
    return None


@dataclass(frozen=True)
class Component:
    left: frozenset[int]
    right: frozenset[int]
    is_bicluster: bool

    @property
    def size(self) -> int:
        return len(self.left) + len(self.right)


def component_masks(g: BipartiteGraph) -> list[tuple[int, int]]:
    """Connected components as (left mask, right mask), ordered by first vertex."""
    ladj, radj = g.adjacency(Side.LEFT), g.adjacency(Side.RIGHT)
    todo_l, todo_r = g.alive_mask(Side.LEFT), g.alive_mask(Side.RIGHT)
    out = []
    while todo_l or todo_r:
        if todo_l:
            cl, cr = 1 << lowest_bit(todo_l), 0
        else:
            cl, cr = 0, 1 << lowest_bit(todo_r)
        fl, fr = cl, cr
        while fl or fr:
            nr = 0
            for l in iter_bits(fl):
                nr |= ladj[l]
            nl = 0
            for r in iter_bits(fr):
                nl |= radj[r]
            fl = nl & ~cl
            fr = nr & ~cr
            cl |= fl
            cr |= fr
        out.append((cl, cr))
        todo_l &= ~cl
        todo_r &= ~cr
    return out


def is_bicluster_masks(g: BipartiteGraph, lm: int, rm: int) -> bool:
    ladj, radj = g.adjacency(Side.LEFT), g.adjacency(Side.RIGHT)
    # an isolated vertex passes trivially: its mask is 0 and so is the other side's
    return all(ladj[l] == rm for l in iter_bits(lm)) and all(radj[r] == lm for r in iter_bits(rm))


def bicluster_components(g: BipartiteGraph) -> list[Component]:
    return [
        Component(frozenset(iter_bits(lm)), frozenset(iter_bits(rm)), is_bicluster_masks(g, lm, rm))
        for lm, rm in component_masks(g)
    ]


def is_bicluster_graph(g: BipartiteGraph) -> bool:
    return all(is_bicluster_masks(g, lm, rm) for lm, rm in component_masks(g))


# edits ---------------------------------------------------------------------


@dataclass(frozen=True)
class EditSet:
    insertions: frozenset[tuple[int, int]] = frozenset()
    deletions: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "insertions", frozenset(self.insertions))
        object.__setattr__(self, "deletions", frozenset(self.deletions))
        if self.insertions & self.deletions:
            raise EditError("a pair cannot be both inserted and deleted")

    @property
    def cost(self) -> int:
        return len(self.insertions) + len(self.deletions)

    def pairs(self) -> frozenset[tuple[int, int]]:
        return self.insertions | self.deletions

    def validate(self, g: BipartiteGraph) -> None:
        for l, r in self.pairs():
            if not (0 <= l < g.n_left and 0 <= r < g.n_right):
                raise EditError(f"edit ({l}, {r}) out of range")
            if not (g.is_alive(left(l)) and g.is_alive(right(r))):
                raise EditError(f"edit ({l}, {r}) touches a removed vertex")
        for l, r in self.deletions:
            if not g.has_edge(l, r):
                raise EditError(f"cannot delete non-edge ({l}, {r})")
        for l, r in self.insertions:
            if g.has_edge(l, r):
                raise EditError(f"cannot insert existing edge ({l}, {r})")


def apply_edits(g: BipartiteGraph, e: EditSet) -> BipartiteGraph:
    e.validate(g)
    return g.toggled(e.pairs())


def edit_set_between(g: BipartiteGraph, h: BipartiteGraph) -> EditSet:
    """The edit set turning ``g`` into ``h`` (same vertex sets)."""
    if (g.n_left, g.n_right) != (h.n_left, h.n_right):
        raise GraphError("graphs have different vertex sets")
    ins, dels = set(), set()
    for l in range(g.n_left):
        a, b = g.nmask(Side.LEFT, l), h.nmask(Side.LEFT, l)
        for r in iter_bits(a & ~b):
            dels.add((l, r))
        for r in iter_bits(b & ~a):
            ins.add((l, r))
    return EditSet(frozenset(ins), frozenset(dels))


def per_vertex_edit_count(g: BipartiteGraph, e: EditSet, v: VertexRef) -> int:
    g.check(v)
    pos = v.side
    return sum(1 for p in e.pairs() if p[pos] == v.index)
