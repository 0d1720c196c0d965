"""Exact fixed-parameter search for bicluster editing.

Every node first drops bicluster components, answers directly when the rest
has maximum degree two, and otherwise branches.  Branching rules by priority:

* a degree-1 vertex (four sub-cases, worst vector (1,2,3,3,4));
* a twin class of size >= 2 in conflict with some vertex, vector (1,2,2,3,3,4);
* the merge rule when every conflict differs in exactly one neighbour, (1,1);
* otherwise the generic conflict pair: make the two neighbourhoods equal
  (one child per subset of the symmetric difference) or disjoint (one child
  per subset of the intersection).

Edits are always applied to whole twin classes.  Children whose accumulated
edits give some vertex more edits than its original degree, or exactly that
many with an insertion among them, are discarded: some optimal solution never
looks like that.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .graph import (
    BipartiteGraph,
    EditSet,
    GraphError,
    Side,
    VertexRef,
    component_masks,
    conflict_partners,
    is_bicluster_masks,
    iter_bits,
    lowest_bit,
    side_twin_classes,
)
from .kernel import Instance

DEFAULT_CAP = 100


class PreconditionError(GraphError):
    """A branching rule was invoked on a configuration it does not handle."""


@dataclass(frozen=True)
class SolverOptions:
    prune_deletion_maximal: bool = True
    degree_one: bool = True
    twins: bool = True
    merge_d1: bool = True
    max_degree_two: bool = True  # off: keep branching where the path/cycle DP would answer
    cap: int = DEFAULT_CAP


@dataclass
class SolveStats:
    nodes: int = 0
    max_depth: int = 0
    rules: Counter = field(default_factory=Counter)

    def merge(self, other: "SolveStats") -> None:
        self.nodes += other.nodes
        self.max_depth = max(self.max_depth, other.max_depth)
        self.rules.update(other.rules)


@dataclass
class SolveResult:
    decision: bool
    cost: int | None
    witness: EditSet | None
    stats: SolveStats
    budget: int | None = None


# search state ----------------------------------------------------------------


class SearchState:
    """Current graph, remaining budget and the edits made so far.

    ``ins``/``dels`` are relative to the root graph.  ``deg0`` holds root
    degrees; ``cnt``/``ins_cnt`` count accumulated edits (all, insertions)
    per vertex.
    """

    __slots__ = ("graph", "budget", "ins", "dels", "deg0", "cnt", "ins_cnt", "depth")

    def __init__(self, graph, budget, ins, dels, deg0, cnt, ins_cnt, depth=0):
        self.graph = graph
        self.budget = budget
        self.ins = ins
        self.dels = dels
        self.deg0 = deg0
        self.cnt = cnt
        self.ins_cnt = ins_cnt
        self.depth = depth

    @classmethod
    def root(cls, g: BipartiteGraph, budget: int) -> "SearchState":
        deg0 = tuple(tuple(m.bit_count() for m in g.adjacency(s)) for s in Side)
        zeros = (tuple([0] * g.n_left), tuple([0] * g.n_right))
        return cls(g, budget, frozenset(), frozenset(), deg0, zeros, zeros, 0)

    @property
    def spent(self) -> int:
        return len(self.ins) + len(self.dels)

    def with_graph(self, g: BipartiteGraph) -> "SearchState":
        return SearchState(g, self.budget, self.ins, self.dels, self.deg0, self.cnt, self.ins_cnt, self.depth)

    def edit_set(self) -> EditSet:
        return EditSet(self.ins, self.dels)


def prune_deletion_maximal(state: SearchState, pairs: Iterable[tuple[int, int]]) -> bool:
    """Whether a child making ``pairs`` edits keeps every vertex within its edit bound."""
    g = state.graph
    cnt = [dict(), dict()]
    ins = [dict(), dict()]
    for l, r in pairs:
        new_ins = not g.has_edge(l, r)
        for side, i in ((0, l), (1, r)):
            cnt[side][i] = cnt[side].get(i, state.cnt[side][i]) + 1
            ins[side][i] = ins[side].get(i, state.ins_cnt[side][i]) + new_ins
    for side in (0, 1):
        deg0 = state.deg0[side]
        for i, c in cnt[side].items():
            if c > deg0[i] or (c == deg0[i] and ins[side][i]):
                return False
    return True


def spawn(state: SearchState, pairs, options: SolverOptions) -> SearchState | None:
    """Child state after toggling ``pairs``; None if it cannot lead to a solution."""
    pairs = list(dict.fromkeys(pairs))
    h = len(pairs)
    if h == 0:
        raise AssertionError("a branch must make at least one edit")
    if h > state.budget:
        return None
    if options.prune_deletion_maximal and not prune_deletion_maximal(state, pairs):
        return None
    g = state.graph
    ins, dels = set(state.ins), set(state.dels)
    cnt = [list(state.cnt[0]), list(state.cnt[1])]
    ins_cnt = [list(state.ins_cnt[0]), list(state.ins_cnt[1])]
    for p in pairs:
        if p in ins or p in dels:
            # undoing an earlier edit never lies on a path to an optimum
            return None
        l, r = p
        if g.has_edge(l, r):
            dels.add(p)
        else:
            ins.add(p)
            ins_cnt[0][l] += 1
            ins_cnt[1][r] += 1
        cnt[0][l] += 1
        cnt[1][r] += 1
    return SearchState(
        g.toggled(pairs),
        state.budget - h,
        frozenset(ins),
        frozenset(dels),
        state.deg0,
        (tuple(cnt[0]), tuple(cnt[1])),
        (tuple(ins_cnt[0]), tuple(ins_cnt[1])),
        state.depth + 1,
    )


# small helpers ---------------------------------------------------------------


def _twin_mask(g: BipartiteGraph, side: Side, i: int) -> int:
    adj = g.adjacency(side)
    target = adj[i]
    m = 0
    for j in iter_bits(g.alive_mask(side)):
        if adj[j] == target:
            m |= 1 << j
    return m


def _groups(g: BipartiteGraph, side: Side, mask: int) -> list[int]:
    """Split ``mask`` (vertices of ``side``) into twin groups."""
    by_nbhd: dict[int, int] = {}
    for i in iter_bits(mask):
        key = g.nmask(side, i)
        by_nbhd[key] = by_nbhd.get(key, 0) | (1 << i)
    return list(by_nbhd.values())


def _cap(mask: int, cap: int) -> int:
    out = 0
    for k, i in enumerate(iter_bits(mask)):
        if k == cap:
            break
        out |= 1 << i
    return out


def _lowest(mask: int, k: int) -> int:
    return _cap(mask, k)


def _block(g: BipartiteGraph, side: Side, xs: int, ys: int, present: bool) -> list[tuple[int, int]]:
    """Pairs to toggle so that every x in ``xs`` is adjacent to every y in ``ys``
    (``present``) or to none of them; ``xs`` lie on ``side``."""
    out = []
    for x in iter_bits(xs):
        row = g.nmask(side, x)
        diff = (ys & ~row) if present else (ys & row)
        for y in iter_bits(diff):
            out.append((x, y) if side == Side.LEFT else (y, x))
    return out


def _spawn_all(state, pair_lists, options) -> list[SearchState]:
    out = []
    for pairs in pair_lists:
        ch = spawn(state, pairs, options)
        if ch is not None:
            out.append(ch)
    return out


# generic conflict branching ------------------------------------------------------


def _check_conflict(g: BipartiteGraph, u: VertexRef, v: VertexRef) -> tuple[int, int]:
    if u.side != v.side:
        raise PreconditionError("branching pair must lie on one side")
    nu, nv = g.nmask(u.side, u.index), g.nmask(v.side, v.index)
    if not (nu & nv) or nu == nv:
        raise PreconditionError(f"{u} and {v} are not in conflict")
    return nu, nv


def branch_same(state: SearchState, u: VertexRef, v: VertexRef, d_mask: int | None = None,
                options: SolverOptions = SolverOptions()) -> list[SearchState]:
    """Children putting ``u`` and ``v`` in one bicluster: for every subset Z of
    the symmetric difference, join both twin classes to Z and cut them from the rest."""
    g = state.graph
    side = u.side
    nu, nv = _check_conflict(g, u, v)
    if d_mask is None:
        d_mask = _cap(nu ^ nv, options.cap)
    both = _twin_mask(g, side, u.index) | _twin_mask(g, side, v.index)
    groups = _groups(g, side.other, d_mask)
    pair_lists = []
    for sel in range(1 << len(groups)):
        z = 0
        for k, grp in enumerate(groups):
            if sel >> k & 1:
                z |= grp
        pair_lists.append(_block(g, side, both, z, True) + _block(g, side, both, d_mask & ~z, False))
    return _spawn_all(state, pair_lists, options)


def branch_diff(state: SearchState, u: VertexRef, v: VertexRef, c_mask: int | None = None,
                options: SolverOptions = SolverOptions()) -> list[SearchState]:
    """Children separating ``u`` and ``v``: each common neighbour in Z stays
    with u's class, the others stay with v's class."""
    g = state.graph
    side = u.side
    nu, nv = _check_conflict(g, u, v)
    if c_mask is None:
        c_mask = _cap(nu & nv, options.cap)
    ru = _twin_mask(g, side, u.index)
    rv = _twin_mask(g, side, v.index)
    groups = _groups(g, side.other, c_mask)
    pair_lists = []
    for sel in range(1 << len(groups)):
        z = 0
        for k, grp in enumerate(groups):
            if sel >> k & 1:
                z |= grp
        pair_lists.append(_block(g, side, ru, c_mask & ~z, False) + _block(g, side, rv, z, False))
    return _spawn_all(state, pair_lists, options)


# special rules ----------------------------------------------------------------


def degree_one_case(g: BipartiteGraph, u: VertexRef) -> int:
    """Which of the four degree-1 cases applies at ``u``."""
    side = u.side
    nu = g.nmask(side, u.index)
    if nu.bit_count() != 1:
        raise PreconditionError(f"{u} does not have degree 1")
    v = lowest_bit(nu)
    w_mask = g.nmask(side.other, v) & ~_twin_mask(g, side, u.index)
    if not w_mask:
        raise PreconditionError("twin class of u and its neighbour form a bicluster")
    has_deg2 = any(g.nmask(side, w).bit_count() == 2 for w in iter_bits(w_mask))
    if w_mask.bit_count() == 1:
        return 1 if has_deg2 else 3
    return 2 if has_deg2 else 4


def branch_degree_one(state: SearchState, u: VertexRef, options: SolverOptions = SolverOptions(),
                      stats: SolveStats | None = None) -> list[SearchState]:
    g = state.graph
    side = u.side
    case = degree_one_case(g, u)
    if stats is not None:
        stats.rules[f"degree_one_case{case}"] += 1
    v = lowest_bit(g.nmask(side, u.index))
    vbit = 1 << v
    ru = _twin_mask(g, side, u.index)
    w_mask = g.nmask(side.other, v) & ~ru

    def cut_rest(x: int) -> list[tuple[int, int]]:
        # x's class keeps only v
        return _block(g, side, _twin_mask(g, side, x), g.nmask(side, x) & ~vbit, False)

    def cut_v(x: int) -> list[tuple[int, int]]:
        return _block(g, side, _twin_mask(g, side, x), vbit, False)

    drop_uv = _block(g, side, ru, vbit, False)
    if case == 1:
        pair_lists = [cut_rest(lowest_bit(w_mask))]
    elif case == 3:
        w = lowest_bit(w_mask)
        pair_lists = [cut_v(w), cut_rest(w)]
    elif case == 2:
        w = next(x for x in iter_bits(w_mask) if g.nmask(side, x).bit_count() == 2)
        first = cut_rest(w)
        rest = w_mask & ~_twin_mask(g, side, w)
        if not rest:
            pair_lists = [drop_uv, first]
        else:
            w2 = lowest_bit(rest)
            if g.nmask(side, w2).bit_count() == 2:
                pair_lists = [drop_uv, first + cut_rest(w2)]
            else:
                pair_lists = [drop_uv, first + cut_v(w2), first + cut_rest(w2)]
    else:
        x = lowest_bit(w_mask)
        rest = w_mask & ~_twin_mask(g, side, x)
        if not rest:
            pair_lists = [drop_uv, cut_v(x), cut_rest(x)]
        else:
            y = lowest_bit(rest)
            pair_lists = [
                drop_uv,
                cut_rest(x) + cut_rest(y),
                cut_rest(x) + cut_v(y),
                cut_v(x) + cut_rest(y),
                cut_v(x) + cut_v(y),
            ]
    return _spawn_all(state, pair_lists, options)


def twin_rule_sets(g: BipartiteGraph, r: VertexRef, u: VertexRef) -> tuple[int, int]:
    """The (C, D) restriction used when branching a twin class against ``u``."""
    side = r.side
    nr, nu = _check_conflict(g, r, u)
    common = nr & nu
    only_r = nr & ~nu
    only_u = nu & ~nr
    if only_r:
        if common.bit_count() >= 2:
            c, d = _lowest(common, 2), _lowest(only_r, 1)
        else:
            c, d = common, _lowest(only_r, 1) | _lowest(only_u, 1)
    else:
        c, d = _lowest(common, 2), _lowest(only_u, 1)
    other = side.other
    # whole twin classes, so every child edits twins identically
    c_full = d_full = 0
    for x in iter_bits(c):
        c_full |= _twin_mask(g, other, x)
    for x in iter_bits(d):
        d_full |= _twin_mask(g, other, x)
    return c_full, d_full


def branch_twins(state: SearchState, twin_class, u: VertexRef, side: Side | None = None,
                 options: SolverOptions = SolverOptions()) -> list[SearchState]:
    """Branch a twin class (size >= 2) against a vertex it conflicts with."""
    g = state.graph
    side = u.side if side is None else side
    members = sorted(twin_class)
    if len(members) < 2:
        raise PreconditionError("twin rule needs a class with at least two members")
    r = VertexRef(side, members[0])
    c_mask, d_mask = twin_rule_sets(g, r, u)
    return branch_same(state, r, u, d_mask, options) + branch_diff(state, r, u, c_mask, options)


def branch_merge_d1(state: SearchState, u: VertexRef, v: VertexRef,
                    options: SolverOptions = SolverOptions()) -> list[SearchState]:
    """``u`` of degree 3 and ``v`` with N(v) = N(u) - {z}: delete uz or insert vz."""
    g = state.graph
    side = u.side
    nu, nv = _check_conflict(g, u, v)
    if nu.bit_count() != 3:
        raise PreconditionError("merge rule needs a vertex of degree exactly 3")
    if nv & ~nu or (nu & ~nv).bit_count() != 1:
        raise PreconditionError("merge rule needs N(v) to be N(u) minus one vertex")
    z = lowest_bit(nu & ~nv)
    return _spawn_all(
        state,
        [_block(g, side, 1 << u.index, 1 << z, False), _block(g, side, 1 << v.index, 1 << z, True)],
        options,
    )


def unit_conflicts_only(g: BipartiteGraph) -> bool:
    """Every conflicting pair differs in exactly one neighbour."""
    for side in Side:
        adj = g.adjacency(side)
        for u in iter_bits(g.alive_mask(side)):
            for w in conflict_partners(g, VertexRef(side, u)):
                if (adj[u] ^ adj[w]).bit_count() != 1:
                    return False
    return True


def merge_d1_applies(g: BipartiteGraph) -> bool:
    degs = [g.nmask(s, i).bit_count() for s in Side for i in iter_bits(g.alive_mask(s))]
    if not degs or min(degs) < 2 or max(degs) < 3:
        return False
    if any(len(c) > 1 for s in Side for c in side_twin_classes(g, s)):
        return False
    return unit_conflicts_only(g)


# dispatch -------------------------------------------------------------------


@dataclass(frozen=True)
class Dispatch:
    kind: str  # "degree_one" | "twins" | "merge_d1" | "general"
    u: VertexRef
    v: VertexRef | None = None
    twin_class: tuple[int, ...] = ()


def select_branch_pair(state: SearchState, options: SolverOptions = SolverOptions()) -> Dispatch:
    g = state.graph
    if options.degree_one:
        for side in Side:
            for i in iter_bits(g.alive_mask(side)):
                if g.nmask(side, i).bit_count() == 1:
                    return Dispatch("degree_one", VertexRef(side, i))
    if options.twins:
        for side in Side:
            for cls in side_twin_classes(g, side):
                if len(cls) < 2:
                    continue
                for w in conflict_partners(g, VertexRef(side, cls[0])):
                    return Dispatch("twins", VertexRef(side, w), None, cls)
    if options.merge_d1 and merge_d1_applies(g):
        u = max(
            (VertexRef(s, i) for s in Side for i in iter_bits(g.alive_mask(s))),
            key=lambda x: (g.nmask(x.side, x.index).bit_count(), -x.side, -x.index),
        )
        if g.nmask(u.side, u.index).bit_count() != 3:
            raise AssertionError("unit conflicts force maximum degree 3")
        w = next(conflict_partners(g, u))
        return Dispatch("merge_d1", u, VertexRef(u.side, w))
    best = None
    min_deg = 3 if g.max_degree() >= 3 else 1
    for side in Side:
        adj = g.adjacency(side)
        for i in iter_bits(g.alive_mask(side)):
            if adj[i].bit_count() < min_deg:
                continue
            for w in conflict_partners(g, VertexRef(side, i)):
                c = (adj[i] & adj[w]).bit_count()
                d = (adj[i] ^ adj[w]).bit_count()
                key = (-(c + d), -c)
                if best is None or key < best[0]:
                    best = (key, VertexRef(side, i), VertexRef(side, w))
    if best is None:
        raise PreconditionError("graph has no conflicting pair")
    return Dispatch("general", best[1], best[2])


def expand(state: SearchState, options: SolverOptions, stats: SolveStats | None = None) -> list[SearchState]:
    d = select_branch_pair(state, options)
    if d.kind == "degree_one":
        return branch_degree_one(state, d.u, options, stats)
    if stats is not None:
        stats.rules[d.kind] += 1
    if d.kind == "twins":
        return branch_twins(state, d.twin_class, d.u, options=options)
    if d.kind == "merge_d1":
        return branch_merge_d1(state, d.u, d.v, options)
    return branch_same(state, d.u, d.v, None, options) + branch_diff(state, d.u, d.v, None, options)


# maximum degree two ---------------------------------------------------------


def _walk(g: BipartiteGraph, lm: int, rm: int) -> tuple[list[VertexRef], bool]:
    """Order the vertices of a path or cycle component; returns (sequence, is_cycle)."""
    verts = [VertexRef(Side.LEFT, i) for i in iter_bits(lm)] + [VertexRef(Side.RIGHT, j) for j in iter_bits(rm)]
    start = next((x for x in verts if g.nmask(x.side, x.index).bit_count() <= 1), None)
    cycle = start is None
    if cycle:
        start = verts[0]
    seq = [start]
    prev = None
    cur = start
    while True:
        nxt = None
        for y in iter_bits(g.nmask(cur.side, cur.index)):
            cand = VertexRef(cur.side.other, y)
            if cand != prev and cand != start:
                nxt = cand
                break
        if nxt is None:
            break
        seq.append(nxt)
        prev, cur = cur, nxt
    if len(seq) != len(verts):  # pragma: no cover - guarded by the degree check
        raise AssertionError("component is not a path or cycle")
    return seq, cycle


def _pair(a: VertexRef, b: VertexRef) -> tuple[int, int]:
    return (a.index, b.index) if a.side == Side.LEFT else (b.index, a.index)


def _segment_pairs(g: BipartiteGraph, seg: list[VertexRef]) -> list[tuple[int, int]]:
    ls = [x.index for x in seg if x.side == Side.LEFT]
    rs = [x.index for x in seg if x.side == Side.RIGHT]
    return [(l, r) for l in ls for r in rs if not g.has_edge(l, r)]


def _path_dp(g: BipartiteGraph, seq: list[VertexRef]) -> tuple[int, list[tuple[int, int]]]:
    n = len(seq)
    best = [0] + [None] * n
    back = [0] * (n + 1)
    for j in range(1, n + 1):
        p = q = 0
        for i in range(j - 1, -1, -1):  # segment seq[i:j]
            if seq[i].side == Side.LEFT:
                p += 1
            else:
                q += 1
            c = best[i] + p * q - (j - i - 1) + (1 if i > 0 else 0)
            if best[j] is None or c < best[j]:
                best[j] = c
                back[j] = i
    edits = []
    j = n
    while j > 0:
        i = back[j]
        edits += _segment_pairs(g, seq[i:j])
        if i > 0:
            edits.append(_pair(seq[i - 1], seq[i]))
        j = i
    return best[n], edits


def max_degree_two_edits(g: BipartiteGraph) -> tuple[int, list[tuple[int, int]]]:
    """Optimal cost and toggles for a graph whose degrees are all at most 2."""
    if g.max_degree() > 2:
        raise PreconditionError("graph has a vertex of degree above 2")
    total, edits = 0, []
    for lm, rm in component_masks(g):
        if is_bicluster_masks(g, lm, rm):
            continue
        seq, cycle = _walk(g, lm, rm)
        if not cycle:
            c, e = _path_dp(g, seq)
        else:
            whole = _segment_pairs(g, seq)
            c_path, e_path = _path_dp(g.toggled([_pair(seq[-1], seq[0])]), seq)
            if len(whole) <= c_path + 1:
                c, e = len(whole), whole
            else:
                c, e = c_path + 1, e_path + [_pair(seq[-1], seq[0])]
        total += c
        edits += e
    return total, edits


def solve_max_degree_two(g: BipartiteGraph) -> SolveResult:
    cost, pairs = max_degree_two_edits(g)
    ins = frozenset(p for p in pairs if not g.has_edge(*p))
    dels = frozenset(p for p in pairs if g.has_edge(*p))
    stats = SolveStats(nodes=1)
    stats.rules["max_degree_two"] += 1
    return SolveResult(True, cost, EditSet(ins, dels), stats, None)


# search ----------------------------------------------------------------------


def _drop_biclusters(g: BipartiteGraph) -> BipartiteGraph:
    drop_l = drop_r = 0
    for lm, rm in component_masks(g):
        if is_bicluster_masks(g, lm, rm):
            drop_l |= lm
            drop_r |= rm
    if drop_l or drop_r:
        return g.without(drop_l, drop_r)
    return g


def _finish(state: SearchState, pairs) -> EditSet:
    ins, dels = set(state.ins), set(state.dels)
    g = state.graph
    for p in pairs:
        if p in ins:
            ins.discard(p)
        elif p in dels:
            dels.discard(p)
        elif g.has_edge(*p):
            dels.add(p)
        else:
            ins.add(p)
    return EditSet(frozenset(ins), frozenset(dels))


def _search(state: SearchState, options: SolverOptions, stats: SolveStats) -> EditSet | None:
    stats.nodes += 1
    if state.depth > stats.max_depth:
        stats.max_depth = state.depth
    g = _drop_biclusters(state.graph)
    if g.num_vertices == 0:
        return state.edit_set()
    if state.budget <= 0:
        return None
    if options.max_degree_two and g.max_degree() <= 2:
        stats.rules["max_degree_two"] += 1
        cost, pairs = max_degree_two_edits(g)
        if cost > state.budget:
            return None
        return _finish(state.with_graph(g), pairs)
    for child in expand(state.with_graph(g), options, stats):
        found = _search(child, options, stats)
        if found is not None:
            return found
    return None


def solve_decision(inst: Instance, options: SolverOptions | None = None) -> SolveResult:
    """Is there a biclustering within the budget?  Returns a witness on YES."""
    options = options or SolverOptions()
    stats = SolveStats()
    witness = _search(SearchState.root(inst.graph, inst.budget), options, stats)
    if witness is None:
        return SolveResult(False, None, None, stats, inst.budget)
    return SolveResult(True, witness.cost, witness, stats, inst.budget)


def solve_optimal(g: BipartiteGraph, options: SolverOptions | None = None) -> SolveResult:
    """Minimum edit cost by trying budgets 0, 1, 2, ... in turn."""
    stats = SolveStats()
    k = 0
    while True:
        res = solve_decision(Instance(g, k), options)
        stats.merge(res.stats)
        if res.decision:
            if res.witness.cost != k:  # pragma: no cover - contradicts the previous NO
                raise AssertionError(f"witness of cost {res.witness.cost} found at budget {k}")
            return SolveResult(True, k, res.witness, stats, k)
        k += 1
