import itertools
import random

import pytest

from _universe import all_3x3, all_4x4_sorted, random_small
from bicluster_editing.branching import BranchingVector, branching_factor, is_better
from bicluster_editing.generators import p6_graph, tight_graph
from bicluster_editing.graph import (
    BipartiteGraph,
    Side,
    VertexRef,
    apply_edits,
    component_masks,
    is_bicluster_graph,
    is_bicluster_masks,
    left,
    right,
    side_twin_classes,
)
from bicluster_editing.kernel import Instance, kernelize
from bicluster_editing.oracle import oracle_opt, satisfies_deletion_condition
from bicluster_editing.solver import (
    PreconditionError,
    SearchState,
    SolverOptions,
    branch_degree_one,
    branch_diff,
    branch_merge_d1,
    branch_same,
    branch_twins,
    degree_one_case,
    expand,
    max_degree_two_edits,
    merge_d1_applies,
    prune_deletion_maximal,
    select_branch_pair,
    solve_decision,
    solve_max_degree_two,
    solve_optimal,
)

NO_PRUNE = SolverOptions(prune_deletion_maximal=False)


def state(g, k=50):
    return SearchState.root(g, k)


def new_edits(parent, child):
    return (child.ins | child.dels) - (parent.ins | parent.dels)


def costs(parent, children):
    return sorted(parent.budget - c.budget for c in children)


def k_mn(m, n):
    return BipartiteGraph.from_edges(m, n, itertools.product(range(m), range(n)))


def graph_from_rows(n_right, rows):
    return BipartiteGraph.from_left_masks(n_right, [sum(1 << j for j in row) for row in rows])


# branch_same / branch_diff -------------------------------------------------


def test_branch_same_p6():
    st = state(p6_graph(1))
    kids = branch_same(st, left(1), left(0), options=NO_PRUNE)
    assert sorted((sorted(c.ins), sorted(c.dels)) for c in kids) == [([], [(1, 1)]), ([(0, 1)], [])]
    # l1 has degree 1, so an insertion at it is never needed
    kids = branch_same(st, left(1), left(0))
    assert [(c.ins, c.dels) for c in kids] == [(frozenset(), frozenset({(1, 1)}))]


def test_branch_diff_p6():
    kids = branch_diff(state(p6_graph(1)), left(0), left(1))
    assert sorted(sorted(c.dels) for c in kids) == [[(0, 0)], [(1, 0)]]
    assert all(not c.ins for c in kids)


def test_branch_same_two_element_difference():
    g = graph_from_rows(4, [[0, 1, 2], [0, 1, 3]])
    kids = branch_same(state(g), left(0), left(1), options=NO_PRUNE)
    assert len(kids) == 4 and costs(state(g), kids) == [2, 2, 2, 2]


def test_branch_diff_three_common():
    # l3, l4 keep the three common neighbours out of one twin class
    g = graph_from_rows(4, [[0, 1, 2, 3], [0, 1, 2], [0], [1]])
    st = state(g)
    kids = branch_diff(st, left(0), left(1), options=NO_PRUNE)
    assert len(kids) == 8 and costs(st, kids) == [3] * 8


def test_branch_mirrors_twins():
    # l1, l2 twins; l3 conflicts with them through r1
    g = graph_from_rows(3, [[0, 1], [0, 1], [0, 2]])
    st = state(g)
    kids = branch_same(st, left(0), left(2), options=NO_PRUNE)
    for c in kids:
        e = new_edits(st, c)
        assert {r for l, r in e if l == 0} == {r for l, r in e if l == 1}
    assert costs(st, kids) == [2, 3, 3, 4]


def test_branch_requires_conflict():
    with pytest.raises(PreconditionError):
        branch_same(state(k_mn(2, 2)), left(0), left(1))
    with pytest.raises(PreconditionError):
        branch_diff(state(p6_graph(1)), left(0), right(0))


def test_children_respect_budget():
    g = graph_from_rows(4, [[0, 1, 2, 3], [0, 1, 2]])
    assert branch_diff(state(g, 2), left(0), left(1)) == []


def test_toggling_back_is_dropped():
    from bicluster_editing.solver import spawn

    st = state(p6_graph(1))
    child = next(c for c in branch_diff(st, left(0), left(1)) if (1, 0) in c.dels)
    # re-inserting l2r1 would undo the edit made above
    assert spawn(child, [(1, 0)], NO_PRUNE) is None


# pruning --------------------------------------------------------------------


def test_prune_deletion_maximal_examples():
    # l2 of the P6 has degree 2
    g = p6_graph(1)
    st = state(g)
    assert not prune_deletion_maximal(st, [(1, 0), (1, 2)])  # deletion + insertion, count 2 = deg
    assert prune_deletion_maximal(st, [(1, 0), (1, 1)])  # two deletions
    assert prune_deletion_maximal(st, [(1, 1)])
    assert not prune_deletion_maximal(st, [(0, 1)])  # degree 1 vertex, one insertion


def test_prune_uses_accumulated_counts():
    g = p6_graph(1)
    from bicluster_editing.solver import spawn
    child = spawn(state(g), [(1, 0)], SolverOptions())
    assert prune_deletion_maximal(child, [(1, 1)])
    assert not prune_deletion_maximal(child, [(1, 2)])


# degree-1 rule ---------------------------------------------------------------


def test_degree_one_case1_p6():
    st = state(p6_graph(1))
    assert degree_one_case(st.graph, left(0)) == 1
    kids = branch_degree_one(st, left(0))
    assert [(c.ins, c.dels) for c in kids] == [(frozenset(), frozenset({(1, 1)}))]


def test_degree_one_case4_vector():
    g = graph_from_rows(5, [[0], [0, 1, 2], [0, 3, 4]])
    st = state(g)
    assert degree_one_case(g, left(0)) == 4
    kids = branch_degree_one(st, left(0))
    assert costs(st, kids) == [1, 2, 3, 3, 4]


def test_degree_one_case3_vector():
    g = graph_from_rows(3, [[0], [0, 1, 2]])
    st = state(g)
    assert degree_one_case(g, left(0)) == 3
    assert costs(st, branch_degree_one(st, left(0))) == [1, 2]


def test_degree_one_case2_vectors():
    # W = {w deg 2, w' deg 3}
    g = graph_from_rows(4, [[0], [0, 1], [0, 2, 3]])
    st = state(g)
    assert degree_one_case(g, left(0)) == 2
    assert costs(st, branch_degree_one(st, left(0))) == [1, 2, 3]
    # W = {w, w'} both degree 2
    g = graph_from_rows(3, [[0], [0, 1], [0, 2]])
    st = state(g)
    assert costs(st, branch_degree_one(st, left(0))) == [1, 2]


def test_degree_one_without_w_is_precondition_error():
    with pytest.raises(PreconditionError):
        branch_degree_one(state(k_mn(1, 1)), left(0))
    with pytest.raises(PreconditionError):
        branch_degree_one(state(p6_graph(1)), left(1))


def test_degree_one_vectors_within_bound():
    bound = BranchingVector.of(1, 2, 3, 3, 4)
    rng = random.Random(9)
    seen = set()
    for _ in range(400):
        n, m = rng.randint(2, 6), rng.randint(2, 6)
        g = BipartiteGraph.from_edges(n, m, [(i, j) for i in range(n) for j in range(m) if rng.random() < 0.45])
        for s in Side:
            for i in g.vertices(s):
                u = VertexRef(s, i)
                if g.degree(u) != 1:
                    continue
                try:
                    case = degree_one_case(g, u)
                except PreconditionError:
                    continue
                st = state(g)
                kids = branch_degree_one(st, u, NO_PRUNE)
                seen.add(case)
                assert is_better(BranchingVector(tuple(costs(st, kids))), bound)
    assert seen == {1, 2, 3, 4}


# twin rule ---------------------------------------------------------------


def test_twin_rule_six_children():
    # R = {l1, l2} on {x, z}; u = l3 on {x, w}
    g = graph_from_rows(3, [[0, 1], [0, 1], [0, 2]])
    st = state(g)
    kids = branch_twins(st, (0, 1), left(2), options=NO_PRUNE)
    assert costs(st, kids) == [1, 2, 2, 3, 3, 4]


def test_twin_rule_tight_graph():
    g = tight_graph(1)
    st = state(g)
    kids = branch_twins(st, (2, 3), left(0), options=NO_PRUNE)
    # a has twin b, so every branch edits two vertices at once
    assert costs(st, kids) == [2, 2, 2, 2]
    assert branching_factor(BranchingVector.of(2, 2, 2, 2)).value < 2.317
    assert any(c.dels == {(2, 1), (3, 1)} for c in kids)


def test_twin_rule_needs_class_and_conflict():
    with pytest.raises(PreconditionError):
        branch_twins(state(p6_graph(1)), (0,), left(1))
    with pytest.raises(PreconditionError):
        branch_twins(state(k_mn(2, 2)), (0, 1), left(0))


def test_twin_rule_vectors_within_bound():
    bound = BranchingVector.of(1, 2, 2, 3, 3, 4)
    rng = random.Random(21)
    checked = 0
    for _ in range(600):
        n, m = rng.randint(3, 6), rng.randint(3, 6)
        g = BipartiteGraph.from_edges(n, m, [(i, j) for i in range(n) for j in range(m) if rng.random() < 0.55])
        if min((g.degree(v) for v in g.all_vertices()), default=0) < 2:
            continue
        st = state(g)
        d = select_branch_pair(st)
        if d.kind != "twins":
            continue
        kids = branch_twins(st, d.twin_class, d.u, options=NO_PRUNE)
        assert is_better(BranchingVector(tuple(costs(st, kids))), bound)
        checked += 1
    assert checked > 20


# d = 1 merge -------------------------------------------------------------


def test_merge_d1_lemma_configuration():
    # u = l1 on {x, y, z}; v = l2 on {x, y}; z' = l3 on {x}
    g = graph_from_rows(3, [[0, 1, 2], [0, 1], [0]])
    st = state(g)
    kids = branch_merge_d1(st, left(0), left(1), NO_PRUNE)
    assert [(c.ins, c.dels) for c in kids] == [(frozenset(), frozenset({(0, 2)})), (frozenset({(1, 2)}), frozenset())]


def test_merge_d1_rejects_larger_difference():
    g = graph_from_rows(4, [[0, 1, 2], [0, 3]])
    with pytest.raises(PreconditionError):
        branch_merge_d1(state(g), left(0), left(1))


def test_merge_d1_global_precondition_never_holds_small():
    # with no twins and min degree 2, two common neighbours of u, v would be twins
    for g in all_4x4_sorted():
        assert not merge_d1_applies(g)


# max degree two ---------------------------------------------------------------


def path_graph(n, start=Side.LEFT):
    sides = [Side(start ^ (i % 2)) for i in range(n)]
    idx = {Side.LEFT: 0, Side.RIGHT: 0}
    ids = []
    for s in sides:
        ids.append(idx[s])
        idx[s] += 1
    edges = []
    for i in range(n - 1):
        a, b = (ids[i], ids[i + 1]) if sides[i] == Side.LEFT else (ids[i + 1], ids[i])
        edges.append((a, b))
    return BipartiteGraph.from_edges(idx[Side.LEFT], idx[Side.RIGHT], edges)


def cycle_graph(n):
    h = n // 2
    return BipartiteGraph.from_edges(h, h, [(i, i) for i in range(h)] + [((i + 1) % h, i) for i in range(h)])


def test_max_degree_two_examples():
    assert solve_max_degree_two(p6_graph(1)).cost == 1
    assert solve_max_degree_two(cycle_graph(4)).cost == 0
    assert solve_max_degree_two(cycle_graph(6)).cost == 2
    with pytest.raises(PreconditionError):
        solve_max_degree_two(k_mn(1, 3))


@pytest.mark.parametrize("n", range(1, 11))
def test_paths_match_oracle(n):
    for start in Side:
        g = path_graph(n, start)
        res = solve_max_degree_two(g)
        assert res.cost == oracle_opt(g)[0]
        assert is_bicluster_graph(apply_edits(g, res.witness)) and res.witness.cost == res.cost


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_cycles_match_oracle(n):
    g = cycle_graph(n)
    res = solve_max_degree_two(g)
    assert res.cost == oracle_opt(g)[0]
    assert is_bicluster_graph(apply_edits(g, res.witness))


def test_max_degree_two_random_unions():
    rng = random.Random(4)
    for _ in range(200):
        n, m = rng.randint(1, 6), rng.randint(1, 6)
        edges = [(i, j) for i in range(n) for j in range(m) if rng.random() < 0.5]
        rng.shuffle(edges)
        dl, dr, kept = [0] * n, [0] * m, []
        for i, j in edges:
            if dl[i] < 2 and dr[j] < 2:
                kept.append((i, j))
                dl[i] += 1
                dr[j] += 1
        g = BipartiteGraph.from_edges(n, m, kept)
        c, pairs = max_degree_two_edits(g)
        assert c == len(pairs) == oracle_opt(g)[0]


# dispatch --------------------------------------------------------------------


def test_dispatch_priorities():
    assert select_branch_pair(state(graph_from_rows(3, [[0], [0, 1, 2]]))).kind == "degree_one"
    d = select_branch_pair(state(tight_graph(1)))
    assert d.kind == "degree_one"  # a and b have degree 1
    g = graph_from_rows(4, [[0, 1], [0, 1], [0, 2, 3], [1, 2, 3]])
    d = select_branch_pair(state(g))
    assert d.kind == "twins" and d.twin_class == (0, 1)
    g = graph_from_rows(4, [[0, 1, 2], [0, 1, 3], [2, 3], [0, 2]])
    d = select_branch_pair(state(g))
    assert d.kind == "general"
    assert d.u.side == Side.LEFT and g.degree(d.u) >= 3


def test_general_pair_maximises_c_plus_d():
    opts = SolverOptions(degree_one=False, twins=False)
    g = graph_from_rows(5, [[0, 1, 2], [0, 1, 3], [2, 4]])
    d = select_branch_pair(state(g), opts)
    nu, nv = g.nmask(d.u.side, d.u.index), g.nmask(d.v.side, d.v.index)
    best = (nu & nv).bit_count() + (nu ^ nv).bit_count()
    for s in Side:
        for a in g.vertices(s):
            if g.degree(VertexRef(s, a)) < 3:
                continue
            for b in g.vertices(s):
                x, y = g.nmask(s, a), g.nmask(s, b)
                if x & y and x != y:
                    assert (x & y).bit_count() + (x ^ y).bit_count() <= best


# invariants on expansions -------------------------------------------------------


def test_twin_consistency_and_budget_soundness():
    for g in random_small(300, 6, 77):
        st = state(g, 8)
        from bicluster_editing.solver import _drop_biclusters
        h = _drop_biclusters(g)
        if h.num_vertices == 0 or h.max_degree() <= 2:
            continue
        st = st.with_graph(h)
        for child in expand(st, SolverOptions()):
            e = new_edits(st, child)
            assert st.budget - child.budget == len(e) >= 1
            assert child.budget >= 0
            for s in Side:
                pos = int(s)
                for cls in side_twin_classes(h, s):
                    patterns = {frozenset(p[1 - pos] for p in e if p[pos] == i) for i in cls}
                    assert len(patterns) == 1, (h, cls)


def test_isolation_lemma():
    """In a min-degree-2 graph, keeping one edge at u leaves u's component non-bicluster."""
    rng = random.Random(13)
    tested = 0
    for _ in range(1500):
        n, m = rng.randint(2, 6), rng.randint(2, 6)
        g = BipartiteGraph.from_edges(n, m, [(i, j) for i in range(n) for j in range(m) if rng.random() < 0.5])
        if min(g.degree(v) for v in g.all_vertices()) < 2:
            continue
        comp_ok = all(not is_bicluster_masks(g, lm, rm) for lm, rm in component_masks(g))
        if not comp_ok:
            continue
        for u in g.all_vertices():
            nb = sorted(g.neighbors(u))
            for keep in nb:
                drop = [(u.index, x) if u.side == Side.LEFT else (x, u.index) for x in nb if x != keep]
                h = g.toggled(drop)
                for lm, rm in component_masks(h):
                    mine = lm if u.side == Side.LEFT else rm
                    if mine >> u.index & 1:
                        assert not is_bicluster_masks(h, lm, rm)
                        tested += 1
    assert tested > 100


# decision / optimisation ---------------------------------------------------------


def test_solve_decision_examples():
    p6 = p6_graph(1)
    assert not solve_decision(Instance(p6, 0)).decision
    r = solve_decision(Instance(p6, 1))
    assert r.decision and r.witness.cost == 1 and not r.witness.insertions
    t = tight_graph(1)
    assert not solve_decision(Instance(t, 1)).decision
    r = solve_decision(Instance(t, 2))
    assert r.decision and len(r.witness.deletions) == 2 and not r.witness.insertions


def test_solve_optimal_examples():
    r = solve_optimal(k_mn(2, 3))
    assert r.cost == 0 and r.witness.cost == 0
    assert solve_optimal(p6_graph(3)).cost == 3
    assert solve_optimal(tight_graph(2)).cost == 4
    assert solve_optimal(BipartiteGraph.from_edges(0, 0)).cost == 0


def test_stats_collected():
    r = solve_optimal(graph_from_rows(5, [[0, 1, 2], [0, 1, 3], [2, 4], [1, 3, 4]]))
    assert r.stats.nodes >= 1 and r.stats.max_depth >= 1 and sum(r.stats.rules.values()) >= 1


OPTION_SETS = [
    SolverOptions(),
    SolverOptions(prune_deletion_maximal=False),
    SolverOptions(degree_one=False),
    SolverOptions(twins=False),
    SolverOptions(max_degree_two=False),
    SolverOptions(False, False, False, False, False),
]


@pytest.mark.parametrize("opts", OPTION_SETS, ids=lambda o: "-".join(k for k, v in vars(o).items() if v is False) or "default")
def test_oracle_equivalence_exhaustive_4x4(opts):
    for g in all_4x4_sorted():
        r = solve_optimal(g, opts)
        assert r.cost == oracle_opt(g)[0], g
        assert is_bicluster_graph(apply_edits(g, r.witness))


def test_oracle_equivalence_random_6x6():
    for g in random_small(150, 6, 99):
        r = solve_optimal(g)
        assert r.cost == oracle_opt(g)[0], g
        h = apply_edits(g, r.witness)
        assert is_bicluster_graph(h)


def test_witness_is_deletion_maximal():
    for g in all_3x3():
        r = solve_optimal(g)
        assert satisfies_deletion_condition(g, r.witness)


def test_kernel_first_equivalence_4x4():
    for g in all_4x4_sorted()[::3]:
        k_star = oracle_opt(g)[0]
        for k in range(max(0, k_star - 1), k_star + 2):
            direct = solve_decision(Instance(g, k)).decision
            kr = kernelize(Instance(g, k))
            via = (not kr.is_no) and solve_decision(kr.instance).decision
            assert direct == via == (k_star <= k)


def test_decision_is_deterministic():
    g = graph_from_rows(5, [[0, 1, 2], [0, 1, 3], [2, 4], [1, 3, 4]])
    a = solve_decision(Instance(g, 3))
    b = solve_decision(Instance(g, 3))
    assert a.witness == b.witness and a.stats.nodes == b.stats.nodes
