"""Reduction rules and the kernelization fixpoint.

Rule 1 drops bicluster components, Rule 2 trims oversized twin classes and
Rule 3 cuts the extra edge of a sister vertex at the price of one unit of
budget.  Ties are broken towards small indices, except that Rule 2 removes
the largest member of a class so the survivors keep their indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import (
    BipartiteGraph,
    Side,
    VertexRef,
    component_masks,
    is_bicluster_masks,
    iter_bits,
    lowest_bit,
    side_twin_classes,
)


class BudgetExhausted(Exception):
    """Rule 3 fired with no budget left: the instance is a NO instance."""


@dataclass(frozen=True)
class Instance:
    graph: BipartiteGraph
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")


@dataclass(frozen=True)
class TraceStep:
    rule: int
    witness: tuple  # vertex refs for rules 1 and 2, a (left, right) edge for rule 3
    budget_delta: int = 0

    def to_line(self) -> str:
        if self.rule == 3:
            l, r = self.witness
            return f"R3 {l + 1} {r + 1}"
        return f"R{self.rule} " + " ".join(str(v) for v in self.witness)

    @classmethod
    def from_line(cls, line: str) -> "TraceStep":
        tok = line.split()
        if not tok or tok[0] not in ("R1", "R2", "R3"):
            raise ValueError(f"bad trace line {line!r}")
        rule = int(tok[0][1])
        if rule == 3:
            if len(tok) != 3:
                raise ValueError(f"bad trace line {line!r}")
            return cls(3, (int(tok[1]) - 1, int(tok[2]) - 1), 1)
        refs = []
        for t in tok[1:]:
            if t[0] not in "lr":
                raise ValueError(f"bad vertex token {t!r}")
            refs.append(VertexRef(Side.LEFT if t[0] == "l" else Side.RIGHT, int(t[1:]) - 1))
        return cls(rule, tuple(refs), 0)


@dataclass
class KernelTrace:
    steps: list[TraceStep] = field(default_factory=list)

    @property
    def budget_used(self) -> int:
        return sum(s.budget_delta for s in self.steps)

    def count(self, rule: int) -> int:
        return sum(1 for s in self.steps if s.rule == rule)

    def to_text(self) -> str:
        return "".join(s.to_line() + "\n" for s in self.steps)

    @classmethod
    def from_text(cls, text: str) -> "KernelTrace":
        return cls([TraceStep.from_line(ln) for ln in text.splitlines() if ln.strip()])


@dataclass(frozen=True)
class SisterSet:
    side: Side
    twin_class: tuple[int, ...]
    s: frozenset[int]  # common neighbourhood N(R), on the other side
    sisters: tuple[tuple[int, int], ...]  # (t, extra neighbour of t)


@dataclass
class KernelResult:
    instance: Instance | None  # None certifies a NO instance
    trace: KernelTrace

    @property
    def is_no(self) -> bool:
        return self.instance is None


# helpers -----------------------------------------------------------------


def _second_neighbourhood(g: BipartiteGraph, side: Side, s_mask: int) -> int:
    out = 0
    for x in iter_bits(s_mask):
        out |= g.nmask(side.other, x)
    return out


def _class_mask(cls: tuple[int, ...]) -> int:
    m = 0
    for i in cls:
        m |= 1 << i
    return m


def _refs(side: Side, mask: int) -> tuple[VertexRef, ...]:
    return tuple(VertexRef(side, i) for i in iter_bits(mask))


# rules --------------------------------------------------------------------


def rule1(inst: Instance) -> tuple[Instance, list[TraceStep]]:
    g = inst.graph
    drop_l = drop_r = 0
    steps = []
    for lm, rm in component_masks(g):
        if is_bicluster_masks(g, lm, rm):
            drop_l |= lm
            drop_r |= rm
            steps.append(TraceStep(1, _refs(Side.LEFT, lm) + _refs(Side.RIGHT, rm)))
    if not steps:
        return inst, []
    return Instance(g.without(drop_l, drop_r), inst.budget), steps


def _rule2_target(g: BipartiteGraph) -> VertexRef | None:
    for side in Side:
        for cls in side_twin_classes(g, side):
            cmask = _class_mask(cls)
            s_mask = g.nmask(side, cls[0])
            outer = _second_neighbourhood(g, side, s_mask) & ~cmask
            if len(cls) > outer.bit_count():
                return VertexRef(side, cls[-1])
    return None


def rule2(inst: Instance) -> tuple[Instance, list[TraceStep]]:
    """Remove vertices of oversized twin classes until none is left."""
    steps = []
    g = inst.graph
    while (v := _rule2_target(g)) is not None:
        g = g.without(1 << v.index, 0) if v.side == Side.LEFT else g.without(0, 1 << v.index)
        steps.append(TraceStep(2, (v,)))
    if not steps:
        return inst, []
    return Instance(g, inst.budget), steps


def sisters(g: BipartiteGraph, twin_class, side: Side = Side.LEFT) -> SisterSet:
    """Sisters of a twin class: twin-free ``t`` with ``N(t) = N(R) + {v}``."""
    cls = tuple(sorted(twin_class))
    cmask = _class_mask(cls)
    s_mask = g.nmask(side, cls[0])
    adj = g.adjacency(side)
    counts: dict[int, int] = {}
    for i in iter_bits(g.alive_mask(side)):
        counts[adj[i]] = counts.get(adj[i], 0) + 1
    found = []
    for t in iter_bits(_second_neighbourhood(g, side, s_mask) & ~cmask):
        nt = adj[t]
        extra = nt & ~s_mask
        if counts[nt] == 1 and nt & s_mask == s_mask and extra.bit_count() == 1:
            found.append((t, lowest_bit(extra)))
    return SisterSet(side, cls, frozenset(iter_bits(s_mask)), tuple(found))


def _rule3_target(g: BipartiteGraph) -> tuple[Side, int, int] | None:
    for side in Side:
        for cls in side_twin_classes(g, side):
            ss = sisters(g, cls, side)
            if not ss.sisters:
                continue
            t_mask = _class_mask(tuple(t for t, _ in ss.sisters))
            w = _second_neighbourhood(g, side, g.nmask(side, cls[0])) & ~(_class_mask(cls) | t_mask)
            if len(cls) > w.bit_count():
                t, extra = ss.sisters[0]
                return side, t, extra
    return None


def rule3(inst: Instance) -> tuple[Instance, list[TraceStep]]:
    """Apply one Rule-3 deletion if possible; raises ``BudgetExhausted`` at budget 0."""
    target = _rule3_target(inst.graph)
    if target is None:
        return inst, []
    side, t, extra = target
    edge = (t, extra) if side == Side.LEFT else (extra, t)
    if inst.budget == 0:
        raise BudgetExhausted(f"rule 3 needs to delete {edge} with no budget left")
    g = inst.graph.toggled([edge])
    return Instance(g, inst.budget - 1), [TraceStep(3, edge, 1)]


def kernelize(inst: Instance) -> KernelResult:
    trace = KernelTrace()
    while True:
        inst, steps = rule1(inst)
        trace.steps += steps
        inst, steps = rule2(inst)
        trace.steps += steps
        if steps:
            continue
        try:
            inst, steps = rule3(inst)
        except BudgetExhausted:
            return KernelResult(None, trace)
        trace.steps += steps
        if not steps:
            return KernelResult(inst, trace)


def replay(inst: Instance, trace: KernelTrace) -> Instance:
    """Re-apply recorded steps verbatim (no rule preconditions are re-checked)."""
    g, k = inst.graph, inst.budget
    for st in trace.steps:
        if st.rule == 3:
            g = g.toggled([st.witness])
            k -= 1
        else:
            lm = sum(1 << v.index for v in st.witness if v.side == Side.LEFT)
            rm = sum(1 << v.index for v in st.witness if v.side == Side.RIGHT)
            g = g.without(lm, rm)
    return Instance(g, k)


def rules_apply(g: BipartiteGraph) -> set[int]:
    """Which of the three rules have a match in ``g``."""
    out = set()
    if any(is_bicluster_masks(g, lm, rm) for lm, rm in component_masks(g)):
        out.add(1)
    if _rule2_target(g) is not None:
        out.add(2)
    if _rule3_target(g) is not None:
        out.add(3)
    return out
