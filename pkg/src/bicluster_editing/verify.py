"""Independent solution checker; relies on the graph module only."""

from __future__ import annotations

from dataclasses import dataclass, field

from .formats import Solution
from .graph import BipartiteGraph, EditError, Side, apply_edits, component_masks, is_bicluster_masks, iter_bits

BAD_EDIT = "bad-edit"
COST_MISMATCH = "cost-mismatch"
NOT_BICLUSTER = "not-bicluster"


@dataclass
class Violation:
    category: str
    message: str

    def __str__(self) -> str:
        return f"{self.category}: {self.message}"


@dataclass
class VerifyReport:
    violations: list[Violation] = field(default_factory=list)
    checked: bool = True  # False for a NO claim, which carries nothing to check

    @property
    def ok(self) -> bool:
        return not self.violations

    def categories(self) -> set[str]:
        return {v.category for v in self.violations}

    def to_text(self) -> str:
        if self.ok:
            return "OK\n" if self.checked else "OK (NO claim, nothing to check)\n"
        return "".join(f"{v}\n" for v in self.violations)


def verify(g: BipartiteGraph, sol: Solution, budget: int | None = None) -> VerifyReport:
    rep = VerifyReport()
    if not sol.decision:
        rep.checked = False
        return rep
    e = sol.edits
    try:
        e.validate(g)
    except EditError as exc:
        rep.violations.append(Violation(BAD_EDIT, str(exc)))
        return rep
    if sol.cost is None or e.cost > sol.cost:
        rep.violations.append(Violation(COST_MISMATCH, f"{e.cost} edits listed, claimed cost {sol.cost}"))
    if budget is not None and e.cost > budget:
        rep.violations.append(Violation(COST_MISMATCH, f"{e.cost} edits exceed budget {budget}"))
    h = apply_edits(g, e)
    for lm, rm in component_masks(h):
        if not is_bicluster_masks(h, lm, rm):
            names = [f"l{i + 1}" for i in iter_bits(lm)] + [f"r{j + 1}" for j in iter_bits(rm)]
            rep.violations.append(Violation(NOT_BICLUSTER, "component {" + " ".join(names) + "} is not complete"))
    if sol.clusters:
        comps = {
            (frozenset(iter_bits(lm)), frozenset(iter_bits(rm))) for lm, rm in component_masks(h)
        }
        listed = {
            (frozenset(v.index for v in vs if v.side == Side.LEFT), frozenset(v.index for v in vs if v.side == Side.RIGHT))
            for _, vs in sol.clusters
        }
        if listed != comps:
            rep.violations.append(Violation(NOT_BICLUSTER, "cluster lines do not match the edited graph"))
    return rep
