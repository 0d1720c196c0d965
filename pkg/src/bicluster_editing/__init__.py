"""Exact bicluster editing: kernelization, FPT branching, brute-force oracle."""

from .branching import BranchingVector, RootResult, branching_factor, compose, is_better, lrr_cd
from .graph import (
    BipartiteGraph,
    EditSet,
    GraphError,
    Side,
    TwinPartition,
    VertexRef,
    apply_edits,
    bicluster_components,
    find_conflict,
    in_conflict,
    is_bicluster_graph,
    per_vertex_edit_count,
    twin_classes,
)
from .kernel import Instance, KernelResult, KernelTrace, kernelize, rule1, rule2, rule3, sisters
from .oracle import Biclustering, OracleTooLarge, cost, oracle_opt, oracle_opt_deletion_maximal, oracle_opt_twin_respecting
from .solver import SolveResult, SolverOptions, solve_decision, solve_max_degree_two, solve_optimal

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "Biclustering",
    "BranchingVector",
    "EditSet",
    "GraphError",
    "Instance",
    "KernelResult",
    "KernelTrace",
    "OracleTooLarge",
    "RootResult",
    "Side",
    "SolveResult",
    "SolverOptions",
    "TwinPartition",
    "VertexRef",
    "apply_edits",
    "bicluster_components",
    "branching_factor",
    "compose",
    "cost",
    "find_conflict",
    "in_conflict",
    "is_better",
    "is_bicluster_graph",
    "kernelize",
    "lrr_cd",
    "oracle_opt",
    "oracle_opt_deletion_maximal",
    "oracle_opt_twin_respecting",
    "per_vertex_edit_count",
    "rule1",
    "rule2",
    "rule3",
    "sisters",
    "solve_decision",
    "solve_max_degree_two",
    "solve_optimal",
    "twin_classes",
]
