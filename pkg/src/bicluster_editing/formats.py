"""Line-oriented text formats for instances and solutions (1-based on disk).

Instance::

    c optional comments anywhere
    p bce <n_left> <n_right> <m>
    e <left> <right>            (m lines)

Solution::

    s YES <cost>   |   s NO
    - <left> <right>            deletions, sorted
    + <left> <right>            insertions, sorted
    b <cluster-id> l1 l2 r1 ... optional cluster lines
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import BipartiteGraph, EditSet, Side, VertexRef, apply_edits, component_masks, iter_bits


class ParseError(ValueError):
    def __init__(self, lineno: int | None, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def _ints(tok: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tok]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tok)!r}") from None


def parse_graph(text: str) -> BipartiteGraph:
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if header is not None:
                raise ParseError(lineno, "second header line")
            if len(tok) != 5 or tok[1] != "bce":
                raise ParseError(lineno, "header must read 'p bce <n_left> <n_right> <m>'")
            header = _ints(tok[2:], lineno)
            if min(header) < 0:
                raise ParseError(lineno, "negative count in header")
        elif tok[0] == "e":
            if header is None:
                raise ParseError(lineno, "edge before header")
            if len(tok) != 3:
                raise ParseError(lineno, "edge line must read 'e <left> <right>'")
            l, r = _ints(tok[1:], lineno)
            if not (1 <= l <= header[0] and 1 <= r <= header[1]):
                raise ParseError(lineno, f"edge ({l}, {r}) out of range")
            if (l, r) in seen:
                raise ParseError(lineno, f"duplicate edge ({l}, {r})")
            seen.add((l, r))
            edges.append((l - 1, r - 1))
        else:
            raise ParseError(lineno, f"unknown line type {tok[0]!r}")
    if header is None:
        raise ParseError(None, "missing 'p bce' header")
    if len(edges) != header[2]:
        raise ParseError(None, f"header announces {header[2]} edges, found {len(edges)}")
    return BipartiteGraph.from_edges(header[0], header[1], edges)


def parse_instance(text: str, budget: int = 0):
    """Parse an instance file; the budget comes from the caller, not the file."""
    from .kernel import Instance

    return Instance(parse_graph(text), budget)


def write_instance(g: BipartiteGraph, comments=()) -> str:
    if g.count(Side.LEFT) != g.n_left or g.count(Side.RIGHT) != g.n_right:
        g = g.compact()[0]
    out = [f"c {c}" for c in comments]
    edges = g.edges()
    out.append(f"p bce {g.n_left} {g.n_right} {len(edges)}")
    out += [f"e {l + 1} {r + 1}" for l, r in edges]
    return "\n".join(out) + "\n"


# solutions -----------------------------------------------------------------


@dataclass
class Solution:
    decision: bool
    cost: int | None
    edits: EditSet = field(default_factory=EditSet)
    clusters: list[tuple[int, list[VertexRef]]] = field(default_factory=list)


def clusters_of(g: BipartiteGraph) -> list[list[VertexRef]]:
    """Connected components as vertex lists, left members first."""
    out = []
    for lm, rm in component_masks(g):
        out.append([VertexRef(Side.LEFT, i) for i in iter_bits(lm)] + [VertexRef(Side.RIGHT, j) for j in iter_bits(rm)])
    return out


def format_solution(decision: bool, cost: int | None, edits: EditSet | None = None,
                    graph: BipartiteGraph | None = None) -> str:
    if not decision:
        return "s NO\n"
    edits = edits or EditSet()
    out = [f"s YES {cost}"]
    out += [f"- {l + 1} {r + 1}" for l, r in sorted(edits.deletions)]
    out += [f"+ {l + 1} {r + 1}" for l, r in sorted(edits.insertions)]
    if graph is not None:
        for cid, members in enumerate(clusters_of(apply_edits(graph, edits)), 1):
            out.append(f"b {cid} " + " ".join(str(v) for v in members))
    return "\n".join(out) + "\n"


def write_solution(result, graph: BipartiteGraph | None = None) -> str:
    """Text for a ``SolveResult``; cluster lines need the original ``graph``."""
    return format_solution(result.decision, result.cost, result.witness, graph)


def _vertex(tok: str, lineno: int) -> VertexRef:
    if len(tok) < 2 or tok[0] not in "lr" or not tok[1:].isdigit() or int(tok[1:]) < 1:
        raise ParseError(lineno, f"bad vertex token {tok!r}")
    return VertexRef(Side.LEFT if tok[0] == "l" else Side.RIGHT, int(tok[1:]) - 1)


def parse_solution(text: str) -> Solution:
    status = None
    ins: list[tuple[int, int]] = []
    dels: list[tuple[int, int]] = []
    clusters = []
    for lineno, tok in _lines(text):
        kind = tok[0]
        if kind == "s":
            if status is not None:
                raise ParseError(lineno, "second status line")
            if tok[1:] == ["NO"]:
                status = (False, None)
            elif len(tok) == 3 and tok[1] == "YES":
                status = (True, _ints(tok[2:], lineno)[0])
            else:
                raise ParseError(lineno, "status must read 's YES <cost>' or 's NO'")
        elif kind in "+-":
            if status is None:
                raise ParseError(lineno, "edit before status line")
            if len(tok) != 3:
                raise ParseError(lineno, "edit line must read '+|- <left> <right>'")
            l, r = _ints(tok[1:], lineno)
            if l < 1 or r < 1:
                raise ParseError(lineno, "indices are 1-based")
            (ins if kind == "+" else dels).append((l - 1, r - 1))
        elif kind == "b":
            if len(tok) < 2:
                raise ParseError(lineno, "cluster line needs an id")
            clusters.append((_ints(tok[1:2], lineno)[0], [_vertex(t, lineno) for t in tok[2:]]))
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if status is None:
        raise ParseError(None, "missing status line")
    if len(set(ins)) != len(ins) or len(set(dels)) != len(dels):
        raise ParseError(None, "repeated edit line")
    try:
        edits = EditSet(frozenset(ins), frozenset(dels))
    except ValueError as exc:
        raise ParseError(None, str(exc)) from None
    return Solution(status[0], status[1], edits, clusters)
