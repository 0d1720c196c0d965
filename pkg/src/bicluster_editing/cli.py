"""Command-line front end (``bce``).

Exit codes: 0 for YES / OK, 1 for a NO decision, 2 for errors and failed
verification.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .branching import BranchingVector, branching_factor, lrr_cd
from .formats import ParseError, format_solution, parse_graph, parse_solution, write_instance, write_solution
from .generators import gen_p6, gen_planted, gen_random, gen_tight
from .graph import GraphError
from .kernel import Instance, kernelize
from .oracle import OracleTooLarge, edits_of, oracle_opt
from .solver import SolveStats, solve_decision, solve_optimal
from .verify import verify

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _stats_text(stats: SolveStats) -> str:
    lines = [f"c nodes {stats.nodes}", f"c max_depth {stats.max_depth}"]
    lines += [f"c rule {name} {n}" for name, n in sorted(stats.rules.items())]
    return "\n".join(lines) + "\n"


def _budget(k: int) -> int:
    if k < 0:
        raise UsageError("budget must be non-negative")
    return k


def cmd_solve(args) -> int:
    g = parse_graph(_read(args.file))
    res = solve_decision(Instance(g, _budget(args.budget)))
    text = write_solution(res, g)
    if args.stats:
        text += _stats_text(res.stats)
    _emit(text, args.out)
    return EXIT_YES if res.decision else EXIT_NO


def cmd_optimal(args) -> int:
    g = parse_graph(_read(args.file))
    res = solve_optimal(g)
    text = write_solution(res, g)
    if args.stats:
        text += _stats_text(res.stats)
    _emit(text, args.out)
    return EXIT_YES


def cmd_kernelize(args) -> int:
    g = parse_graph(_read(args.file))
    kr = kernelize(Instance(g, _budget(args.budget)))
    trace = kr.trace.to_text()
    if args.trace_out:
        Path(args.trace_out).write_text(trace)
    comments = trace.splitlines()
    if kr.is_no:
        _emit("".join(f"c {c}\n" for c in comments) + "s NO\n", args.out)
        return EXIT_NO
    red = kr.instance
    _, lmap, rmap = red.graph.compact()
    comments.append(f"budget {red.budget}")
    comments.append(" ".join(["left"] + [str(i + 1) for i in lmap]))
    comments.append(" ".join(["right"] + [str(j + 1) for j in rmap]))
    _emit(write_instance(red.graph, comments), args.out)
    return EXIT_YES


def cmd_oracle(args) -> int:
    g = parse_graph(_read(args.file))
    c, b = oracle_opt(g)
    _emit(format_solution(True, c, edits_of(g, b), g), args.out)
    return EXIT_YES


def cmd_verify(args) -> int:
    g = parse_graph(_read(args.file))
    sol = parse_solution(_read(args.solution))
    rep = verify(g, sol, args.budget)
    sys.stdout.write(rep.to_text())
    return EXIT_YES if rep.ok else EXIT_ERROR


def cmd_gen(args) -> int:
    if args.family == "p6":
        text = gen_p6(args.copies)
    elif args.family == "tight":
        text = gen_tight(args.copies)
    elif args.family == "random":
        text = gen_random(args.left, args.right, args.p, args.seed)
    else:
        text = gen_planted(args.blocks, (args.left, args.right), args.noise, args.seed)
    _emit(text, args.out)
    return EXIT_YES


def cmd_analyze(args) -> int:
    if args.vector is not None:
        r = branching_factor(BranchingVector.parse(args.vector), args.tol)
    else:
        r = lrr_cd(args.cd[0], args.cd[1], args.tol)
    print(f"{r.value:.5f}")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bce", description="Exact bicluster editing toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide whether the budget suffices")
    s.add_argument("--budget", "-k", type=int, required=True)
    s.add_argument("file")
    s.add_argument("--stats", action="store_true", help="append search statistics as comments")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("optimal", help="minimum edit cost with a witness")
    s.add_argument("file")
    s.add_argument("--stats", action="store_true")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_optimal)

    s = sub.add_parser("kernelize", help="apply the reduction rules")
    s.add_argument("--budget", "-k", type=int, required=True)
    s.add_argument("file")
    s.add_argument("--trace-out")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_kernelize)

    s = sub.add_parser("oracle", help="brute-force optimum (small graphs only)")
    s.add_argument("file")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("verify", help="check a solution file against an instance")
    s.add_argument("file")
    s.add_argument("solution")
    s.add_argument("--budget", "-k", type=int)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="generate an instance")
    s.add_argument("family", choices=["p6", "tight", "random", "planted"])
    s.add_argument("--copies", type=int, default=1)
    s.add_argument("--left", type=int, default=4)
    s.add_argument("--right", type=int, default=4)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--blocks", type=int, default=2)
    s.add_argument("--noise", type=float, default=0.1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("analyze", help="branching factor of a vector or of lrr(c, d)")
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--vector", help="comma-separated entries, e.g. 1,2,3,3,4")
    grp.add_argument("--cd", type=int, nargs=2, metavar=("C", "D"))
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_YES if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (UsageError, ParseError, GraphError, OracleTooLarge, ValueError) as exc:
        print(f"bce: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


cli_dispatch = main
