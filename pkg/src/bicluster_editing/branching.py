"""Branching-vector arithmetic.

A branching vector ``(b_1, ..., b_t)`` has as its factor the unique positive
root of ``1 - sum(a ** -b_i)``, which is the largest real root of the
characteristic polynomial ``x^k - sum(x^(k - b_i))``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class BranchingVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(b) for b in self.entries)
        if not entries:
            raise ValueError("a branching vector needs at least one entry")
        if min(entries) < 1:
            raise ValueError("branching vector entries must be positive")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int) -> "BranchingVector":
        return cls(tuple(entries))

    @classmethod
    def parse(cls, text: str) -> "BranchingVector":
        try:
            return cls(tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok))
        except ValueError as exc:
            raise ValueError(f"bad branching vector {text!r}: {exc}") from None

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "BranchingVector":
        return cls(tuple(b for b in sorted(counts) for _ in range(counts[b])))

    def counts(self) -> Counter:
        return Counter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))


@dataclass(frozen=True)
class RootResult:
    value: float
    tolerance: float


def _excess(a: float, weighted: Iterable[tuple[int, float]]) -> float:
    """1 - sum(w * a**-b), with the powers taken in log space."""
    la = math.log(a)
    return 1.0 - sum(math.exp(math.log(w) - b * la) for b, w in weighted)


def _bisect(weighted: list[tuple[int, float]], lo: float, hi: float, tol: float) -> RootResult:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if _excess(lo, weighted) >= 0:
        return RootResult(lo, tol)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _excess(mid, weighted) < 0:
            lo = mid
        else:
            hi = mid
    return RootResult(0.5 * (lo + hi), tol)


def branching_factor(vector: BranchingVector | Iterable[int], tol: float = DEFAULT_TOL) -> RootResult:
    if not isinstance(vector, BranchingVector):
        vector = BranchingVector(tuple(vector))
    weighted = [(b, float(c)) for b, c in sorted(vector.counts().items())]
    # g(1) = 1 - t <= 0 and g(t + 1) > 0, so the root is bracketed
    return _bisect(weighted, 1.0, len(vector) + 1.0, tol)


def lrr_cd(c: int, d: int, tol: float = DEFAULT_TOL) -> RootResult:
    """Factor of 2^c branches decrementing by c plus 2^d decrementing by d."""
    if c < 1 or d < 1:
        raise ValueError("c and d must be at least 1")
    if c > 30 or d > 30:
        raise ValueError("c and d above 30 are not supported")
    weighted = [(c, float(2 ** (c + 1)))] if c == d else [(c, float(2**c)), (d, float(2**d))]
    return _bisect(weighted, 1.0, 2.0**c + 2.0**d + 1.0, tol)


def lrr_vector(c: int, d: int) -> BranchingVector:
    return BranchingVector.from_counts(Counter({c: 2**c}) + Counter({d: 2**d}))


def is_better(b: BranchingVector | Iterable[int], b_prime: BranchingVector | Iterable[int]) -> bool:
    """True iff every entry of ``b`` can be matched to a distinct entry of
    ``b_prime`` that is no larger, so ``b`` branches no worse than ``b_prime``.

    Matching the i-th smallest of ``b`` to the i-th smallest of ``b_prime``
    is optimal.
    """
    xs = sorted(b.entries if isinstance(b, BranchingVector) else b)
    ys = sorted(b_prime.entries if isinstance(b_prime, BranchingVector) else b_prime)
    if len(xs) > len(ys):
        return False
    return all(x >= y for x, y in zip(xs, ys))


def compose(outer: BranchingVector, replacements: Mapping[int, BranchingVector]) -> BranchingVector:
    """Expand entry ``i`` of ``outer`` into ``outer[i] + s`` for each ``s`` of its replacement."""
    for pos in replacements:
        if not 0 <= pos < len(outer):
            raise IndexError(f"replacement position {pos} out of range")
    out: list[int] = []
    for i, e in enumerate(outer.entries):
        sub = replacements.get(i)
        if sub is None:
            out.append(e)
        else:
            out.extend(e + s for s in sub.entries)
    return BranchingVector(tuple(out))


def excess(vector: BranchingVector, a: float) -> float:
    """``1 - sum(a**-b_i)``; negative below the factor, positive above it."""
    return _excess(a, [(b, float(c)) for b, c in vector.counts().items()])
