"""Hot loop of the exact oracle, in a numba and a pure-numpy flavour.

Both scan every biclustering in the same order: set partitions of the left
side as restricted growth strings (lexicographic), and for each partition
every assignment of right vertices to a block or to ``n_blocks`` (the
"unattached" choice), lexicographic with right vertex 0 most significant.
The first minimum wins, so both return the same witness.

Adjacency is packed into ``uint64`` masks, so each side holds at most 64
vertices (far beyond what an exhaustive scan can reach anyway).
"""

from __future__ import annotations

import itertools

import numpy as np

from ._accel import USE_NUMBA, njit

MODE_TWINS = 1
MODE_DELMAX = 2

_NO_COST = np.iinfo(np.int64).max


@njit
def _popcount(x):
    x = np.uint64(x)
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit
def _scan_nb(n, m, ladj, radj, mode, lrep, rrep):
    best = np.int64(0x7FFFFFFFFFFFFFFF)
    best_rgs = np.zeros(n, np.int64)
    best_asg = np.zeros(m, np.int64)
    states = np.int64(0)
    rgs = np.zeros(n, np.int64)
    pmax = np.zeros(n, np.int64)  # max of rgs[0..i-1]
    bm = np.zeros(n + 1, np.uint64)
    asg = np.zeros(m, np.int64)
    tbl = np.zeros((m, n + 1), np.int64)
    tins = np.zeros((m, n + 1), np.int64)
    ldeg = np.zeros(n, np.int64)
    rdeg = np.zeros(m, np.int64)
    for i in range(n):
        ldeg[i] = _popcount(ladj[i])
    for r in range(m):
        rdeg[r] = _popcount(radj[r])
    twins = (mode & 1) != 0
    delmax = (mode & 2) != 0
    while True:
        nb = 0
        for i in range(n):
            if rgs[i] + 1 > nb:
                nb = rgs[i] + 1
        ok = True
        if twins:
            for i in range(n):
                if rgs[i] != rgs[lrep[i]]:
                    ok = False
        if ok:
            for b in range(nb):
                bm[b] = np.uint64(0)
            for i in range(n):
                bm[rgs[i]] |= np.uint64(1) << np.uint64(i)
            for r in range(m):
                for b in range(nb):
                    x = bm[b] ^ radj[r]
                    tbl[r, b] = _popcount(x)
                    tins[r, b] = _popcount(bm[b] & ~radj[r])
                tbl[r, nb] = rdeg[r]
                tins[r, nb] = 0
            for r in range(m):
                asg[r] = 0
            while True:
                states += 1
                good = True
                if twins:
                    for r in range(m):
                        if asg[r] != asg[rrep[r]]:
                            good = False
                            break
                if good and delmax:
                    for r in range(m):
                        e = tbl[r, asg[r]]
                        if e > rdeg[r] or (e == rdeg[r] and tins[r, asg[r]] > 0):
                            good = False
                            break
                    if good:
                        for i in range(n):
                            b = rgs[i]
                            row = np.uint64(0)
                            for r in range(m):
                                if asg[r] == b:
                                    row |= np.uint64(1) << np.uint64(r)
                            e = _popcount(row ^ ladj[i])
                            ins = _popcount(row & ~ladj[i])
                            if e > ldeg[i] or (e == ldeg[i] and ins > 0):
                                good = False
                                break
                if good:
                    c = np.int64(0)
                    for r in range(m):
                        c += tbl[r, asg[r]]
                    if c < best:
                        best = c
                        for i in range(n):
                            best_rgs[i] = rgs[i]
                        for r in range(m):
                            best_asg[r] = asg[r]
                # next assignment, last position fastest
                r = m - 1
                while r >= 0 and asg[r] == nb:
                    asg[r] = 0
                    r -= 1
                if r < 0:
                    break
                asg[r] += 1
        # next restricted growth string
        i = n - 1
        while i >= 1 and rgs[i] == pmax[i] + 1:
            i -= 1
        if i < 1:
            break
        rgs[i] += 1
        for j in range(i + 1, n):
            rgs[j] = 0
            pmax[j] = max(pmax[j - 1], rgs[j - 1])
    return best, best_rgs, best_asg, states


def restricted_growth_strings(n: int):
    """Set partitions of ``range(n)`` as block labels, lexicographic."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n
    while True:
        yield tuple(rgs)
        i = n - 1
        while i >= 1 and rgs[i] == max(rgs[:i]) + 1:
            i -= 1
        if i < 1:
            return
        rgs[i] += 1
        for j in range(i + 1, n):
            rgs[j] = 0


def _popcount_np(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def _scan_np(n, m, ladj, radj, mode, lrep, rrep):
    twins = bool(mode & MODE_TWINS)
    delmax = bool(mode & MODE_DELMAX)
    ldeg = _popcount_np(ladj)
    rdeg = _popcount_np(radj)
    best = _NO_COST
    best_rgs = np.zeros(n, np.int64)
    best_asg = np.zeros(m, np.int64)
    states = 0
    radj_u = radj.astype(np.uint64)
    for rgs in restricted_growth_strings(n):
        rgs_a = np.asarray(rgs, dtype=np.int64)
        nb = int(rgs_a.max()) + 1 if n else 0
        if twins and n and np.any(rgs_a != rgs_a[lrep]):
            continue
        bm = np.zeros(nb + 1, np.uint64)
        for i, b in enumerate(rgs):
            bm[b] |= np.uint64(1 << i)
        tbl = _popcount_np(bm[None, :] ^ radj_u[:, None])
        tins = _popcount_np(bm[None, :] & ~radj_u[:, None])
        tbl[:, nb] = rdeg
        tins[:, nb] = 0
        if m:
            asg = np.array(list(itertools.product(range(nb + 1), repeat=m)), dtype=np.int64)
        else:
            asg = np.zeros((1, 0), np.int64)
        states += asg.shape[0]
        rows = np.arange(m)
        keep = np.ones(asg.shape[0], bool)
        if twins and m:
            keep &= np.all(asg == asg[:, rrep], axis=1)
        if delmax and m:
            e = tbl[rows, asg]
            ins = tins[rows, asg]
            keep &= np.all((e < rdeg) | ((e == rdeg) & (ins == 0)), axis=1)
            bits = np.left_shift(np.uint64(1), np.arange(m, dtype=np.uint64))
            for i in range(n):
                row = np.bitwise_or.reduce(np.where(asg == rgs[i], bits, np.uint64(0)), axis=1)
                e = _popcount_np(row ^ np.uint64(ladj[i]))
                ins = _popcount_np(row & ~np.uint64(ladj[i]))
                keep &= (e < ldeg[i]) | ((e == ldeg[i]) & (ins == 0))
        if not keep.any():
            continue
        cost = tbl[rows, asg].sum(axis=1) if m else np.zeros(asg.shape[0], np.int64)
        cost = np.where(keep, cost, _NO_COST)
        k = int(np.argmin(cost))
        if cost[k] < best:
            best = int(cost[k])
            best_rgs = rgs_a.copy()
            best_asg = asg[k].copy()
    return best, best_rgs, best_asg, states


def scan_biclusterings(ladj, radj, mode=0, lrep=None, rrep=None, use_numba=None):
    """Minimum-cost biclustering scan.

    ``ladj``/``radj`` are the adjacency masks of the partitioned (left) and
    assigned (right) side.  ``lrep``/``rrep`` give, per vertex, the index of
    the representative of its twin class (only read under ``MODE_TWINS``).
    Returns ``(cost, rgs, assignment, states_scanned)``; cost is ``-1`` when
    no biclustering passes the filters.
    """
    ladj = np.asarray(ladj, dtype=np.uint64)
    radj = np.asarray(radj, dtype=np.uint64)
    n, m = ladj.shape[0], radj.shape[0]
    if n > 64 or m > 64:
        raise ValueError("bitmask kernels support at most 64 vertices per side")
    lrep = np.arange(n, dtype=np.int64) if lrep is None else np.asarray(lrep, dtype=np.int64)
    rrep = np.arange(m, dtype=np.int64) if rrep is None else np.asarray(rrep, dtype=np.int64)
    if use_numba is None:
        use_numba = USE_NUMBA
    fn = _scan_nb if use_numba else _scan_np
    best, rgs, asg, states = fn(n, m, ladj, radj, int(mode), lrep, rrep)
    best = int(best)
    if best == _NO_COST:
        best = -1
    return best, [int(x) for x in rgs], [int(x) for x in asg], int(states)
