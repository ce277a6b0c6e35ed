"""Robustness-value kernel with a numba path and a pure-numpy fallback.

Set ``SUPERMATCH_DISABLE_NUMBA=1`` (or run without numba installed) to use
the numpy implementation. Both compute the same integer.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

_DISABLED = os.environ.get("SUPERMATCH_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


@dataclass(frozen=True)
class KernelTables:
    n: int
    size: int
    chain_ptr: np.ndarray  # int64[n + 1]; chain_ids[chain_ptr[i]:chain_ptr[i+1]] = man i's rotations
    chain_ids: np.ndarray  # int64
    succ_incl: np.ndarray  # bool[V, V]; row p = {p} | trans_succs(p)
    pred_incl: np.ndarray  # bool[V, V]; row e = {e} | trans_preds(e)
    men_ptr: np.ndarray  # int64[V + 1]
    men_ids: np.ndarray  # int64
    rot_men: np.ndarray  # int32[V, n] incidence
    nonfixed: np.ndarray  # int64, men with a non-empty chain

    @classmethod
    def from_poset(cls, poset) -> "KernelTables":
        n, size = poset.n, poset.size
        lengths = [len(c) for c in poset.rotations_of_man]
        chain_ptr = np.zeros(n + 1, dtype=np.int64)
        chain_ptr[1:] = np.cumsum(lengths)
        chain_ids = np.array([r for c in poset.rotations_of_man for r in c], dtype=np.int64)
        succ = np.eye(size, dtype=bool)
        pred = np.eye(size, dtype=bool)
        for r in range(size):
            for s in _bits(poset.trans_succs[r]):
                succ[r, s] = True
                pred[s, r] = True
        men_lists = [rho.men for rho in poset.rotations]
        men_ptr = np.zeros(size + 1, dtype=np.int64)
        men_ptr[1:] = np.cumsum([len(x) for x in men_lists])
        men_ids = np.array([m for x in men_lists for m in x], dtype=np.int64)
        rot_men = np.zeros((size, n), dtype=np.int32)
        for r, men in enumerate(men_lists):
            rot_men[r, list(men)] = 1
        nonfixed = np.flatnonzero(np.array(lengths, dtype=np.int64) > 0).astype(np.int64)
        return cls(n, size, chain_ptr, chain_ids, succ, pred, men_ptr, men_ids, rot_men, nonfixed)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_to_array(mask: int, size: int) -> np.ndarray:
    """Bitmask over rotation ids -> bool membership vector of length ``size``."""
    if size == 0:
        return np.zeros(0, dtype=bool)
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def _b_python_loops(in_s, chain_ptr, chain_ids, succ_incl, pred_incl, men_ptr, men_ids, n):
    size = in_s.shape[0]
    mark = np.zeros(n, dtype=np.int64)
    stamp = 0
    worst = 0
    for i in range(n):
        lo = chain_ptr[i]
        hi = chain_ptr[i + 1]
        if lo == hi:
            continue
        k = lo
        while k < hi and in_s[chain_ids[k]]:
            k += 1
        best = n + 1
        if k > lo:
            p = chain_ids[k - 1]
            stamp += 1
            cnt = 0
            for r in range(p, size):
                if in_s[r] and succ_incl[p, r]:
                    for t in range(men_ptr[r], men_ptr[r + 1]):
                        man = men_ids[t]
                        if mark[man] != stamp:
                            mark[man] = stamp
                            cnt += 1
            best = cnt
        if k < hi:
            e = chain_ids[k]
            stamp += 1
            cnt = 0
            for r in range(0, e + 1):
                if not in_s[r] and pred_incl[e, r]:
                    for t in range(men_ptr[r], men_ptr[r + 1]):
                        man = men_ids[t]
                        if mark[man] != stamp:
                            mark[man] = stamp
                            cnt += 1
            if cnt < best:
                best = cnt
        if best - 1 > worst:
            worst = best - 1
    return worst


def _b_batch_loops(in_s_rows, chain_ptr, chain_ids, succ_incl, pred_incl, men_ptr, men_ids, n):
    out = np.empty(in_s_rows.shape[0], dtype=np.int64)
    for q in range(in_s_rows.shape[0]):
        out[q] = _b_one(in_s_rows[q], chain_ptr, chain_ids, succ_incl, pred_incl, men_ptr, men_ids, n)
    return out


if HAVE_NUMBA:
    _b_one = njit(cache=True, nogil=True)(_b_python_loops)
    _b_batch = njit(cache=True, nogil=True)(_b_batch_loops)
else:
    _b_one = _b_python_loops
    _b_batch = None


def _b_numpy(t: KernelTables, in_s: np.ndarray) -> int:
    if t.nonfixed.size == 0:
        return 0
    starts = t.chain_ptr[t.nonfixed]
    ends = t.chain_ptr[t.nonfixed + 1]
    k = np.add.reduceat(in_s[t.chain_ids].astype(np.int64), starts)
    best = np.full(t.nonfixed.size, t.n + 1, dtype=np.int64)

    up = k > 0
    if up.any():
        p = t.chain_ids[starts[up] + k[up] - 1]
        removed = t.succ_incl[p] & in_s
        best[up] = ((removed.astype(np.int32) @ t.rot_men) > 0).sum(axis=1)
    down = starts + k < ends
    if down.any():
        e = t.chain_ids[starts[down] + k[down]]
        added = t.pred_incl[e] & ~in_s
        d_down = ((added.astype(np.int32) @ t.rot_men) > 0).sum(axis=1)
        best[down] = np.minimum(best[down], d_down)
    return int(best.max()) - 1


def robustness_b(t: KernelTables, in_s: np.ndarray, backend: str | None = None) -> int:
    """Robustness value b of the closed subset given as a membership vector."""
    backend = backend or BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        return int(_b_one(in_s, t.chain_ptr, t.chain_ids, t.succ_incl, t.pred_incl, t.men_ptr, t.men_ids, t.n))
    if backend == "numpy":
        return _b_numpy(t, in_s)
    raise ValueError(f"unknown backend {backend!r}")


def robustness_b_many(t: KernelTables, rows: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Vector of b values, one per row of a bool ``(k, V)`` membership matrix."""
    backend = backend or BACKEND
    if backend == "numba" and HAVE_NUMBA:
        return _b_batch(rows, t.chain_ptr, t.chain_ids, t.succ_incl, t.pred_incl, t.men_ptr, t.men_ids, t.n)
    return np.array([robustness_b(t, row, backend) for row in rows], dtype=np.int64)
