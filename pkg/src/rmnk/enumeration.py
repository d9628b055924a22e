"""Exhaustive census of Pareto local optima and of the Pareto optimal set.

The search space ``{0,1}^n`` is walked by integer code (bit ``i`` of the code
is ``x[i]``) in contiguous ranges. Each range yields a PLO mask and a local
nondominated archive; archives merge associatively, so the result does not
depend on how the space is partitioned or on the worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .dominance import dominating_neighbors, nondominated_mask
from .errors import SpaceTooLarge
from .landscape import evaluate_ints

ENUMERATION_LIMIT = 24
CACHE_LIMIT = 20
_CHUNK_BITS = 16


@dataclass(frozen=True)
class PloSummary:
    n_plo: int
    n_pareto: int
    space_size: int
    plo_list: Optional[np.ndarray] = None
    pareto_list: Optional[np.ndarray] = None

    @property
    def plo_fraction(self):
        return self.n_plo / self.space_size


def is_pareto_local_optimum(inst, x):
    return len(dominating_neighbors(inst, x)) == 0


def _check_size(inst, limit):
    if limit is not None and inst.n > limit:
        raise SpaceTooLarge(f"n={inst.n} exceeds the enumeration limit of {limit}")


def objective_table(inst, limit=ENUMERATION_LIMIT):
    """All ``2**n`` objective vectors, row ``c`` for integer code ``c``."""
    _check_size(inst, limit)
    size = inst.space_size
    out = np.empty((size, inst.m))
    step = 1 << _CHUNK_BITS
    for lo in range(0, size, step):
        hi = min(size, lo + step)
        out[lo:hi] = evaluate_ints(inst, np.arange(lo, hi, dtype=np.int64))
    return out


@numba.njit(cache=True, nogil=True)
def _plo_mask_cached(table, n, lo, hi):
    m = table.shape[1]
    out = np.ones(hi - lo, dtype=np.bool_)
    for x in range(lo, hi):
        for j in range(n):
            y = x ^ (1 << j)
            worse = False
            better = False
            for t in range(m):
                if table[y, t] < table[x, t]:
                    worse = True
                    break
                if table[y, t] > table[x, t]:
                    better = True
            if better and not worse:
                out[x - lo] = False
                break
    return out


def _plo_mask_streaming(inst, codes, values):
    dominated = np.zeros(codes.size, dtype=bool)
    for j in range(inst.n):
        nb = evaluate_ints(inst, codes ^ (1 << j))
        dominated |= np.all(nb >= values, axis=1) & np.any(nb > values, axis=1)
    return ~dominated


def _scan_range(inst, lo, hi, table):
    codes = np.arange(lo, hi, dtype=np.int64)
    if table is not None:
        values = table[lo:hi]
        mask = _plo_mask_cached(table, inst.n, lo, hi)
    else:
        values = evaluate_ints(inst, codes)
        mask = _plo_mask_streaming(inst, codes, values)
    plo = codes[mask]
    front = nondominated_mask(values[mask])
    return plo, plo[front], values[mask][front]


def _merge_archives(parts):
    codes = np.concatenate([p[0] for p in parts])
    values = np.concatenate([p[1] for p in parts])
    keep = nondominated_mask(values)
    return codes[keep], values[keep]


def enumerate_plo(inst, keep_lists=False, threads=1, limit=ENUMERATION_LIMIT, cached=None):
    """Count Pareto local optima and Pareto optimal solutions by full enumeration.

    Parameters
    ----------
    inst : Instance
    keep_lists : bool
        Also return the sorted integer codes of both solution sets.
    threads : int
        Worker threads scanning disjoint code ranges.
    limit : int or None
        Refuse instances with ``n`` above this (``None`` disables the guard).
    cached : bool or None
        Materialise all ``2**n`` objective vectors first (default for
        ``n <= 20``); otherwise every neighbour is re-evaluated on the fly.
    """
    _check_size(inst, limit)
    if cached is None:
        cached = inst.n <= CACHE_LIMIT
    table = objective_table(inst, limit=None) if cached else None

    size = inst.space_size
    step = min(size, 1 << _CHUNK_BITS)
    bounds = [(lo, min(size, lo + step)) for lo in range(0, size, step)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda b: _scan_range(inst, b[0], b[1], table), bounds))
    else:
        parts = [_scan_range(inst, lo, hi, table) for lo, hi in bounds]

    n_plo = sum(p[0].size for p in parts)
    pareto, _ = _merge_archives([(p[1], p[2]) for p in parts])
    pareto = np.sort(pareto)
    if keep_lists:
        plo = np.concatenate([p[0] for p in parts])
        return PloSummary(n_plo, int(pareto.size), size, plo, pareto)
    return PloSummary(n_plo, int(pareto.size), size)


def enumerate_pareto_set(inst, threads=1, limit=ENUMERATION_LIMIT):
    """Sorted integer codes of every Pareto optimal solution."""
    return enumerate_plo(inst, keep_lists=True, threads=threads, limit=limit).pareto_list
