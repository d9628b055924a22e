"""Pareto hill-climbing and adaptive-walk campaigns.

A walk starts from a uniform random solution. While some one-bit flip
dominates the current point, it moves to one of the dominating flips chosen
uniformly at random. The number of moves is the walk length. Objective
changes are evaluated incrementally from the lookups a flip touches
(``Instance.flip_effects``), so a step costs ``O(n (k + 1) m)`` at any ``n``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from . import seeding
from .landscape import evaluate, random_solution

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkRecord:
    start: np.ndarray
    final: np.ndarray
    steps: int
    final_objectives: np.ndarray
    # bit flipped at each accepted move, when requested
    flips: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class WalkStats:
    n_walks: int
    mean_length: float
    sd_length: float
    lengths: Optional[np.ndarray] = None

    def __eq__(self, other):
        if not isinstance(other, WalkStats):
            return NotImplemented
        same_lengths = (self.lengths is None and other.lengths is None) or (
            self.lengths is not None and other.lengths is not None
            and np.array_equal(self.lengths, other.lengths)
        )
        return (self.n_walks, self.mean_length, self.sd_length) == (
            other.n_walks, other.mean_length, other.sd_length) and same_lengths


@numba.njit(cache=True, nogil=True)
def _patterns(links, x, k):
    n = x.shape[0]
    pattern = np.empty(n, dtype=np.int64)
    for i in range(n):
        row = np.int64(x[i]) << k
        for p in range(k):
            row |= np.int64(x[links[i, p]]) << (k - 1 - p)
        pattern[i] = row
    return pattern


@numba.njit(cache=True, nogil=True)
def _climb(tables, links, ptr, comp, mask, x, rng, trace):
    """Advance the walk in ``x`` in place for at most ``trace.size`` moves.

    Returns ``(moves, at_optimum)``; ``trace[:moves]`` holds the flipped bits.
    """
    n = x.shape[0]
    k = links.shape[1]
    m = tables.shape[2]
    pattern = _patterns(links, x, k)
    cand = np.empty(n, dtype=np.int64)
    delta = np.empty(m)
    moves = 0
    while True:
        cnt = 0
        for j in range(n):
            delta[:] = 0.0
            for t in range(ptr[j], ptr[j + 1]):
                i = comp[t]
                old = pattern[i]
                new = old ^ mask[t]
                for c in range(m):
                    delta[c] += tables[i, new, c] - tables[i, old, c]
            worse = False
            better = False
            for c in range(m):
                if delta[c] < 0.0:
                    worse = True
                    break
                if delta[c] > 0.0:
                    better = True
            if better and not worse:
                cand[cnt] = j
                cnt += 1
        if cnt == 0:
            return moves, True
        if moves == trace.shape[0]:
            return moves, False
        j = cand[rng.integers(0, cnt)]
        for t in range(ptr[j], ptr[j + 1]):
            pattern[comp[t]] ^= mask[t]
        x[j] ^= 1
        trace[moves] = j
        moves += 1


def _run(inst, start, rng, keep_flips):
    ptr, comp, mask = inst.flip_effects
    x = np.array(start, dtype=np.uint8)
    buf = np.empty(4 * inst.n + 64, dtype=np.int64)
    flips = []
    steps = 0
    while True:
        moves, done = _climb(inst.tables, inst.links, ptr, comp, mask, x, rng, buf)
        steps += moves
        if keep_flips:
            flips.append(buf[:moves].copy())
        if done:
            break
        # every move strictly raises the objective sum, so no point repeats
        if inst.n < 63 and steps > (1 << inst.n):
            raise RuntimeError("walk exceeded 2**n moves")
    trace = np.concatenate(flips) if keep_flips else None
    return x, steps, trace


def phc_walk(inst, start, rng, keep_flips=False):
    """One Pareto hill-climbing run from ``start``; returns a :class:`WalkRecord`."""
    start = np.asarray(start, dtype=np.uint8)
    if start.shape != (inst.n,):
        raise ValueError(f"start has shape {start.shape}, instance needs ({inst.n},)")
    final, steps, trace = _run(inst, start, rng, keep_flips)
    return WalkRecord(start.copy(), final, steps, evaluate(inst, final), trace)


def _walk_length(inst, master_seed, index):
    rng = seeding.substream(master_seed, index)
    start = random_solution(inst.n, rng)
    return _run(inst, start, rng, False)[1]


def walk_lengths(inst, n_walks, master_seed, threads=1):
    """Lengths of ``n_walks`` walks; walk ``i`` uses stream ``(master_seed, i)``."""
    indices = range(n_walks)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            out = list(pool.map(lambda i: _walk_length(inst, master_seed, i), indices))
    else:
        out = [_walk_length(inst, master_seed, i) for i in indices]
    return np.array(out, dtype=np.int64)


def walk_campaign(inst, n_walks, master_seed, threads=1, keep_lengths=False):
    """Run independent walks from uniform random starts and summarise their lengths.

    ``sd_length`` is the sample standard deviation (0 for a single walk).
    """
    if n_walks < 1:
        raise ValueError("n_walks must be at least 1")
    lengths = walk_lengths(inst, n_walks, master_seed, threads)
    longest = int(lengths.max())
    if longest > inst.n * inst.m:
        log.warning("walk of length %d exceeds n*m=%d", longest, inst.n * inst.m)
    sd = float(lengths.std(ddof=1)) if n_walks > 1 else 0.0
    return WalkStats(n_walks, float(lengths.mean()), sd, lengths if keep_lengths else None)


def estimate_log_plo(mean_length, fit):
    """Natural-log PLO count predicted from a mean walk length.

    ``fit`` is a lin-log regression of PLO count on mean walk length. It only
    holds for the bit-string length it was fitted on.
    """
    return fit.a * mean_length + fit.b


def estimate_plo(mean_length, fit):
    return math.exp(estimate_log_plo(mean_length, fit))
