"""Pareto dominance (maximisation) and the one-bit-flip neighbourhood."""

import enum

import numba
import numpy as np

from .errors import LengthMismatch
from .landscape import evaluate, evaluate_many


class Comparison(enum.Enum):
    FIRST_DOMINATES = "first"
    SECOND_DOMINATES = "second"
    INCOMPARABLE = "incomparable"
    EQUAL = "equal"

    def mirror(self):
        return _MIRROR[self]


_MIRROR = {
    Comparison.FIRST_DOMINATES: Comparison.SECOND_DOMINATES,
    Comparison.SECOND_DOMINATES: Comparison.FIRST_DOMINATES,
    Comparison.INCOMPARABLE: Comparison.INCOMPARABLE,
    Comparison.EQUAL: Comparison.EQUAL,
}


def _pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"cannot compare vectors of shapes {a.shape} and {b.shape}")
    return a, b


def dominates(a, b):
    """True iff ``a`` is at least as good as ``b`` everywhere and better somewhere."""
    a, b = _pair(a, b)
    return bool(np.all(a >= b) and np.any(a > b))


def compare(a, b):
    a, b = _pair(a, b)
    if np.array_equal(a, b):
        return Comparison.EQUAL
    if dominates(a, b):
        return Comparison.FIRST_DOMINATES
    if dominates(b, a):
        return Comparison.SECOND_DOMINATES
    return Comparison.INCOMPARABLE


@numba.njit(cache=True, nogil=True)
def _dominates_at(va, a, vb, b):
    better = False
    for t in range(va.shape[1]):
        if va[a, t] < vb[b, t]:
            return False
        if va[a, t] > vb[b, t]:
            better = True
    return better


@numba.njit(cache=True, nogil=True)
def _nondominated_kernel(f, sums, order):
    n, m = f.shape
    keep = np.zeros(n, dtype=np.bool_)
    # survivors are copied contiguously; indirect lookups into f thrash the cache
    vals = np.empty((n, m))
    ids = np.empty(n, dtype=np.int64)
    size = 0
    for idx in order:
        beaten = False
        for t in range(size):
            if _dominates_at(vals, t, f, idx):
                beaten = True
                break
        if beaten:
            continue
        # rows arrive by decreasing sum, so idx can only dominate survivors
        # with exactly its sum, which sit at the tail of the archive
        t = size - 1
        while t >= 0 and sums[ids[t]] == sums[idx]:
            if _dominates_at(f, idx, vals, t):
                keep[ids[t]] = False
                size -= 1
                for c in range(m):
                    vals[t, c] = vals[size, c]
                ids[t] = ids[size]
            t -= 1
        for c in range(m):
            vals[size, c] = f[idx, c]
        ids[size] = idx
        size += 1
        keep[idx] = True
    return keep


def nondominated_mask(values):
    """Boolean mask of the rows of ``values`` (shape ``(n, m)``) no other row dominates.

    Rows are visited by decreasing objective sum, so a dominating row is always
    seen before the rows it dominates and each row is compared only against
    the current archive of survivors. Equal rows do not dominate each other
    and are all kept.
    """
    f = np.ascontiguousarray(values, dtype=np.float64)
    if f.ndim != 2:
        raise ValueError("values must be a 2-d array")
    if f.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    sums = f.sum(axis=1)
    order = np.argsort(-sums, kind="stable")
    return _nondominated_kernel(f, sums, order)


def nondominated_filter(entries):
    """Keep the ``(solution, objectives)`` pairs whose objectives nobody dominates.

    Survivors keep their input order.
    """
    entries = list(entries)
    if not entries:
        return []
    mask = nondominated_mask(np.array([np.asarray(v, dtype=float) for _, v in entries]))
    return [e for e, keep in zip(entries, mask) if keep]


def neighbors(x):
    """The ``n`` one-bit flips of ``x`` in bit-index order, as an ``(n, n)`` array."""
    x = np.asarray(x, dtype=np.uint8)
    return x[None, :] ^ np.eye(x.size, dtype=np.uint8)


def dominating_neighbors(inst, x):
    """Neighbours of ``x`` whose objective vector dominates that of ``x``."""
    fx = evaluate(inst, x)
    nbs = neighbors(x)
    fn = evaluate_many(inst, nbs)
    better = np.all(fn >= fx, axis=1) & np.any(fn > fx, axis=1)
    return list(nbs[better])
