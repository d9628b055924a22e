"""Hand-built instances and brute-force oracles.

The oracles share nothing with the library beyond the Instance container:
they rebuild every objective vector with explicit Python loops over bit
strings and compare vectors with their own dominance test.
"""

import itertools

import numpy as np

from rmnk.landscape import Instance


def make_instance(links, tables, rho=0.0, seed=0):
    links = np.asarray(links, dtype=np.int64)
    tables = np.asarray(tables, dtype=float)
    n = tables.shape[0]
    k = links.shape[1] if links.size else 0
    return Instance(n, k, tables.shape[2], rho, seed, links.reshape(n, k), tables)


def full_table_instance(values):
    """n=3, k=2 instance whose objective vector at x is ``values[x-string]``.

    Every component sees all three bits and stores the target vector, so the
    mean of the three lookups is the target (up to rounding that is the same
    for equal targets).
    """
    links = [[1, 2], [0, 2], [0, 1]]
    m = len(next(iter(values.values())))
    tables = np.zeros((3, 8, m))
    for bits, vec in values.items():
        x = [int(c) for c in bits]
        for i in range(3):
            row = (x[i] << 2) | (x[links[i][0]] << 1) | x[links[i][1]]
            tables[i, row] = vec
    return make_instance(links, tables)


# objective vectors of a 3-bit, 2-objective instance; PLO and Pareto set
# worked out by hand from the neighbour lists
HAND_VALUES = {
    "000": (0.2, 0.2),
    "100": (0.3, 0.1),
    "010": (0.1, 0.3),
    "001": (0.25, 0.25),
    "110": (0.4, 0.4),
    "101": (0.2, 0.3),
    "011": (0.3, 0.2),
    "111": (0.1, 0.1),
}
HAND_PLO = {"001", "110", "101", "011"}
HAND_PARETO = {"110"}

# both objectives equal: from 000 the only improving flip is bit 0, then bit 1
CHAIN_VALUES = {
    "000": (0.1, 0.1),
    "100": (0.2, 0.2),
    "010": (0.05, 0.05),
    "001": (0.05, 0.05),
    "110": (0.3, 0.3),
    "101": (0.1, 0.1),
    "011": (0.0, 0.0),
    "111": (0.2, 0.2),
}


def code_to_bits(code, n):
    return [(code >> i) & 1 for i in range(n)]


def oracle_objectives(inst):
    """Dict code -> tuple of objectives, by explicit loops."""
    n, k, m = inst.n, inst.k, inst.m
    out = {}
    for code in range(2**n):
        x = code_to_bits(code, n)
        acc = [0.0] * m
        for i in range(n):
            bits = [x[i]] + [x[int(j)] for j in inst.links[i]]
            row = 0
            for b in bits:
                row = 2 * row + b
            for t in range(m):
                acc[t] += float(inst.tables[i, row, t])
        out[code] = tuple(a / n for a in acc)
    return out


def oracle_dominates(a, b):
    ge = all(p >= q for p, q in zip(a, b))
    gt = any(p > q for p, q in zip(a, b))
    return ge and gt


def oracle_plo(inst, values=None):
    values = values or oracle_objectives(inst)
    plo = set()
    for code, v in values.items():
        if not any(oracle_dominates(values[code ^ (1 << j)], v) for j in range(inst.n)):
            plo.add(code)
    return plo


def oracle_pareto(inst, values=None):
    """Quadratic all-pairs filter over the whole space."""
    values = values or oracle_objectives(inst)
    codes = sorted(values)
    f = np.array([values[c] for c in codes])
    ge = np.all(f[:, None, :] >= f[None, :, :], axis=2)
    gt = np.any(f[:, None, :] > f[None, :, :], axis=2)
    dominated = np.any(ge & gt, axis=0)
    return {c for c, d in zip(codes, dominated) if not d}


def pairwise_filter(vectors):
    """Indices of rows no other row dominates, by a double loop."""
    keep = []
    for i, v in enumerate(vectors):
        if not any(oracle_dominates(w, v) for j, w in enumerate(vectors) if j != i):
            keep.append(i)
    return keep


def all_bitstrings(n):
    return ["".join(p) for p in itertools.product("01", repeat=n)]
