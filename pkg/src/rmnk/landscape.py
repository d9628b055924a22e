"""rho-MNK landscape instances: generation, evaluation and the text file format.

A solution is a length-N ``uint8`` array of 0/1 values. When an integer
encoding is needed (N <= 62), bit ``i`` of the integer holds ``x[i]``.

Component table layout: ``tables[i, row, m]`` is the contribution of bit
``i`` to objective ``m`` when the pattern ``(x[i], x[links[i, 0]], ...,
x[links[i, K-1]])`` read as a binary number with ``x[i]`` as the most
significant bit equals ``row``.
"""

import io
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import seeding
from .correlated import CorrelationMatrix, build_sampler, validate_rho
from .errors import FormatError, InvalidK, LengthMismatch, RMNKError, VersionError

FORMAT_HEADER = "rmnk-format"
FORMAT_VERSION = 1
MAX_INT_BITS = 62


@dataclass(frozen=True, eq=False)
class Instance:
    n: int
    k: int
    m: int
    rho: float
    seed: int
    links: np.ndarray
    tables: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 <= self.k <= self.n - 1:
            raise InvalidK(f"k={self.k} must lie in [0, n-1] = [0, {self.n - 1}]")
        validate_rho(self.m, self.rho)
        if self.links.shape != (self.n, self.k):
            raise ValueError(f"links shape {self.links.shape} != {(self.n, self.k)}")
        rows = 1 << (self.k + 1)
        if self.tables.shape != (self.n, rows, self.m):
            raise ValueError(f"tables shape {self.tables.shape} != {(self.n, rows, self.m)}")
        self.links.setflags(write=False)
        self.tables.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            (self.n, self.k, self.m, self.rho, self.seed)
            == (other.n, other.k, other.m, other.rho, other.seed)
            and np.array_equal(self.links, other.links)
            and np.array_equal(self.tables, other.tables)
        )

    __hash__ = None

    @property
    def space_size(self):
        return 1 << self.n

    @cached_property
    def flip_effects(self):
        """Which table lookups change when one bit flips.

        Returns ``(ptr, comp, mask)`` in CSR form: flipping bit ``j`` changes
        the pattern of component ``comp[t]`` by XOR with ``mask[t]`` for
        ``t`` in ``range(ptr[j], ptr[j + 1])``.
        """
        per_bit = [[(j, 1 << self.k)] for j in range(self.n)]
        for i in range(self.n):
            for p, j in enumerate(self.links[i]):
                per_bit[j].append((i, 1 << (self.k - 1 - p)))
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(e) for e in per_bit])
        comp = np.array([i for e in per_bit for i, _ in e], dtype=np.int64)
        mask = np.array([mk for e in per_bit for _, mk in e], dtype=np.int64)
        return ptr, comp, mask


def generate_instance(n, k, m, rho, seed):
    """Draw a rho-MNK instance; fully determined by the five arguments.

    Links and tables come from separate substreams of ``seed``. Each bit gets
    ``k`` distinct random partners (never itself), shared by all objectives.
    The ``n * 2**(k+1)`` table rows are drawn in increasing ``(bit, row)``
    order from the copula sampler.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= k <= n - 1:
        raise InvalidK(f"k={k} must lie in [0, n-1] = [0, {n - 1}]")
    sampler = build_sampler(CorrelationMatrix(m, rho))

    link_rng = seeding.substream(seed, seeding.LINKS)
    links = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        others = np.delete(np.arange(n), i)
        links[i] = link_rng.choice(others, size=k, replace=False, shuffle=True)

    rows = 1 << (k + 1)
    table_rng = seeding.substream(seed, seeding.TABLES)
    tables = sampler.draw_many(table_rng, n * rows).reshape(n, rows, m)
    return Instance(n, k, m, float(rho), int(seed), links, tables)


def _accumulate(inst, bit):
    # bit(j) -> 0/1 int array of variable j over the batch; sums in bit order
    total = None
    for i in range(inst.n):
        row = bit(i) << inst.k
        for p in range(inst.k):
            row = row | (bit(inst.links[i, p]) << (inst.k - 1 - p))
        term = inst.tables[i, row]
        total = term.copy() if total is None else total + term
    return total / inst.n


def evaluate(inst, x):
    """Objective vector of one solution, shape ``(m,)``."""
    x = np.asarray(x)
    if x.shape != (inst.n,):
        raise LengthMismatch(f"solution has shape {x.shape}, instance needs ({inst.n},)")
    return evaluate_many(inst, x[None, :])[0]


def evaluate_many(inst, xs):
    """Objective vectors of a batch of solutions ``(s, n)`` -> ``(s, m)``."""
    xs = np.asarray(xs)
    if xs.ndim != 2 or xs.shape[1] != inst.n:
        raise LengthMismatch(f"batch has shape {xs.shape}, instance needs (*, {inst.n})")
    xs = xs.astype(np.int64)
    return _accumulate(inst, lambda j: xs[:, j])


def evaluate_ints(inst, codes):
    """Objective vectors for integer-encoded solutions (requires n <= 62)."""
    if inst.n > MAX_INT_BITS:
        raise ValueError(f"integer encoding needs n <= {MAX_INT_BITS}")
    codes = np.asarray(codes, dtype=np.int64)
    return _accumulate(inst, lambda j: (codes >> j) & 1)


def random_solution(n, rng):
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def to_int(x):
    x = np.asarray(x, dtype=np.int64)
    if x.size > MAX_INT_BITS:
        raise ValueError(f"integer encoding needs n <= {MAX_INT_BITS}")
    return int(np.sum(x << np.arange(x.size, dtype=np.int64)))


def from_int(code, n):
    return ((int(code) >> np.arange(n)) & 1).astype(np.uint8)


def from_string(bits):
    """``"100"`` -> ``array([1, 0, 0])``; index 0 is the leftmost character."""
    return np.array([int(c) for c in bits.strip()], dtype=np.uint8)


def to_string(x):
    return "".join(str(int(b)) for b in x)


def _format_float(v):
    return format(float(v), ".17g")


def write_instance(inst, sink):
    """Write ``inst`` in the versioned text format to a path or text stream."""
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            write_instance(inst, fh)
        return
    sink.write(f"{FORMAT_HEADER} {FORMAT_VERSION}\n")
    sink.write(f"{inst.n} {inst.k} {inst.m} {repr(float(inst.rho))} {int(inst.seed)}\n")
    for i in range(inst.n):
        sink.write(" ".join(["link", str(i)] + [str(int(j)) for j in inst.links[i]]) + "\n")
    for i in range(inst.n):
        for row in range(inst.tables.shape[1]):
            vals = " ".join(_format_float(v) for v in inst.tables[i, row])
            sink.write(f"y {i} {row} {vals}\n")


def dumps_instance(inst):
    buf = io.StringIO()
    write_instance(inst, buf)
    return buf.getvalue()


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected integer {what}, got {tok!r}", lineno) from None


def _float(tok, lineno, what):
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"expected real {what}, got {tok!r}", lineno) from None


def read_instance(source):
    """Parse an instance from a path or text stream, validating every invariant."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return read_instance(fh)
    lines = iter(enumerate(source, start=1))

    def next_line(what):
        for lineno, raw in lines:
            return lineno, raw.split()
        raise FormatError(f"unexpected end of file while reading {what}")

    lineno, toks = next_line("header")
    if len(toks) != 2 or toks[0] != FORMAT_HEADER:
        raise FormatError(f"missing '{FORMAT_HEADER} <version>' header", lineno)
    if _int(toks[1], lineno, "version") != FORMAT_VERSION:
        raise VersionError(f"unsupported format version {toks[1]}", lineno)

    lineno, toks = next_line("parameters")
    if len(toks) != 5:
        raise FormatError("expected 'N K M RHO SEED'", lineno)
    n = _int(toks[0], lineno, "N")
    k = _int(toks[1], lineno, "K")
    m = _int(toks[2], lineno, "M")
    rho = _float(toks[3], lineno, "RHO")
    seed = _int(toks[4], lineno, "SEED")
    if n < 1:
        raise FormatError(f"N={n} must be positive", lineno)
    if not 0 <= k <= n - 1:
        raise FormatError(f"K={k} must lie in [0, N-1]", lineno)
    if not 0 <= seed < 2**64:
        raise FormatError(f"SEED={seed} is not an unsigned 64-bit integer", lineno)
    try:
        validate_rho(m, rho)
    except (RMNKError, ValueError) as exc:
        raise FormatError(str(exc), lineno) from None

    links = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        lineno, toks = next_line(f"links of bit {i}")
        if len(toks) != k + 2 or toks[0] != "link" or _int(toks[1], lineno, "bit") != i:
            raise FormatError(f"expected 'link {i}' followed by {k} indices", lineno)
        row = [_int(t, lineno, "link") for t in toks[2:]]
        if len(set(row)) != k or any(j == i or not 0 <= j < n for j in row):
            raise FormatError(f"links of bit {i} must be {k} distinct indices in [0, N) other than {i}", lineno)
        links[i] = row

    rows = 1 << (k + 1)
    tables = np.empty((n, rows, m))
    for i in range(n):
        for r in range(rows):
            lineno, toks = next_line(f"table row ({i}, {r})")
            if len(toks) != m + 3 or toks[0] != "y":
                raise FormatError(f"expected 'y {i} {r}' followed by {m} values", lineno)
            if (_int(toks[1], lineno, "bit"), _int(toks[2], lineno, "row")) != (i, r):
                raise FormatError(f"table rows out of order, expected ({i}, {r})", lineno)
            vals = [_float(t, lineno, "value") for t in toks[3:]]
            if not all(0.0 <= v < 1.0 for v in vals):
                raise FormatError("table values must lie in [0, 1)", lineno)
            tables[i, r] = vals

    for lineno, raw in lines:
        if raw.strip():
            raise FormatError("trailing content after the last table row", lineno)
    return Instance(n, k, m, rho, seed, links, tables)
