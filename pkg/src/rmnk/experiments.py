"""Experiment grid over (N, K, M, rho), cell aggregation and regressions."""

import configparser
import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np
from scipy import stats

from . import seeding
from .correlated import validate_rho
from .enumeration import ENUMERATION_LIMIT, enumerate_plo
from .errors import NonPositiveData, RhoOutOfRange, RMNKError, ZeroVariance
from .landscape import evaluate_many, generate_instance
from .walker import walk_campaign

GRID_N_SMALL = (18,)
GRID_N_LARGE = (18, 32, 64, 128)
GRID_M = (2, 3, 5)
GRID_K = (2, 4, 6, 8, 10)
GRID_RHO = (-0.9, -0.7, -0.4, -0.2, 0.0, 0.2, 0.4, 0.7, 0.9)

CSV_HEADER = (
    "N", "K", "M", "rho", "instance_id", "n_plo", "plo_fraction", "n_pareto",
    "mean_walk", "sd_walk", "empirical_rho", "error",
)


def is_admissible(m, rho):
    try:
        validate_rho(m, rho)
    except RhoOutOfRange:
        return False
    return True


@dataclass(frozen=True)
class GridConfig:
    n_values: tuple = GRID_N_SMALL
    k_values: tuple = GRID_K
    m_values: tuple = GRID_M
    rho_values: tuple = GRID_RHO
    instances_per_cell: int = 30
    walks_per_instance: int = 1000
    enumerate_flag: bool = True
    master_seed: int = 0
    correlation_samples: int = 10_000
    enumeration_limit: int = ENUMERATION_LIMIT

    def cells(self):
        """Parameter tuples ``(n, k, m, rho)``, skipping inadmissible (m, rho) pairs."""
        out = []
        for n, k, m, rho in itertools.product(self.n_values, self.k_values, self.m_values, self.rho_values):
            if k <= n - 1 and is_admissible(m, rho):
                out.append((n, k, m, rho))
        return out

    @classmethod
    def from_text(cls, text):
        """Parse flat ``key = value`` lines; list values are comma separated."""
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        parser.read_string("[grid]\n" + text)
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in parser["grid"].items():
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            if key == "rho_values":
                kwargs[key] = tuple(float(v) for v in raw.split(","))
            elif key.endswith("_values"):
                kwargs[key] = tuple(int(v) for v in raw.split(","))
            elif key == "enumerate_flag":
                kwargs[key] = parser["grid"].getboolean(key)
            else:
                kwargs[key] = int(raw)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True)
class GridRow:
    n: int
    k: int
    m: int
    rho: float
    instance_id: int
    n_plo: Optional[int] = None
    n_pareto: Optional[int] = None
    mean_walk_length: Optional[float] = None
    sd_walk_length: Optional[float] = None
    empirical_rho: Optional[float] = None
    error: str = ""

    @property
    def plo_fraction(self):
        return None if self.n_plo is None else self.n_plo / 2**self.n

    @property
    def cell(self):
        return (self.n, self.k, self.m, self.rho)


@dataclass(frozen=True)
class RegressionFit:
    """``y' = a x' + b`` fitted on transformed data; ``r`` is Pearson of (x', y')."""

    a: float
    b: float
    r: float
    model: str

    @property
    def r_squared(self):
        return self.r**2


def pearson(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 2:
        raise ValueError("need two equally long sequences of length >= 2")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("pearson correlation undefined for constant data")
    r = np.dot(dx, dy) / math.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def spearman(xs, ys):
    return float(stats.spearmanr(xs, ys).statistic)


def _least_squares(x, y, model):
    if x.size < 3:
        raise ValueError("need at least three points")
    res = stats.linregress(x, y)
    return RegressionFit(float(res.slope), float(res.intercept), pearson(x, y), model)


def _positive(values, what):
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0.0):
        raise NonPositiveData(f"{what} must be strictly positive for a log transform")
    return values


def fit_loglog(xs, ys):
    """Least squares of ``ln y`` on ``ln x``."""
    xs = _positive(xs, "xs")
    ys = _positive(ys, "ys")
    return _least_squares(np.log(xs), np.log(ys), "log-log")


def fit_linlog(xs, ys):
    """Least squares of ``ln y`` on ``x``."""
    ys = _positive(ys, "ys")
    return _least_squares(np.asarray(xs, dtype=float), np.log(ys), "lin-log")


def fit_linear(xs, ys):
    return _least_squares(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), "linear")


def empirical_objective_correlation(inst, n_samples, rng):
    """Pearson correlation matrix of objectives over uniform random solutions."""
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    xs = rng.integers(0, 2, size=(n_samples, inst.n), dtype=np.uint8)
    corr = np.corrcoef(evaluate_many(inst, xs), rowvar=False)
    corr = (corr + corr.T) / 2.0
    np.fill_diagonal(corr, 1.0)
    return corr


def mean_off_diagonal(corr):
    m = corr.shape[0]
    return float((corr.sum() - np.trace(corr)) / (m * (m - 1)))


def run_instance(cfg, n, k, m, rho, instance_id):
    """Generate, enumerate, walk and measure one grid instance."""
    seed = seeding.cell_seed(cfg.master_seed, n, k, m, rho, instance_id)
    out = dict(n=n, k=k, m=m, rho=rho, instance_id=instance_id)
    errors = []
    try:
        inst = generate_instance(n, k, m, rho, seed)
    except RMNKError as exc:
        return GridRow(**out, error=f"{type(exc).__name__}: {exc}")

    if cfg.enumerate_flag:
        if n <= cfg.enumeration_limit:
            summary = enumerate_plo(inst, limit=cfg.enumeration_limit)
            out.update(n_plo=summary.n_plo, n_pareto=summary.n_pareto)
        else:
            errors.append("SpaceTooLarge")
    if cfg.walks_per_instance > 0:
        ws = walk_campaign(inst, cfg.walks_per_instance, seeding.derive_seed(seed, seeding.WALKS))
        out.update(mean_walk_length=ws.mean_length, sd_walk_length=ws.sd_length)
    if cfg.correlation_samples > 1:
        corr = empirical_objective_correlation(
            inst, cfg.correlation_samples, seeding.substream(seed, seeding.CORRELATION)
        )
        out.update(empirical_rho=mean_off_diagonal(corr))
    return GridRow(**out, error="; ".join(errors))


def run_grid(cfg, threads=1, progress=None):
    """Every admissible cell times ``instances_per_cell`` instances, in cell order.

    Output depends only on ``cfg``; ``threads`` changes the schedule, not
    the rows. ``progress`` (optional) is called with each finished row.
    """
    tasks = [cell + (i,) for cell in cfg.cells() for i in range(cfg.instances_per_cell)]

    def work(task):
        row = run_instance(cfg, *task)
        if progress is not None:
            progress(row)
        return row

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(work, tasks))
    return [work(t) for t in tasks]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows, sink):
    """CSV (UTF-8, LF line endings) in the header order of ``CSV_HEADER``."""
    if not hasattr(sink, "write"):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            return write_rows(rows, fh)
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.n, r.k, r.m, _fmt(float(r.rho)), r.instance_id, _fmt(r.n_plo), _fmt(r.plo_fraction),
            _fmt(r.n_pareto), _fmt(r.mean_walk_length), _fmt(r.sd_walk_length),
            _fmt(r.empirical_rho), r.error,
        ])


def rows_to_csv(rows):
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()


def read_rows(source):
    if not hasattr(source, "read"):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_rows(fh)
    reader = csv.DictReader(source)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")

    def opt(v, kind):
        return kind(v) if v != "" else None

    return [
        GridRow(
            n=int(d["N"]), k=int(d["K"]), m=int(d["M"]), rho=float(d["rho"]),
            instance_id=int(d["instance_id"]), n_plo=opt(d["n_plo"], int),
            n_pareto=opt(d["n_pareto"], int), mean_walk_length=opt(d["mean_walk"], float),
            sd_walk_length=opt(d["sd_walk"], float), empirical_rho=opt(d["empirical_rho"], float),
            error=d["error"],
        )
        for d in reader
    ]


@dataclass
class CellMean:
    n: int
    k: int
    m: int
    rho: float
    count: int = 0
    n_plo: Optional[float] = None
    n_pareto: Optional[float] = None
    mean_walk: Optional[float] = None
    empirical_rho: Optional[float] = None
    instance_ids: list = field(default_factory=list)

    @property
    def plo_fraction(self):
        return None if self.n_plo is None else self.n_plo / 2**self.n


def cell_means(rows):
    """Average per-instance measurements within each (n, k, m, rho) cell.

    A measurement is averaged only if every instance in the cell has it.
    """
    groups = {}
    for r in rows:
        groups.setdefault(r.cell, []).append(r)
    out = {}
    for cell, rs in sorted(groups.items()):
        c = CellMean(*cell, count=len(rs), instance_ids=[r.instance_id for r in rs])
        for attr, src in (("n_plo", "n_plo"), ("n_pareto", "n_pareto"),
                          ("mean_walk", "mean_walk_length"), ("empirical_rho", "empirical_rho")):
            vals = [getattr(r, src) for r in rs]
            if all(v is not None for v in vals):
                setattr(c, attr, float(np.mean(vals)))
        out[cell] = c
    return out
