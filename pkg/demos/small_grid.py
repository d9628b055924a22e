"""
A miniature experiment grid, CSV and report
===========================================

The full study sweeps K, M and rho at N=18 with 30 instances per cell (see
``configs/table1.cfg`` and ``rmnk grid``). This script runs a scaled-down grid
at N=14, writes the results CSV, and builds the regression summary and plot
scripts from the CSV alone, the same way ``rmnk report`` does.

Run with ``python demos/small_grid.py [output-dir]`` (well under a minute).
"""

import os
import sys
import tempfile

import rmnk
from rmnk.report import format_summary, write_report

out_dir = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="rmnk-demo-")
os.makedirs(out_dir, exist_ok=True)

cfg = rmnk.GridConfig(
    n_values=(14,),
    k_values=(2, 4, 8),
    m_values=(2, 3, 5),
    rho_values=(-0.7, -0.2, 0.2, 0.7),
    instances_per_cell=3,
    walks_per_instance=200,
    correlation_samples=2000,
    master_seed=7,
)
# (M=3, rho=-0.7) and (M=5, rho=-0.7) are not valid correlation matrices and are skipped
print(f"{len(cfg.cells())} admissible cells x {cfg.instances_per_cell} instances")

rows = rmnk.run_grid(cfg, threads=2)
csv_path = os.path.join(out_dir, "results.csv")
rmnk.write_rows(rows, csv_path)
print("wrote", csv_path)

###############################################################################
# Cell means: averages over the instances of each (N, K, M, rho) cell
for c in list(rmnk.cell_means(rows).values())[:6]:
    print(f"K={c.k} M={c.m} rho={c.rho:+.1f}: {c.n_plo:8.1f} PLO, {c.n_pareto:6.1f} Pareto, walk {c.mean_walk:.2f}")

###############################################################################
# Regressions and plot scripts come from the CSV only
print(format_summary(rmnk.read_rows(csv_path)))
for path in write_report(csv_path, out_dir):
    print("wrote", path)
