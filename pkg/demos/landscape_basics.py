"""
Landscapes, dominance and Pareto local optima
=============================================

Build a small correlated multiobjective NK landscape, look at a few objective
vectors, then enumerate the whole search space to find its Pareto local optima
(solutions with no dominating one-bit neighbour) and its Pareto optimal set.

Run with ``python demos/landscape_basics.py``.
"""

import io

import numpy as np

import rmnk

# 12 bits, each bit's contribution depends on itself and 2 other bits,
# 2 objectives whose per-bit contributions are correlated at rho = -0.4
inst = rmnk.generate_instance(n=12, k=2, m=2, rho=-0.4, seed=2024)
print(f"N={inst.n} K={inst.k} M={inst.m} rho={inst.rho}, {inst.space_size} solutions")
print("bit 0 interacts with bits", inst.links[0].tolist())

# evaluate a couple of bit strings (x[0] is written first)
for s in ("000000000000", "101010101010", "111111111111"):
    print(s, rmnk.evaluate(inst, rmnk.from_string(s)).round(4))

###############################################################################
# Dominance between objective vectors (maximisation)
a = np.array([0.6, 0.4])
b = np.array([0.5, 0.4])
c = np.array([0.7, 0.3])
print(rmnk.compare(a, b), rmnk.compare(a, c))

###############################################################################
# Exhaustive enumeration: every PLO and every Pareto optimal solution
summary = rmnk.enumerate_plo(inst, keep_lists=True)
print(f"{summary.n_plo} PLO ({100 * summary.plo_fraction:.2f}% of the space), "
      f"{summary.n_pareto} Pareto optimal")

# every Pareto optimal solution is also a Pareto local optimum
assert set(summary.pareto_list) <= set(summary.plo_list)

front = rmnk.evaluate_ints(inst, summary.pareto_list)
order = np.argsort(front[:, 0])
print("Pareto front (f1, f2):")
for code in summary.pareto_list[order][:8]:
    x = rmnk.from_int(int(code), inst.n)
    print("  ", rmnk.to_string(x), rmnk.evaluate(inst, x).round(4))

###############################################################################
# Objective correlation over random solutions sits near rho on average; a
# single instance scatters around it because its tables are finite.
rng = np.random.default_rng(0)
corr = rmnk.empirical_objective_correlation(inst, 10_000, rng)
print("empirical objective correlation:", round(corr[0, 1], 3))

###############################################################################
# Instances round-trip through a small text format
text = rmnk.dumps_instance(inst)
print(text.splitlines()[:4])
assert rmnk.read_instance(io.StringIO(text)) == inst
