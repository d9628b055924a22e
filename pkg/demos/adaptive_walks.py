"""
Estimating the number of Pareto local optima from adaptive walks
================================================================

Exhaustive enumeration stops being possible beyond a few dozen bits. A Pareto
hill-climber is cheap at any size, and its mean walk length tracks the
logarithm of the PLO count. Here we calibrate that relation on enumerable
instances and use it to estimate the count on a held-out instance.

Run with ``python demos/adaptive_walks.py`` (a few seconds).
"""

import math

import numpy as np

import rmnk
from rmnk import seeding

N = 16
settings = [(k, m, rho) for k in (2, 4, 8) for m, rho in ((2, -0.7), (2, 0.0), (2, 0.7), (3, 0.0), (3, 0.7))]

###############################################################################
# One walk, step by step: every move goes to a dominating neighbour, chosen
# uniformly among all dominating neighbours, until none is left.
inst = rmnk.generate_instance(N, 4, 2, 0.0, seed=1)
rec = rmnk.phc_walk(inst, rmnk.random_solution(N, np.random.default_rng(5)), np.random.default_rng(5),
                    keep_flips=True)
print(f"walk of {rec.steps} moves, flipped bits {rec.flips.tolist()}")
print("start", rmnk.to_string(rec.start), rmnk.evaluate(inst, rec.start).round(4))
print("final", rmnk.to_string(rec.final), rec.final_objectives.round(4))
assert rmnk.is_pareto_local_optimum(inst, rec.final)

###############################################################################
# Calibration: enumerate and walk on one instance per setting
walks, plos = [], []
for i, (k, m, rho) in enumerate(settings):
    inst = rmnk.generate_instance(N, k, m, rho, seeding.derive_seed(11, i))
    n_plo = rmnk.enumerate_plo(inst).n_plo
    stats = rmnk.walk_campaign(inst, 300, seeding.derive_seed(12, i))
    walks.append(stats.mean_length)
    plos.append(n_plo)
    print(f"K={k:<2} M={m} rho={rho:+.1f}: {n_plo:6d} PLO, mean walk {stats.mean_length:5.2f}")

fit = rmnk.fit_linlog(walks, plos)
print(f"ln(#PLO) = {fit.a:.3f} * walk + {fit.b:.3f}  (r = {fit.r:.4f})")
print(f"intercept vs ln(2^N) = {N * math.log(2):.3f}: a zero-length walk means every solution is a PLO")

###############################################################################
# Held-out instance: estimate from walks only, then check by enumeration
held_out = rmnk.generate_instance(N, 6, 2, 0.4, seed=999)
stats = rmnk.walk_campaign(held_out, 300, master_seed=1000)
estimate = rmnk.estimate_plo(stats.mean_length, fit)
actual = rmnk.enumerate_plo(held_out).n_plo
print(f"held-out: mean walk {stats.mean_length:.2f} -> estimated {estimate:.0f} PLO, enumerated {actual}")

###############################################################################
# Walks stay cheap at sizes where enumeration is out of reach
for n in (32, 64, 128):
    big = rmnk.generate_instance(n, 4, 2, 0.0, seed=n)
    s = rmnk.walk_campaign(big, 200, master_seed=n)
    print(f"N={n:<3} mean walk {s.mean_length:6.2f} (sd {s.sd_length:.2f})")
