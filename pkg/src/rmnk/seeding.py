"""Seed splitting.

Every random stream in the package is derived from a 64-bit master seed plus
an integer key path through :class:`numpy.random.SeedSequence`. Streams with
different key paths are statistically independent, so e.g. drawing more table
values never perturbs the epistasis links of the same instance.
"""

import numpy as np

LINKS = 0
TABLES = 1
WALKS = 2
CORRELATION = 3

_GRID_CELL = 17


def substream(seed, *key):
    """Return a Generator for the stream ``(seed, *key)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(key))))


def derive_seed(seed, *key):
    """Hash ``(seed, *key)`` down to a new unsigned 64-bit seed."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rho_key(rho):
    # SeedSequence keys must be non-negative ints
    return int(round((rho + 1.0) * 1_000_000))


def cell_seed(master_seed, n, k, m, rho, instance_id):
    return derive_seed(master_seed, _GRID_CELL, n, k, m, rho_key(rho), instance_id)
