"""Seed discipline: one master seed expands to independent per-purpose streams.

Every stochastic routine in the package takes either a 64-bit integer seed or
a ``numpy.random.Generator``.  Integer seeds are expanded with
``numpy.random.SeedSequence``, whose ``spawn`` mechanism gives statistically
independent child streams, so replicas can run in parallel and still be
reproduced one at a time.  The master seed and the replica index together
identify a stream; both are recorded in experiment outputs.

All kernels consume the generator as a plain sequence of doubles
(``next_double``), a fixed number per logical event.  The compiled kernels
read the bit generator directly; the pure-Python fallback draws the same
doubles through ``Generator.random``, so both implementations produce
identical output from identical seeds.
"""

from __future__ import annotations

import numpy as np


def generator_from(seed) -> np.random.Generator:
    """Accept an int seed, a SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def replica_seeds(master_seed: int, n_replicas: int, *, stream: int = 0):
    """Child SeedSequences for n_replicas parallel streams.

    ``stream`` separates independent uses of the same master seed (disorder
    draw vs. sampling vs. dynamics); replica i always gets the same child
    regardless of how many replicas actually run.
    """
    root = np.random.SeedSequence(int(master_seed))
    return root.spawn(int(stream) + 1)[int(stream)].spawn(int(n_replicas))
