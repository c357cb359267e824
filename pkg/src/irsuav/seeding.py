"""Deterministic RNG stream derivation.

Every random draw in the package comes from a generator derived from the
master seed plus a fixed stream id (plus an index for per-episode streams).
Streams are independent of call order, so any subset of the pipeline can be
re-run in isolation and reproduce the full run bit for bit.
"""

import numpy as np

# Stream ids. Never renumber: changing them changes every seeded run.
NET_INIT = 1
EXPLORE = 2
TRAIN_EPISODE = 3
BUFFER = 4
EVAL_EPISODE = 5
POLICY_ACTION = 6
SWEEP = 7


def stream(master_seed, stream_id, *indices):
    """Return a fresh ``numpy.random.Generator`` for one named stream."""
    seq = np.random.SeedSequence([int(master_seed), int(stream_id), *map(int, indices)])
    return np.random.default_rng(seq)


def derived_seed(master_seed, stream_id, *indices):
    """Collapse a stream key into a single integer usable as a new master seed."""
    seq = np.random.SeedSequence([int(master_seed), int(stream_id), *map(int, indices)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])
