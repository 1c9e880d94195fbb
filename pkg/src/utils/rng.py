"""
Seeded random streams.

Every stream is `numpy.random.default_rng([seed, *keys])`; the key path (block
index, trial index, sample id) fully determines the draws, so results do not
depend on how work is split across threads.
"""

from __future__ import annotations

import numpy as np

# Permutations per RNG block.
PERMUTATION_BLOCK = 256


def stream(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), *(int(k) for k in keys)])


def permutation_blocks(n_perm: int, block: int = PERMUTATION_BLOCK) -> list[tuple[int, int]]:
    """(block index, size) pairs covering `n_perm` permutations."""
    return [(c, min(block, n_perm - c * block)) for c in range((n_perm + block - 1) // block)]


def permuted_labels(labels: np.ndarray, seed: int, block_index: int, size: int) -> np.ndarray:
    """`size` uniform relabelings of `labels` (each row keeps the label multiset)."""
    rng = stream(seed, block_index)
    return rng.permuted(np.tile(np.asarray(labels), (size, 1)), axis=1)


def derive_seed(seed: int, *keys: int) -> int:
    """A 32-bit integer seed determined by (seed, *keys)."""
    state = np.random.SeedSequence([int(seed), *(int(k) for k in keys)]).generate_state(1)
    return int(state[0])
