"""
Deterministic seed derivation for sweeps and restarts.
"""
import numpy as np


def derive_seeds(master_seed: int, count: int) -> list[int]:
    """
    Derive ``count`` independent 32-bit seeds from ``master_seed``.

    The result depends only on the two arguments, so trial ``i`` sees the same
    seed whether trials run sequentially or in parallel.
    """
    if count <= 0:
        return []
    state = np.random.SeedSequence(master_seed).generate_state(count, dtype=np.uint32)
    return [int(s) for s in state]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)

