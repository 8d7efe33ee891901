import numpy as np


def make_rng(seed, *counter):
    """Counter-based generator keyed by ``(seed, *counter)``.

    Each (seed, counter) pair gives an independent, reproducible stream, so
    trials and multistarts can run in any order without sharing RNG state.
    """
    key = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(c) for c in counter]])
    return np.random.Generator(np.random.Philox(key))
