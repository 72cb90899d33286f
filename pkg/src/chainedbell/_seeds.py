"""Deterministic derivation of independent random generators.

Every stochastic routine in the package draws from a generator derived from a
single master seed plus a structural key (resample index, group index, sweep
N, ...).  Derived streams are statistically independent and do not depend on
evaluation order, so parallel or reordered execution reproduces the same
results.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

__all__ = ["derived_rng"]


def derived_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Return a generator seeded by ``(master_seed, *key)``.

    The same arguments always yield an identical stream; distinct keys yield
    independent streams.
    """
    if master_seed < 0:
        raise InvalidInputError(f"master seed must be nonnegative, got {master_seed}")
    if any(k < 0 for k in key):
        raise InvalidInputError(f"seed key components must be nonnegative, got {key}")
    return np.random.default_rng(np.random.SeedSequence(entropy=[master_seed, *key]))
