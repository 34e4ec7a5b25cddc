"""Weighted sampling without replacement.

The selection law is sequential: draw one index with probability
proportional to its weight, remove it, renormalize, repeat. Materializing
that loop is slow, so the implementation races exponential keys instead:
give index i the key E_i / w_i with E_i iid standard exponential, and keep
the k smallest keys. The joint law of the winners is exactly the
sequential-draw law, but the whole selection happens in one vectorized
pass. Tests enumerate small cases against the sequential definition.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

__all__ = ["sample_without_replacement"]


def sample_without_replacement(weights, k: int, rng: np.random.Generator) -> np.ndarray:
    """Select k distinct indices with probability proportional to weight.

    Parameters
    ----------
    weights:
        1-D array of non-negative finite weights. Zero-weight indices are
        never selected.
    k:
        Number of indices to draw. Must not exceed the number of
        positive-weight entries.
    rng:
        numpy Generator; the only source of randomness.

    Returns
    -------
    Sorted int64 array of k distinct indices.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ValidationError(f"weights must be 1-D, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights contain non-finite values")
    if w.size and w.min() < 0.0:
        bad = int(np.argmin(w))
        raise ValidationError(f"negative weight {w[bad]} at index {bad}")
    k = int(k)
    if k < 0:
        raise ValidationError(f"sample size must be non-negative, got {k}")
    if k == 0:
        return np.empty(0, dtype=np.int64)

    positive = w > 0.0
    n_pos = int(np.count_nonzero(positive))
    if k > n_pos:
        raise ValidationError(
            f"need {k} targets but only {n_pos} candidates have positive weight "
            f"(deficit {k - n_pos})")

    e = rng.exponential(size=w.size)
    # e/w can overflow for denormal-small weights; an inf key means the
    # candidate is never picked, which is the right limit, so keep quiet
    with np.errstate(over="ignore"):
        keys = np.divide(e, w, out=np.full(w.size, np.inf), where=positive)
    if k == w.size:
        chosen = np.arange(w.size, dtype=np.int64)
    else:
        chosen = np.argpartition(keys, k - 1)[:k].astype(np.int64)
    chosen.sort()
    return chosen
