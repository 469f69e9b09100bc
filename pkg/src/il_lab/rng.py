"""Counter-based randomness. Every draw is a pure function of the integers
hashed into it, so experiments are bit-reproducible across platforms and
trivially parallel. The hash is a splitmix64 absorb-finalize chain."""

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(*vals):
    """Order-sensitive hash of any number of integers onto 64 bits."""
    h = 0
    for v in vals:
        h = (h + _GAMMA + (int(v) & _MASK)) & _MASK
        h = ((h ^ (h >> 30)) * _MIX1) & _MASK
        h = ((h ^ (h >> 27)) * _MIX2) & _MASK
        h ^= h >> 31
    return h


def mix64_array(*vals):
    """Vectorized mix64. Each val is an int or uint64-compatible ndarray;
    arrays broadcast. Bit-identical to mix64 applied elementwise."""
    shape = np.broadcast_shapes(*(np.shape(v) for v in vals))
    if shape == ():
        return np.uint64(mix64(*vals))
    h = np.zeros(shape, np.uint64)
    g, m1, m2 = np.uint64(_GAMMA), np.uint64(_MIX1), np.uint64(_MIX2)
    s30, s27, s31 = np.uint64(30), np.uint64(27), np.uint64(31)
    for v in vals:
        h = h + g + np.asarray(v).astype(np.uint64)
        h = (h ^ (h >> s30)) * m1
        h = (h ^ (h >> s27)) * m2
        h = h ^ (h >> s31)
    return h


def unit_double(h):
    """Hash -> float in [0,1), 53 mantissa bits."""
    return (int(h) >> 11) * 2.0**-53


def unit_double_array(h):
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def categorical(row, h):
    """Inverse-CDF draw from a probability row in stored order. The index is
    clamped to the last positive-probability entry so u ~ 1 roundoff never
    selects a zero-mass cell."""
    u = unit_double(h)
    cdf = np.cumsum(row)
    i = int(np.searchsorted(cdf, u, side="right"))
    last = int(np.flatnonzero(row > 0)[-1])
    return min(i, last)


def categorical_rows(cdf_rows, last_pos, h_arr):
    """Batch inverse-CDF: one draw per row of cdf_rows (n, k). Matches
    categorical() bit-for-bit on each row."""
    u = unit_double_array(h_arr)
    idx = (u[:, None] >= cdf_rows).sum(axis=1)
    return np.minimum(idx, last_pos)


def last_positive(prob_table):
    """Index of the last strictly positive entry along the final axis."""
    flipped = prob_table[..., ::-1] > 0
    return prob_table.shape[-1] - 1 - flipped.argmax(axis=-1)
