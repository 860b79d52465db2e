"""Bit scrambling with the length-31 Gold sequence."""

from __future__ import annotations

import numpy as np

from ._kernels import gold_sequence_kernel

_SEED_LIMIT = 1 << 31


def gold_sequence(c_init: int, length: int) -> np.ndarray:
    if not 0 <= c_init < _SEED_LIMIT:
        raise ValueError("sequence seed must fit in 31 bits")
    if length < 0:
        raise ValueError("length must be non-negative")
    return gold_sequence_kernel(c_init, length)


def scramble(x, c_init: int) -> np.ndarray:
    """XOR bits with the Gold sequence; flip signs for soft values.

    Applying the same seed twice restores the input, so the receiver
    runs this directly on LLRs before decoding.
    """
    arr = np.asarray(x)
    seq = gold_sequence(c_init, arr.shape[0])
    if np.issubdtype(arr.dtype, np.integer):
        return (arr.astype(np.uint8) ^ seq).astype(np.uint8)
    return arr * (1.0 - 2.0 * seq.astype(arr.dtype))
