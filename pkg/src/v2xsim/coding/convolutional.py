"""Tail-biting convolutional code for the control channel.

Rate 1/3, constraint length 7, generators 133/171/165 (octal). The
encoder preloads its register with the final six payload bits, so the
decoder searches for a circular trellis path: two passes over the
doubled metric sequence with a uniform start, decisions read from the
second pass.
"""

from __future__ import annotations

import numpy as np

from ._kernels import conv_encode_kernel, viterbi_tailbiting_kernel

GENERATORS = (0o133, 0o171, 0o165)
CONSTRAINT_LENGTH = 7

_N_STATES = 64
_POLYS = np.array(GENERATORS, dtype=np.int64)


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def _build_trellis():
    nxt = np.empty((_N_STATES, 2), dtype=np.int64)
    sign = np.empty((_N_STATES, 2, 3), dtype=np.float64)
    for s in range(_N_STATES):
        for b in range(2):
            nxt[s, b] = (b << 5) | (s >> 1)
            full = (b << 6) | s
            for j, g in enumerate(GENERATORS):
                sign[s, b, j] = 1.0 - 2.0 * _parity(full & g)
    return nxt, sign


_NEXT_STATE, _OUT_SIGN = _build_trellis()


def conv_encode(bits) -> np.ndarray:
    """Encode to 3x the input length, streams interleaved per step."""
    arr = np.ascontiguousarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.shape[0] < CONSTRAINT_LENGTH - 1:
        raise ValueError("payload must be 1-D with at least 6 bits")
    return conv_encode_kernel(arr, _POLYS)


def viterbi_decode(llr) -> np.ndarray:
    """Max-likelihood tail-biting decode; positive LLR favours bit 0."""
    arr = np.ascontiguousarray(llr, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] % 3 != 0 or arr.shape[0] == 0:
        raise ValueError("LLR length must be a positive multiple of 3")
    return viterbi_tailbiting_kernel(arr, _NEXT_STATE, _OUT_SIGN)
