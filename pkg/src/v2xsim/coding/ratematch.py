"""Circular-buffer rate matching over 32-column sub-block interleavers.

Both coding chains are handled by one engine built on index maps: for a
given coded length and channel kind we precompute, once, the sequence
of source indices the circular buffer reads out (dummy padding removed).
Matching is then a gather and recovery is the exact adjoint scatter, so
repeated positions combine additively and punctured positions stay
zero.

The turbo buffer follows the interlaced layout [v0, v1/v2 alternating]
with the stream-2 index permutation and a read offset of 2 rows; the
convolutional buffer is the plain concatenation of the three
interleaved streams read from offset zero.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

COLUMNS = 32
COLUMN_PERMUTATION = np.array(
    [
        0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30,
        1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31,
    ],
    dtype=np.int64,
)

_NULL = -1


def _padded_stream(d: int) -> tuple[np.ndarray, int, int]:
    """Stream indices 0..d-1 preceded by dummy entries to fill R x 32."""
    rows = -(-d // COLUMNS)
    k_pi = rows * COLUMNS
    y = np.concatenate([np.full(k_pi - d, _NULL, dtype=np.int64), np.arange(d, dtype=np.int64)])
    return y, rows, k_pi


def _interleave_columns(y: np.ndarray, rows: int) -> np.ndarray:
    return y.reshape(rows, COLUMNS)[:, COLUMN_PERMUTATION].flatten("F")


def _interleave_stream2(y: np.ndarray, rows: int, k_pi: int) -> np.ndarray:
    k = np.arange(k_pi, dtype=np.int64)
    pi = (COLUMN_PERMUTATION[k // rows] + COLUMNS * (k % rows) + 1) % k_pi
    return y[pi]


@lru_cache(maxsize=32)
def _read_order(d: int, channel: str) -> np.ndarray:
    """Source indices (into the 3d flat coded array) in circular-buffer order."""
    y, rows, k_pi = _padded_stream(d)
    if channel == "turbo":
        v0 = _interleave_columns(y, rows)
        v1 = _interleave_columns(y, rows)
        v2 = _interleave_stream2(y, rows, k_pi)
        w = np.empty(3 * k_pi, dtype=np.int64)
        w[:k_pi] = np.where(v0 >= 0, 3 * v0 + 0, _NULL)
        w[k_pi::2] = np.where(v1 >= 0, 3 * v1 + 1, _NULL)
        w[k_pi + 1 :: 2] = np.where(v2 >= 0, 3 * v2 + 2, _NULL)
        k0 = 2 * rows
    elif channel == "conv":
        v = _interleave_columns(y, rows)
        w = np.concatenate([np.where(v >= 0, 3 * v + j, _NULL) for j in range(3)])
        k0 = 0
    else:
        raise ValueError(f"unknown channel kind {channel!r}")
    w = np.roll(w, -k0)
    order = w[w >= 0]
    order.setflags(write=False)
    return order


def _stream_len(length: int, channel: str) -> int:
    # turbo blocks arrive as 3(k+4): the 12 termination bits are spread
    # over the three streams and interleave with them
    if length <= 0 or length % 3 != 0:
        raise ValueError(f"coded length {length} does not fit a rate-1/3 {channel} block")
    return length // 3


def rate_match(bits, target_len: int, channel: str) -> np.ndarray:
    """Select exactly ``target_len`` bits from the circular buffer."""
    arr = np.asarray(bits)
    if target_len <= 0:
        raise ValueError("target length must be positive")
    d = _stream_len(arr.shape[0], channel)
    order = _read_order(d, channel)
    idx = np.resize(order, target_len)
    return arr[idx]


def rate_recover(soft, source_len: int, channel: str) -> np.ndarray:
    """Adjoint of :func:`rate_match` on LLRs; repeats add, punctures stay 0."""
    arr = np.ascontiguousarray(soft, dtype=np.float64)
    d = _stream_len(source_len, channel)
    order = _read_order(d, channel)
    idx = np.resize(order, arr.shape[0])
    out = np.zeros(source_len)
    np.add.at(out, idx, arr)
    return out
