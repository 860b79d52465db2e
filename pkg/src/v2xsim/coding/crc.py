"""Cyclic redundancy checks used by the control and data pipelines."""

from __future__ import annotations

import numpy as np

from ._kernels import crc_remainder

# generator coefficients without the leading x^width term
CRC16_POLY = 0x1021
CRC16_WIDTH = 16
CRC24A_POLY = 0x864CFB
CRC24A_WIDTH = 24

_PARAMS = {
    "crc16": (CRC16_POLY, CRC16_WIDTH),
    "crc24a": (CRC24A_POLY, CRC24A_WIDTH),
}


def _as_bits(bits) -> np.ndarray:
    out = np.ascontiguousarray(bits, dtype=np.uint8)
    if out.ndim != 1:
        raise ValueError("bit array must be one-dimensional")
    return out


def crc_bits(bits, kind: str) -> np.ndarray:
    """Parity bits for ``bits``, most significant first."""
    poly, width = _PARAMS[kind]
    rem = crc_remainder(_as_bits(bits), poly, width)
    return np.array([(rem >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def crc_attach(bits, kind: str) -> np.ndarray:
    return np.concatenate([_as_bits(bits), crc_bits(bits, kind)])


def crc_check(bits, kind: str) -> bool:
    """True when ``bits`` ends in a consistent checksum."""
    _, width = _PARAMS[kind]
    arr = _as_bits(bits)
    if arr.shape[0] <= width:
        return False
    return bool(np.array_equal(crc_bits(arr[:-width], kind), arr[-width:]))
