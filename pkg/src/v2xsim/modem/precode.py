"""Blockwise DFT transform precoding (the SC-OFDM ingredient)."""

from __future__ import annotations

import numpy as np


def dft_precode(symbols, m: int) -> np.ndarray:
    """Unitary m-point DFT applied to consecutive blocks of m symbols."""
    arr = np.asarray(symbols, dtype=np.complex128)
    if m <= 0 or arr.ndim != 1 or arr.shape[0] % m != 0:
        raise ValueError(f"symbol count {arr.shape} not divisible into blocks of {m}")
    blocks = arr.reshape(-1, m)
    return (np.fft.fft(blocks, axis=1) / np.sqrt(m)).reshape(-1)


def dft_deprecode(symbols, m: int) -> np.ndarray:
    """Inverse of :func:`dft_precode`."""
    arr = np.asarray(symbols, dtype=np.complex128)
    if m <= 0 or arr.ndim != 1 or arr.shape[0] % m != 0:
        raise ValueError(f"symbol count {arr.shape} not divisible into blocks of {m}")
    blocks = arr.reshape(-1, m)
    return (np.fft.ifft(blocks, axis=1) * np.sqrt(m)).reshape(-1)
