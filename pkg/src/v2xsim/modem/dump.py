"""Debug serialization of grids and waveforms.

Little-endian layouts, 64-bit float interleaved real/imag bodies:

grid:      magic 'V2XG' | u16 version | u32 n_subcarriers | u32 n_symbols
           | f64 sample_rate | body: cells C-order, (re, im) per cell
waveform:  magic 'V2XW' | u16 version | u32 n_antennas | u64 n_samples
           | f64 sample_rate | body: per antenna, (re, im) per sample
"""

from __future__ import annotations

import struct

import numpy as np

from .grid import ResourceGrid
from .ofdm import Waveform

_GRID_MAGIC = b"V2XG"
_WAVE_MAGIC = b"V2XW"
_VERSION = 1


def _interleave(arr: np.ndarray) -> np.ndarray:
    flat = np.ascontiguousarray(arr, dtype=np.complex128).reshape(-1)
    out = np.empty(2 * flat.shape[0], dtype="<f8")
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return out


def _deinterleave(raw: np.ndarray) -> np.ndarray:
    return raw[0::2] + 1j * raw[1::2]


def dump_grid(grid: ResourceGrid, path) -> None:
    header = _GRID_MAGIC + struct.pack(
        "<HIId", _VERSION, grid.n_subcarriers, grid.n_symbols, float(grid.geometry.sample_rate)
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(_interleave(grid.cells).tobytes())


def load_grid(path) -> tuple[np.ndarray, float]:
    """Returns (cells, sample_rate); geometry metadata is not serialized."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _GRID_MAGIC:
            raise ValueError(f"not a grid dump (magic {magic!r})")
        version, n_sc, n_sym, rate = struct.unpack("<HIId", f.read(18))
        if version != _VERSION:
            raise ValueError(f"unsupported grid dump version {version}")
        raw = np.frombuffer(f.read(), dtype="<f8")
    cells = _deinterleave(raw).reshape(n_sc, n_sym)
    return cells, rate


def dump_waveform(wave: Waveform, path) -> None:
    header = _WAVE_MAGIC + struct.pack(
        "<HIQd", _VERSION, wave.n_antennas, wave.n_samples, float(wave.sample_rate)
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(_interleave(wave.samples).tobytes())


def load_waveform(path) -> Waveform:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _WAVE_MAGIC:
            raise ValueError(f"not a waveform dump (magic {magic!r})")
        version, n_ant, n_samp, rate = struct.unpack("<HIQd", f.read(22))
        if version != _VERSION:
            raise ValueError(f"unsupported waveform dump version {version}")
        raw = np.frombuffer(f.read(), dtype="<f8")
    samples = _deinterleave(raw).reshape(n_ant, n_samp)
    return Waveform(samples, rate)
