"""CP-OFDM waveform synthesis and front-end demodulation.

Normalization: time domain x = sqrt(N) * ifft(X), so the useful part of
each symbol carries exactly the energy of its grid column (Parseval);
the front end divides by sqrt(N) again. Active subcarriers sit centered
around DC; LTE mode leaves the DC bin unused, NR mode uses it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerology import ConfigError, FrameGeometry, Numerology
from .grid import ResourceGrid


@dataclass
class Waveform:
    samples: np.ndarray  # (n_antennas, n_samples)
    sample_rate: float

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.complex128)
        if arr.ndim == 1:
            arr = arr[None, :]
        self.samples = arr

    @property
    def n_antennas(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]


def subcarrier_bins(geometry: FrameGeometry) -> np.ndarray:
    """FFT bin index (0..N-1) of each active subcarrier, lowest first."""
    n = geometry.n_subcarriers
    if geometry.mode == "LTE":
        # skip DC: offsets -n/2..-1 and +1..+n/2
        half = n // 2
        offsets = np.concatenate([np.arange(-half, 0), np.arange(1, half + 1)])
    else:
        offsets = np.arange(n) - n // 2
    return offsets % geometry.fft_size


def ofdm_modulate(grid: ResourceGrid, num: Numerology | None = None) -> Waveform:
    """Grid to time-domain subframe: centered mapping, IFFT, per-symbol CP."""
    geo = grid.geometry
    if num is not None and num != geo.numerology:
        raise ConfigError("numerology does not match the grid geometry")
    n_fft = geo.fft_size
    bins = subcarrier_bins(geo)
    spectrum = np.zeros((geo.symbols_per_subframe, n_fft), dtype=np.complex128)
    spectrum[:, bins] = grid.cells.T
    useful = np.fft.ifft(spectrum, axis=1) * np.sqrt(n_fft)
    chunks = []
    for l, (cp, _) in enumerate(geo.symbol_sample_layout()):
        chunks.append(useful[l, n_fft - cp :])
        chunks.append(useful[l])
    return Waveform(np.concatenate(chunks)[None, :], float(geo.sample_rate))


def ofdm_demodulate(wave: Waveform, geometry: FrameGeometry) -> list[ResourceGrid]:
    """Strip CP, FFT, pull active subcarriers; one grid per antenna."""
    if int(round(wave.sample_rate)) != geometry.sample_rate:
        raise ValueError(
            f"waveform rate {wave.sample_rate} does not match geometry rate {geometry.sample_rate}"
        )
    if wave.n_samples != geometry.subframe_samples:
        raise ValueError(
            f"expected {geometry.subframe_samples} samples per subframe, got {wave.n_samples}"
        )
    n_fft = geometry.fft_size
    bins = subcarrier_bins(geometry)
    grids = []
    for ant in range(wave.n_antennas):
        cells = np.empty((geometry.n_subcarriers, geometry.symbols_per_subframe), dtype=np.complex128)
        pos = 0
        for l, (cp, _) in enumerate(geometry.symbol_sample_layout()):
            pos += cp
            sym = wave.samples[ant, pos : pos + n_fft]
            spec = np.fft.fft(sym) / np.sqrt(n_fft)
            cells[:, l] = spec[bins]
            pos += n_fft
        grids.append(ResourceGrid(cells, geometry))
    return grids
