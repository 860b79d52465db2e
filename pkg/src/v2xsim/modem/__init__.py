"""Symbol-level processing: constellations, precoding, pilots, grid, OFDM."""

from .dmrs import ALLOWED_SHIFTS, dmrs_generate
from .dump import dump_grid, dump_waveform, load_grid, load_waveform
from .grid import (
    BURST_SYMBOLS,
    CONTROL_PRB,
    CONTROL_RE,
    DATA_PRB,
    DATA_RE,
    DATA_SYMBOLS,
    DMRS_SYMBOLS,
    Allocation,
    Dmrs,
    ResourceGrid,
    demap_subframe,
    extract_pilots,
    map_subframe,
)
from .ofdm import Waveform, ofdm_demodulate, ofdm_modulate, subcarrier_bins
from .precode import dft_deprecode, dft_precode
from .qam import BITS_PER_SYMBOL, constellation, llr_demap, qam_map

__all__ = [
    "ALLOWED_SHIFTS",
    "Allocation",
    "BITS_PER_SYMBOL",
    "BURST_SYMBOLS",
    "CONTROL_PRB",
    "CONTROL_RE",
    "DATA_PRB",
    "DATA_RE",
    "DATA_SYMBOLS",
    "DMRS_SYMBOLS",
    "Dmrs",
    "ResourceGrid",
    "Waveform",
    "constellation",
    "demap_subframe",
    "dft_deprecode",
    "dft_precode",
    "dmrs_generate",
    "dump_grid",
    "dump_waveform",
    "extract_pilots",
    "load_grid",
    "load_waveform",
    "llr_demap",
    "map_subframe",
    "ofdm_demodulate",
    "ofdm_modulate",
    "qam_map",
    "subcarrier_bins",
]
