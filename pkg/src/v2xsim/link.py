"""Transmit-side assembly of one sidelink subframe.

Control pipeline: 32-bit message, 16-bit checksum, rate-1/3 tail-biting
convolutional code, rate matching to 480 bits, scrambling, QPSK, 240
elements over 2 resource blocks. Data pipeline: transport block,
24-bit checksum, turbo code, rate matching to the 960-element shared
region at 2 or 4 bits per symbol, scrambling, DFT precoding per
data-bearing symbol. The data scrambling seed is derived from the
control checksum, so only a receiver holding the decoded control
message can descramble the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coding import (
    SciMessage,
    TransportBlock,
    conv_encode,
    crc_attach,
    crc_bits,
    rate_match,
    scramble,
    segment_transport_block,
    turbo_encode,
)
from .modem import (
    CONTROL_RE,
    DATA_RE,
    Allocation,
    Dmrs,
    ResourceGrid,
    Waveform,
    dft_precode,
    dmrs_generate,
    map_subframe,
    ofdm_modulate,
    qam_map,
)
from .numerology import FrameGeometry

CONTROL_SCRAMBLE_SEED = 510
CONTROL_RM_BITS = 2 * CONTROL_RE  # QPSK on every control element
DATA_SYMBOL_BLOCK = 96  # subcarriers per data-bearing symbol
QPSK_MAX_MCS = 9


def modulation_for_mcs(mcs_index: int) -> str:
    if not 0 <= mcs_index < 32:
        raise ValueError(f"MCS index out of range: {mcs_index}")
    return "QPSK" if mcs_index <= QPSK_MAX_MCS else "QAM16"


def data_scramble_seed(sci: SciMessage) -> int:
    """31-bit seed from the control message checksum."""
    bits = crc_bits(sci.to_bits(), "crc16")
    seed = 0
    for b in bits:
        seed = (seed << 1) | int(b)
    return seed


def control_encode(sci: SciMessage) -> np.ndarray:
    """Control message to 240 QPSK symbols."""
    coded = conv_encode(crc_attach(sci.to_bits(), "crc16"))
    matched = rate_match(coded, CONTROL_RM_BITS, "conv")
    return qam_map(scramble(matched, CONTROL_SCRAMBLE_SEED), "QPSK")


def shared_encode(tb: TransportBlock, sci: SciMessage) -> np.ndarray:
    """Transport block to 960 DFT-precoded data symbols."""
    modulation = modulation_for_mcs(sci.mcs_index)
    bits_per_symbol = 2 if modulation == "QPSK" else 4
    block = segment_transport_block(tb)[0]
    coded = turbo_encode(block)
    matched = rate_match(coded, DATA_RE * bits_per_symbol, "turbo")
    scrambled = scramble(matched, data_scramble_seed(sci))
    symbols = qam_map(scrambled, modulation)
    return dft_precode(symbols, DATA_SYMBOL_BLOCK)


@dataclass
class TxSubframe:
    grid: ResourceGrid
    waveform: Waveform
    sci: SciMessage
    tb: TransportBlock
    control_shift: int


def build_subframe(sci: SciMessage, tb: TransportBlock, geometry: FrameGeometry,
                   control_prb_start: int, control_shift: int) -> TxSubframe:
    """Encode, map and modulate one subframe.

    The data allocation start comes from the control message's resource
    indication; the pilot cyclic shift for the control blocks is the
    caller's draw from {0, 3, 6, 9}.
    """
    allocation = Allocation(control_prb_start, sci.resource_indication)
    dmrs = Dmrs(
        control=dmrs_generate(24, control_shift),
        data=dmrs_generate(DATA_SYMBOL_BLOCK, 0),
    )
    control = control_encode(sci)
    data = shared_encode(tb, sci)
    grid = map_subframe(control, data, dmrs, geometry, allocation)
    return TxSubframe(grid, ofdm_modulate(grid), sci, tb, control_shift)


def burst_power(wave: Waveform, geometry: FrameGeometry) -> float:
    """Mean sample power over the occupied 14-symbol burst."""
    layout = geometry.symbol_sample_layout()
    n_burst = sum(cp + n for cp, n in layout[:14])
    seg = wave.samples[:, :n_burst]
    return float(np.mean(np.abs(seg) ** 2))
