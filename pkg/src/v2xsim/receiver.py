"""Receive-side subframe processing.

Channel estimation is least squares at the pilots, smoothed over a
3-subcarrier window, linearly interpolated (and extrapolated at the
burst edges) across symbols. Equalization is antenna combining with an
MMSE-style weight, de-biased so the output constellation is unit scale;
decisions are invariant to any common complex scaling of signal and
estimate. Control decoding is a blind search over candidate
allocations and the four pilot cyclic shifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coding import (
    SciMessage,
    TransportBlock,
    crc_check,
    rate_recover,
    scramble,
    turbo_decode,
    viterbi_decode,
)
from .link import (
    CONTROL_SCRAMBLE_SEED,
    DATA_SYMBOL_BLOCK,
    data_scramble_seed,
    modulation_for_mcs,
)
from .modem import (
    ALLOWED_SHIFTS,
    Allocation,
    ResourceGrid,
    dft_deprecode,
    dmrs_generate,
    llr_demap,
)
from .modem.grid import BURST_SYMBOLS, DATA_SYMBOLS, DMRS_SYMBOLS
from .numerology import ConfigError

SCI_CODED_BITS = 144  # 48-bit control block after the rate-1/3 code
_NV_FLOOR = 1e-12


@dataclass
class ChannelEstimate:
    """Gains over one allocation's subcarriers, all burst symbols, antennas."""

    gains: np.ndarray  # (n_rx, n_subcarriers, BURST_SYMBOLS)
    noise_var: float
    subcarriers: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.gains)):
            raise ValueError("channel estimate contains non-finite values")
        self.noise_var = float(max(self.noise_var, _NV_FLOOR))


@dataclass
class DecodeResult:
    control_crc: bool
    data_crc: bool
    sci: SciMessage | None = None
    tb: TransportBlock | None = None
    control_shift: int | None = None
    iterations: int = 0
    allocation: Allocation | None = field(default=None)

    def __post_init__(self):
        if self.tb is not None and self.sci is None:
            raise ValueError("decoded data without a decoded control message")
        if self.data_crc and not self.control_crc:
            raise ValueError("data checksum cannot pass without the control grant")


def _smooth_frequency(h: np.ndarray, window: int) -> np.ndarray:
    """Moving average along axis 0 with truncated edges."""
    if window <= 1:
        return h
    k = window // 2
    n = h.shape[0]
    csum = np.cumsum(h, axis=0)
    out = np.empty_like(h)
    for i in range(n):
        lo = max(0, i - k)
        hi = min(n, i + k + 1)
        top = csum[hi - 1]
        bot = csum[lo - 1] if lo > 0 else 0
        out[i] = (top - bot) / (hi - lo)
    return out


def _time_weights() -> np.ndarray:
    """Linear interpolation/extrapolation weights, (BURST_SYMBOLS, n_pilots)."""
    pilots = np.array(DMRS_SYMBOLS, dtype=np.float64)
    w = np.zeros((BURST_SYMBOLS, len(pilots)))
    for l in range(BURST_SYMBOLS):
        j = int(np.searchsorted(pilots, l))
        if j == 0:
            j0, j1 = 0, 1
        elif j >= len(pilots):
            j0, j1 = len(pilots) - 2, len(pilots) - 1
        else:
            j0, j1 = j - 1, j
        t = (l - pilots[j0]) / (pilots[j1] - pilots[j0])
        w[l, j0] = 1.0 - t
        w[l, j1] = t
    return w


_TIME_W = _time_weights()


def estimate_channel(grids: list[ResourceGrid], subcarriers, known_dmrs,
                     window: int = 3, noise_var_hint: float | None = None) -> ChannelEstimate:
    """LS at pilots, frequency smoothing, temporal linear interpolation.

    The noise variance comes from pilot residuals against their smoothed
    values, corrected for the self-noise the window removes; a hint
    overrides the estimate (used by genie tests).
    """
    sc = np.asarray(subcarriers)
    ref = np.asarray(known_dmrs)
    n_rx = len(grids)
    raw = np.empty((n_rx, sc.shape[0], len(DMRS_SYMBOLS)), dtype=np.complex128)
    for a, g in enumerate(grids):
        for j, l in enumerate(DMRS_SYMBOLS):
            raw[a, :, j] = g.cells[sc, l] * np.conj(ref) / np.abs(ref) ** 2
    smooth = np.stack([_smooth_frequency(raw[a], window) for a in range(n_rx)])
    gains = smooth @ _TIME_W.T  # (n_rx, n_sc, BURST_SYMBOLS)

    if noise_var_hint is not None:
        nv = noise_var_hint
    else:
        resid = raw - smooth
        if window > 1:
            # interior subcarriers see the full window; edges are biased
            resid = resid[:, window // 2 : sc.shape[0] - window // 2, :]
            scale = 1.0 / (1.0 - 1.0 / window)
        else:
            scale = 1.0
        nv = float(np.mean(np.abs(resid) ** 2) * scale)
    return ChannelEstimate(gains, nv, sc)


def equalize(grids: list[ResourceGrid], est: ChannelEstimate,
             symbols=DATA_SYMBOLS) -> tuple[np.ndarray, np.ndarray]:
    """Combine antennas per cell; returns unit-scale symbols and noise vars.

    Weights follow sum_a conj(h_a) y_a / (S + nv) with S = sum_a |h_a|^2,
    then the output is divided by its bias S/(S + nv), which reduces to
    y_eq = sum_a conj(h_a) y_a / S with post-combining variance nv / S.
    """
    sc = est.subcarriers
    nv = est.noise_var
    cols = list(symbols)
    y = np.stack([g.cells[np.ix_(sc, cols)] for g in grids])  # (n_rx, n_sc, n_sym)
    h = est.gains[:, :, cols]
    s = np.sum(np.abs(h) ** 2, axis=0)
    s = np.maximum(s, _NV_FLOOR)
    combined = np.sum(np.conj(h) * y, axis=0) / s
    nv_eff = nv / s
    # frequency-first within each symbol, matching the mapping order
    return combined.T.reshape(-1), nv_eff.T.reshape(-1)


def decode_pscch(grids: list[ResourceGrid], candidates: list[Allocation],
                 noise_var_hint: float | None = None):
    """Blind control search; first candidate (and shift) with a valid checksum.

    Returns (SciMessage, Allocation, shift) or None. An all-zero decoded
    block passes the checksum trivially and is rejected as no-transmission.
    """
    if not candidates:
        raise ValueError("candidate list is empty")
    for cand in candidates:
        sc = cand.control_subcarriers()
        for shift in ALLOWED_SHIFTS:
            ref = dmrs_generate(sc.shape[0], shift)
            est = estimate_channel(grids, sc, ref, noise_var_hint=noise_var_hint)
            sym, nv = equalize(grids, est)
            llrs = llr_demap(sym, nv, "QPSK")
            llrs = scramble(llrs, CONTROL_SCRAMBLE_SEED)
            recovered = rate_recover(llrs, SCI_CODED_BITS, "conv")
            decoded = viterbi_decode(recovered)
            if not decoded.any():
                continue
            if crc_check(decoded, "crc16"):
                return SciMessage.from_bits(decoded[:-16]), cand, shift
    return None


def decode_pssch(grids: list[ResourceGrid], sci: SciMessage, est: ChannelEstimate,
                 tbs_bits: int = 1800, max_iterations: int = 8) -> DecodeResult:
    """Equalize the shared region, demap, descramble, decode, check."""
    modulation = modulation_for_mcs(sci.mcs_index)
    sym, nv = equalize(grids, est)
    sym = dft_deprecode(sym, DATA_SYMBOL_BLOCK)
    # the unitary inverse transform spreads each bin's noise over the block
    nv_block = nv.reshape(-1, DATA_SYMBOL_BLOCK).mean(axis=1)
    llrs = llr_demap(sym, np.repeat(nv_block, DATA_SYMBOL_BLOCK), modulation)
    llrs = scramble(llrs, data_scramble_seed(sci))
    block = tbs_bits + 24  # appended checksum, encoder adds 4 tail bits/stream
    recovered = rate_recover(llrs, 3 * (block + 4), "turbo")
    bits, iters = turbo_decode(recovered, max_iterations=max_iterations, crc="crc24a")
    ok = crc_check(bits, "crc24a")
    tb = TransportBlock(bits[:-24]) if ok else None
    return DecodeResult(
        control_crc=True, data_crc=bool(ok), sci=sci, tb=tb, iterations=iters
    )


def receive_subframe(grids: list[ResourceGrid], candidates: list[Allocation],
                     tbs_bits: int = 1800, noise_var_hint: float | None = None,
                     max_iterations: int = 8) -> DecodeResult:
    """Full receive pass: blind control search, then the granted data region.

    A decoded control message whose resource indication does not describe
    a grant inside the grid (possible when noise defeats the 16-bit
    checksum) is kept as a control decode but the data stage is skipped.
    """
    hit = decode_pscch(grids, candidates, noise_var_hint=noise_var_hint)
    if hit is None:
        return DecodeResult(control_crc=False, data_crc=False)
    sci, cand, shift = hit
    try:
        alloc = Allocation(cand.control_prb_start, sci.resource_indication)
        alloc.check_fits(grids[0].geometry)
    except ConfigError:
        return DecodeResult(control_crc=True, data_crc=False, sci=sci,
                            control_shift=shift)
    est = estimate_channel(grids, alloc.data_subcarriers(),
                           dmrs_generate(DATA_SYMBOL_BLOCK, 0),
                           noise_var_hint=noise_var_hint)
    result = decode_pssch(grids, sci, est, tbs_bits=tbs_bits,
                          max_iterations=max_iterations)
    result.control_shift = shift
    result.allocation = alloc
    return result
