"""Monte-Carlo BLER campaign over an SNR grid.

Each subframe draws its payload, pilot shift, fading and noise from a
counter-based substream keyed by (seed, snr_index, subframe_index), so
the campaign result is a pure function of (config, seed) no matter how
the work is split across processes. Errors are counted against the
transmitted ground truth, not just the checksums: a decoded message
that passes its checksum but differs from what was sent is still an
error block.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import add_awgn, channel_apply, channel_create
from .coding import SciMessage, TransportBlock
from .config import SimConfig, validate_config
from .link import build_subframe, burst_power
from .modem import ALLOWED_SHIFTS, Allocation, ofdm_demodulate
from .modem.grid import CONTROL_PRB, DATA_PRB
from .numerology import FrameGeometry
from .receiver import receive_subframe

CONTROL_PRB_START = 0
DATA_PRB_START = CONTROL_PRB_START + CONTROL_PRB
OCCUPIED_SUBCARRIERS = 12 * (CONTROL_PRB + DATA_PRB)
MAX_DECOYS = 3


@dataclass(frozen=True)
class BlerPoint:
    snr_db: float
    blocks_tx: int
    blocks_err_control: int
    blocks_err_data: int

    def __post_init__(self):
        for n in (self.blocks_err_control, self.blocks_err_data):
            if not 0 <= n <= self.blocks_tx:
                raise ValueError(f"error count {n} outside 0..{self.blocks_tx}")


@dataclass(frozen=True)
class BlerCurve:
    label: str
    points: tuple[BlerPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        snrs = [p.snr_db for p in self.points]
        if snrs != sorted(snrs):
            raise ValueError("points must be sorted by snr_db")


def compute_bler(point: BlerPoint, which: str) -> float:
    if point.blocks_tx <= 0:
        raise ValueError("no transmitted blocks")
    w = which.lower()
    if w == "control":
        return point.blocks_err_control / point.blocks_tx
    if w == "data":
        return point.blocks_err_data / point.blocks_tx
    raise ValueError(f"which must be Control or Data, got {which!r}")


def control_pool(geometry: FrameGeometry) -> list[Allocation]:
    """Blind-search candidates: the configured position plus empty decoys."""
    pool = [Allocation(CONTROL_PRB_START, DATA_PRB_START)]
    start = DATA_PRB_START + DATA_PRB
    while len(pool) < 1 + MAX_DECOYS and start + CONTROL_PRB <= geometry.n_prb:
        pool.append(Allocation.adjacent(start))
        start += 2
    return pool


def simulate_subframe(cfg: SimConfig, geometry: FrameGeometry,
                      candidates: list[Allocation], snr_index: int,
                      subframe_index: int) -> tuple[bool, bool]:
    """One block through the chain; returns (control_error, data_error)."""
    ss = np.random.SeedSequence(entropy=cfg.seed,
                                spawn_key=(snr_index, subframe_index))
    rng = np.random.Generator(np.random.Philox(ss))
    tb = TransportBlock(rng.integers(0, 2, cfg.tbs_bits, dtype=np.uint8))
    shift = int(ALLOWED_SHIFTS[rng.integers(len(ALLOWED_SHIFTS))])
    sci = SciMessage(
        mcs_index=cfg.mcs_index,
        resource_indication=DATA_PRB_START,
        group_destination=int(rng.integers(256)),
    )
    tx = build_subframe(sci, tb, geometry, CONTROL_PRB_START, shift)

    state = channel_create(cfg.channel, geometry.sample_rate, rng=rng)
    received = channel_apply(state, tx.waveform)
    # reference: mean element power over the occupied grid, taken from the
    # transmitted burst; fading is unit power so this is the average
    # per-antenna symbol power at the channel output
    ref = burst_power(tx.waveform, geometry) * geometry.fft_size / OCCUPIED_SUBCARRIERS
    received = add_awgn(received, cfg.snr_grid[snr_index], ref, rng)

    grids = ofdm_demodulate(received, geometry)
    res = receive_subframe(grids, candidates, tbs_bits=cfg.tbs_bits)
    ctrl_ok = res.control_crc and res.sci == sci
    data_ok = bool(
        ctrl_ok and res.data_crc and res.tb is not None
        and np.array_equal(res.tb.bits, tb.bits)
    )
    return (not ctrl_ok, not data_ok)


def _run_chunk(cfg: SimConfig, snr_index: int, lo: int, hi: int) -> tuple[int, int, int]:
    geometry = cfg.geometry()
    candidates = control_pool(geometry)
    ctrl_err = data_err = 0
    for i in range(lo, hi):
        c, d = simulate_subframe(cfg, geometry, candidates, snr_index, i)
        ctrl_err += c
        data_err += d
    return snr_index, ctrl_err, data_err


def run_campaign(cfg: SimConfig, workers: int = 1,
                 progress: Callable[[BlerPoint], None] | None = None) -> BlerCurve:
    """Simulate n_subframes blocks at every SNR point; one curve out."""
    validate_config(cfg)
    n = cfg.n_subframes
    ctrl = [0] * len(cfg.snr_grid)
    data = [0] * len(cfg.snr_grid)
    if workers <= 1:
        geometry = cfg.geometry()
        candidates = control_pool(geometry)
        for si in range(len(cfg.snr_grid)):
            for i in range(n):
                c, d = simulate_subframe(cfg, geometry, candidates, si, i)
                ctrl[si] += c
                data[si] += d
            if progress is not None:
                progress(BlerPoint(cfg.snr_grid[si], n, ctrl[si], data[si]))
        points = [
            BlerPoint(s, n, ctrl[i], data[i]) for i, s in enumerate(cfg.snr_grid)
        ]
        return BlerCurve(cfg.curve_label(), tuple(points))

    chunk = max(1, -(-n // (4 * workers)))
    done = [0] * len(cfg.snr_grid)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_chunk, cfg, si, lo, min(lo + chunk, n))
            for si in range(len(cfg.snr_grid))
            for lo in range(0, n, chunk)
        ]
        for fut in futures:
            si, c, d = fut.result()
            ctrl[si] += c
            data[si] += d
            done[si] += 1
            n_chunks = -(-n // chunk)
            if progress is not None and done[si] == n_chunks:
                progress(BlerPoint(cfg.snr_grid[si], n, ctrl[si], data[si]))
    points = [BlerPoint(s, n, ctrl[i], data[i]) for i, s in enumerate(cfg.snr_grid)]
    return BlerCurve(cfg.curve_label(), tuple(points))
