"""Propagation and noise: multipath fading with Doppler, plus AWGN.

The vehicular profile is a 9-tap delay line; each tap carries a
sum-of-64-sinusoids Doppler process. Arrival angles are drawn as one
uniform random offset on an equally spaced comb (plus independent
phases), which keeps single-realization statistics tight to the
band-limited U-shaped spectrum; fully independent angles would wander
several times further from the Bessel autocorrelation at this number
of sinusoids.

Gains are evaluated on a coarse time grid (hundreds of points per
Doppler cycle) and linearly interpolated to sample rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modem.ofdm import Waveform
from .numerology import ConfigError

PROFILES = ("EVA", "AWGN_only", "SingleTap")

EVA_DELAYS_NS = (0.0, 30.0, 150.0, 310.0, 370.0, 710.0, 1090.0, 1730.0, 2510.0)
EVA_POWERS_DB = (0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9)

N_OSCILLATORS = 64
# linear-interp amplitude error at 64 grid points per Doppler cycle is
# (2 pi / 64)^2 / 8, about 0.1%
_GRID_STEPS_PER_CYCLE = 64
_TIME_CHUNK = 16384


@dataclass(frozen=True)
class ChannelConfig:
    profile: str = "EVA"
    max_doppler_hz: float = 180.0
    n_rx: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ConfigError(f"channel profile must be one of {PROFILES}, got {self.profile!r}")
        if self.max_doppler_hz < 0:
            raise ConfigError("max Doppler must be non-negative")
        if self.n_rx < 1:
            raise ConfigError("need at least one receive antenna")


class ChannelState:
    """Single-owner fading state; time advances with every apply call."""

    def __init__(self, cfg: ChannelConfig, sample_rate: float, rng: np.random.Generator):
        self.cfg = cfg
        self.sample_rate = float(sample_rate)
        if cfg.profile == "AWGN_only":
            delays_ns = (0.0,)
            powers_db = (0.0,)
        elif cfg.profile == "SingleTap":
            delays_ns = (0.0,)
            powers_db = (0.0,)
        else:
            delays_ns = EVA_DELAYS_NS
            powers_db = EVA_POWERS_DB
        self.delay_samples = np.array(
            [int(round(d * 1e-9 * self.sample_rate)) for d in delays_ns], dtype=np.int64
        )
        lin = 10.0 ** (np.asarray(powers_db) / 10.0)
        self.tap_powers = lin / lin.sum()
        self.n_taps = len(delays_ns)
        self.static = cfg.profile == "AWGN_only" or cfg.max_doppler_hz == 0.0
        self.frozen_unit = cfg.profile == "AWGN_only"
        n_rx, n_taps, n_osc = cfg.n_rx, self.n_taps, N_OSCILLATORS
        if self.frozen_unit:
            self.omega = np.zeros((n_rx, n_taps, n_osc))
            self.phase = np.zeros((n_rx, n_taps, n_osc))
        else:
            offset = rng.random((n_rx, n_taps, 1))
            angles = 2.0 * np.pi * (np.arange(n_osc)[None, None, :] + offset) / n_osc
            self.omega = 2.0 * np.pi * cfg.max_doppler_hz * np.cos(angles)
            self.phase = rng.uniform(0.0, 2.0 * np.pi, (n_rx, n_taps, n_osc))
        self.t_samples = 0
        # past transmit samples still inside the delay line (common to antennas)
        self.tail = np.zeros(int(self.delay_samples.max()), dtype=np.complex128)
        self._rng = rng

    def gains_at(self, t_samples: np.ndarray) -> np.ndarray:
        """Complex tap gains, shape (n_rx, n_taps, len(t))."""
        t = np.asarray(t_samples, dtype=np.float64) / self.sample_rate
        nt = t.shape[0]
        amp = np.sqrt(self.tap_powers)
        if self.frozen_unit:
            g = np.ones((self.cfg.n_rx, self.n_taps, nt), dtype=np.complex128)
            return g * amp[None, :, None]
        out = np.empty((self.cfg.n_rx, self.n_taps, nt), dtype=np.complex128)
        for a in range(self.cfg.n_rx):
            for p in range(self.n_taps):
                acc = np.empty(nt, dtype=np.complex128)
                for s in range(0, nt, _TIME_CHUNK):
                    e = min(s + _TIME_CHUNK, nt)
                    theta = np.outer(self.omega[a, p], t[s:e]) + self.phase[a, p][:, None]
                    acc[s:e] = np.exp(1j * theta).sum(axis=0)
                out[a, p] = acc * (amp[p] / np.sqrt(N_OSCILLATORS))
        return out

    def _grid_step(self, n: int) -> int:
        fd = self.cfg.max_doppler_hz
        if self.static:
            return max(n, 1)
        step = self.sample_rate / (fd * _GRID_STEPS_PER_CYCLE)
        return max(1, min(n, int(step)))

    def gains_interpolated(self, n: int) -> np.ndarray:
        """Gains for the next n samples on the coarse grid, interpolated."""
        start = self.t_samples
        if self.static:
            g = self.gains_at(np.array([start], dtype=np.float64))
            return np.broadcast_to(g, (self.cfg.n_rx, self.n_taps, n))
        step = self._grid_step(n)
        grid = np.arange(start, start + n + step, step, dtype=np.float64)
        coarse = self.gains_at(grid)
        t = np.arange(start, start + n, dtype=np.float64)
        out = np.empty((self.cfg.n_rx, self.n_taps, n), dtype=np.complex128)
        for a in range(self.cfg.n_rx):
            for p in range(self.n_taps):
                out[a, p] = np.interp(t, grid, coarse[a, p].real) + 1j * np.interp(
                    t, grid, coarse[a, p].imag
                )
        return out

    def frequency_response(self, fft_size: int, t_samples: float | None = None) -> np.ndarray:
        """H per antenna and FFT bin at one time instant, shape (n_rx, fft_size)."""
        t = self.t_samples if t_samples is None else t_samples
        g = self.gains_at(np.array([t], dtype=np.float64))[..., 0]
        k = np.arange(fft_size)
        steer = np.exp(-2j * np.pi * np.outer(self.delay_samples, k) / fft_size)
        return g @ steer


def channel_create(cfg: ChannelConfig, sample_rate: float,
                   rng: np.random.Generator | None = None) -> ChannelState:
    if sample_rate <= 0:
        raise ConfigError("sample rate must be positive")
    if rng is None:
        rng = np.random.Generator(np.random.Philox(cfg.seed))
    return ChannelState(cfg, sample_rate, rng)


def channel_apply(state: ChannelState, wave: Waveform) -> Waveform:
    """Time-varying tapped-delay-line convolution; advances the state."""
    if int(round(wave.sample_rate)) != int(round(state.sample_rate)):
        raise ValueError(
            f"waveform rate {wave.sample_rate} does not match channel rate {state.sample_rate}"
        )
    x = wave.samples[0]
    n = x.shape[0]
    max_d = int(state.delay_samples.max())
    buf = np.concatenate([state.tail, x]) if max_d else x
    gains = state.gains_interpolated(n)
    out = np.zeros((state.cfg.n_rx, n), dtype=np.complex128)
    for p in range(state.n_taps):
        d = int(state.delay_samples[p])
        delayed = buf[max_d - d : max_d - d + n]
        out += gains[:, p, :] * delayed[None, :]
    if max_d:
        state.tail = buf[-max_d:].copy()
    state.t_samples += n
    return Waveform(out, wave.sample_rate)


def add_awgn(wave: Waveform, snr_db, signal_power_ref: float,
             rng: np.random.Generator) -> Waveform:
    """Complex white noise at the given SNR; None or +inf bypasses."""
    if snr_db is None or np.isinf(snr_db):
        return Waveform(wave.samples.copy(), wave.sample_rate)
    if signal_power_ref <= 0:
        raise ValueError("signal power reference must be positive")
    nv = signal_power_ref / 10.0 ** (float(snr_db) / 10.0)
    shape = wave.samples.shape
    noise = rng.normal(0.0, np.sqrt(nv / 2.0), shape) + 1j * rng.normal(
        0.0, np.sqrt(nv / 2.0), shape
    )
    return Waveform(wave.samples + noise, wave.sample_rate)
