"""Campaign configuration: defaults, key-value parsing, validation.

The config file is flat UTF-8 text, one `key = value` per line, `#`
comments allowed. Any subset of keys may be given; omitted keys take
the reference defaults (5.9 GHz carrier, 20 MHz, SNR 11..15 dB, MCS 13,
1800-bit blocks, EVA fading at 180 Hz, 2 receive antennas). Errors are
reported with the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .channel import PROFILES, ChannelConfig
from .coding.turbo import VALID_BLOCK_SIZES
from .link import modulation_for_mcs
from .modem.grid import DATA_PRB
from .numerology import ConfigError, FrameGeometry, Numerology, grid_geometry, scs_khz

SNR_GRID_DEFAULT = (11.0, 12.0, 13.0, 14.0, 15.0)


@dataclass(frozen=True)
class SimConfig:
    mode: str = "NR"
    mu: int = 1
    cp_type: str = "normal"
    bandwidth_hz: int = 20_000_000
    carrier_hz: float = 5.9e9
    n_subframes: int = 2000
    snr_grid: tuple[float, ...] = SNR_GRID_DEFAULT
    mcs_index: int = 13
    tbs_bits: int = 1800
    data_n_prb: int = DATA_PRB
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    seed: int = 1
    label: str = ""

    @property
    def modulation(self) -> str:
        return modulation_for_mcs(self.mcs_index)

    def numerology(self) -> Numerology:
        return Numerology(self.mu, self.cp_type)

    def geometry(self) -> FrameGeometry:
        return grid_geometry(self.bandwidth_hz, self.numerology(), self.mode)

    def curve_label(self) -> str:
        if self.label:
            return self.label
        return f"{self.mode}-{scs_khz(self.mu)}kHz"


def validate_config(cfg: SimConfig) -> SimConfig:
    """Raise ConfigError on any invariant violation; returns cfg unchanged."""
    if cfg.mode not in ("LTE", "NR"):
        raise ConfigError(f"mode must be LTE or NR, got {cfg.mode!r}")
    if not cfg.snr_grid:
        raise ConfigError("snr_db list is empty")
    if any(b <= a for a, b in zip(cfg.snr_grid, cfg.snr_grid[1:])):
        raise ConfigError("snr_db values must be strictly increasing")
    if cfg.n_subframes < 1:
        raise ConfigError(f"n_subframes must be >= 1, got {cfg.n_subframes}")
    if not 0 <= cfg.mcs_index <= 28:
        raise ConfigError(f"mcs_index must be in 0..28, got {cfg.mcs_index}")
    if cfg.tbs_bits + 24 not in VALID_BLOCK_SIZES:
        raise ConfigError(
            f"tbs_bits {cfg.tbs_bits} unsupported: payload plus 24-bit checksum "
            "must land on a turbo block size (e.g. 1800)"
        )
    if cfg.data_n_prb != DATA_PRB:
        raise ConfigError(
            f"data allocation is fixed at {DATA_PRB} resource blocks, got {cfg.data_n_prb}"
        )
    if cfg.carrier_hz <= 0:
        raise ConfigError("carrier_hz must be positive")
    if cfg.seed < 0:
        raise ConfigError("seed must be non-negative")
    # numerology / bandwidth / mode consistency, including cp restrictions
    cfg.geometry()
    return cfg


def _parse_snr_list(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.replace(",", " ").split()]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


# key -> (target field path, converter)
_KEYS = {
    "mode": ("mode", lambda v: v.upper()),
    "mu": ("mu", int),
    "cp": ("cp_type", lambda v: v.lower()),
    "bandwidth_hz": ("bandwidth_hz", lambda v: int(float(v))),
    "carrier_hz": ("carrier_hz", float),
    "n_subframes": ("n_subframes", int),
    "snr_db": ("snr_grid", _parse_snr_list),
    "mcs_index": ("mcs_index", int),
    "tbs_bits": ("tbs_bits", int),
    "data_n_prb": ("data_n_prb", int),
    "channel": ("channel.profile", str),
    "doppler_hz": ("channel.max_doppler_hz", float),
    "n_rx": ("channel.n_rx", int),
    "seed": ("seed", int),
    "label": ("label", str),
}


def parse_config(text: str) -> SimConfig:
    """Build a validated SimConfig from key-value text (defaults for the rest)."""
    values: dict[str, object] = {}
    chan: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in lines:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first on line {lines[key]})")
        lines[key] = lineno
        target, conv = _KEYS[key]
        try:
            parsed = conv(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
        if target.startswith("channel."):
            chan[target.split(".", 1)[1]] = parsed
        else:
            values[target] = parsed

    if "profile" in chan and chan["profile"] not in PROFILES:
        raise ConfigError(
            f"line {lines['channel']}: channel must be one of {', '.join(PROFILES)}"
        )
    try:
        channel = replace(ChannelConfig(), **chan)
    except ValueError as exc:
        key = "doppler_hz" if "doppler" in str(exc) else "n_rx"
        raise ConfigError(f"line {lines.get(key, '?')}: {exc}") from exc
    cfg = SimConfig(channel=channel, **values)
    try:
        return validate_config(cfg)
    except ConfigError as exc:
        anchor = _anchor_line(str(exc), lines)
        if anchor is not None:
            raise ConfigError(f"line {anchor}: {exc}") from None
        raise


_ANCHOR_TOKENS = [
    ("numerology index", ["mu"]),
    ("extended cp", ["cp", "mu"]),
    ("cp must be", ["cp"]),
    ("lte grid", ["mu", "mode"]),
    ("prb configuration", ["bandwidth_hz", "mu", "mode"]),
    ("mode must be", ["mode"]),
    ("snr_db", ["snr_db"]),
    ("n_subframes", ["n_subframes"]),
    ("mcs_index", ["mcs_index"]),
    ("tbs_bits", ["tbs_bits"]),
    ("data allocation", ["data_n_prb"]),
    ("carrier_hz", ["carrier_hz"]),
    ("seed", ["seed"]),
]


def _anchor_line(message: str, lines: dict[str, int]) -> int | None:
    """Best-effort association of a validation message with a config line."""
    low = message.lower()
    for token, keys in _ANCHOR_TOKENS:
        if token in low:
            for key in keys:
                if key in lines:
                    return lines[key]
    return None


def load_config(path: str) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
