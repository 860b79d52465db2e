"""Frame-structure and cyclic-prefix geometry for scalable subcarrier spacings.

Everything time-related is computed as an exact integer count of the basic
time unit T_c; conversion to seconds happens only at presentation
boundaries, so the 1 ms subframe closure holds without floating-point
error.
"""

from __future__ import annotations

from dataclasses import dataclass

KAPPA = 64                            # ratio of LTE basic time to NR basic time
T_C = 1.0 / (480_000 * 4096)          # NR basic time unit [s]
T_S = KAPPA * T_C                     # LTE basic time unit [s]
TC_PER_MS = (480_000 * 4096) // 1000  # T_c units in one millisecond (exact)

SUBCARRIERS_PER_PRB = 12
SYMBOLS_PER_SLOT_NORMAL = 14
SYMBOLS_PER_SLOT_EXTENDED = 12

VALID_MU = (0, 1, 2, 3)


class ConfigError(ValueError):
    """Raised for unsupported or inconsistent simulator configurations."""


@dataclass(frozen=True)
class TimeBase:
    """Fixed time-unit constants shared by every numerology."""

    kappa: int = KAPPA
    t_c: float = T_C
    t_s: float = T_S


TIME_BASE = TimeBase()


def _check_mu(mu: int) -> None:
    if mu not in VALID_MU:
        raise ConfigError(f"numerology index must be in {VALID_MU}, got {mu!r}")


def scs_khz(mu: int) -> int:
    """Subcarrier spacing in kHz: 15 kHz scaled by 2**mu."""
    _check_mu(mu)
    return 15 * 2**mu


def prb_width_khz(mu: int) -> int:
    """Width of one physical resource block (12 subcarriers) in kHz."""
    return SUBCARRIERS_PER_PRB * scs_khz(mu)


def slot_structure(mu: int) -> tuple[int, float]:
    """Return (slots per 1 ms subframe, slot duration in ms)."""
    _check_mu(mu)
    return 2**mu, 1.0 / 2**mu


def long_cp_symbol_indices(mu: int) -> frozenset[int]:
    """Per-subframe indices of the two symbols that carry the longer CP.

    With the normal CP the first symbol of the subframe and the first
    symbol of its second half get 16*kappa extra samples so that each
    0.5 ms half closes exactly.
    """
    _check_mu(mu)
    return frozenset((0, 7 * 2**mu))


@dataclass(frozen=True)
class Numerology:
    """Subcarrier-spacing index plus cyclic-prefix type.

    mu 0..3 maps to 15/30/60/120 kHz. The extended CP exists only at
    60 kHz (mu=2); mu=3 is simulatable but flagged as outside the FR1
    applicability range.
    """

    mu: int
    cp: str = "normal"

    def __post_init__(self) -> None:
        _check_mu(self.mu)
        if self.cp not in ("normal", "extended"):
            raise ConfigError(f"cp must be 'normal' or 'extended', got {self.cp!r}")
        if self.cp == "extended" and self.mu != 2:
            raise ConfigError("extended CP is only defined for the 60 kHz spacing (mu=2)")

    @property
    def scs_khz(self) -> int:
        return scs_khz(self.mu)

    @property
    def slots_per_subframe(self) -> int:
        return 2**self.mu

    @property
    def symbols_per_slot(self) -> int:
        return SYMBOLS_PER_SLOT_NORMAL if self.cp == "normal" else SYMBOLS_PER_SLOT_EXTENDED

    @property
    def symbols_per_subframe(self) -> int:
        return self.symbols_per_slot * self.slots_per_subframe

    @property
    def fr1_applicable(self) -> bool:
        """120 kHz is a millimetre-wave spacing; everything below fits FR1."""
        return self.mu <= 2


def useful_samples_tc(mu: int) -> int:
    """Useful (non-CP) duration of one OFDM symbol in T_c units."""
    _check_mu(mu)
    return (2048 * KAPPA) >> mu


def cp_samples(num: Numerology, l: int) -> int:
    """Cyclic-prefix length of subframe symbol ``l`` in T_c units.

    Extended CP: 512*kappa*2^-mu for every symbol. Normal CP:
    144*kappa*2^-mu, plus 16*kappa for the two long-CP symbols.
    """
    if not 0 <= l < num.symbols_per_subframe:
        raise ValueError(f"symbol index {l} outside subframe of {num.symbols_per_subframe} symbols")
    if num.cp == "extended":
        return (512 * KAPPA) >> num.mu
    base = (144 * KAPPA) >> num.mu
    if l in long_cp_symbol_indices(num.mu):
        return base + 16 * KAPPA
    return base


def cp_duration(num: Numerology, l: int) -> float:
    """Cyclic-prefix duration of subframe symbol ``l`` in seconds."""
    return cp_samples(num, l) * T_C


# PRB counts for the supported (bandwidth, mode, spacing) combinations.
# 20 MHz: the LTE grid keeps 100 PRBs while the NR grid packs 106 at
# 15 kHz; wider spacings follow the standard transmission-bandwidth
# configurations with a comparable guard-band ratio.
_PRB_TABLE: dict[tuple[int, str, int], int] = {
    (20_000_000, "LTE", 0): 100,
    (20_000_000, "NR", 0): 106,
    (20_000_000, "NR", 1): 51,
    (20_000_000, "NR", 2): 24,
    (20_000_000, "NR", 3): 11,
    (10_000_000, "LTE", 0): 50,
    (10_000_000, "NR", 0): 52,
    (10_000_000, "NR", 1): 24,
    (10_000_000, "NR", 2): 11,
}


@dataclass(frozen=True)
class FrameGeometry:
    """Resolved per-subframe grid geometry for one (bandwidth, numerology, mode)."""

    numerology: Numerology
    mode: str
    bandwidth_hz: int
    n_prb: int
    fft_size: int

    @property
    def mu(self) -> int:
        return self.numerology.mu

    @property
    def scs_khz(self) -> int:
        return self.numerology.scs_khz

    @property
    def n_subcarriers(self) -> int:
        return SUBCARRIERS_PER_PRB * self.n_prb

    @property
    def sample_rate(self) -> int:
        return self.fft_size * self.scs_khz * 1000

    @property
    def slots_per_subframe(self) -> int:
        return self.numerology.slots_per_subframe

    @property
    def symbols_per_slot(self) -> int:
        return self.numerology.symbols_per_slot

    @property
    def symbols_per_subframe(self) -> int:
        return self.numerology.symbols_per_subframe

    @property
    def long_cp_symbols(self) -> frozenset[int]:
        if self.numerology.cp == "extended":
            return frozenset()
        return long_cp_symbol_indices(self.mu)

    def cp_samples_at_rate(self, l: int) -> int:
        """CP length of symbol ``l`` in samples at the working sample rate."""
        num = cp_samples(self.numerology, l) * self.sample_rate
        den = 480_000 * 4096
        if num % den:
            raise ConfigError(
                f"CP of symbol {l} is not an integer number of samples at {self.sample_rate} Hz"
            )
        return num // den

    def symbol_sample_layout(self) -> list[tuple[int, int]]:
        """Per-symbol (cp_samples, useful_samples) at the working sample rate."""
        return [(self.cp_samples_at_rate(l), self.fft_size) for l in range(self.symbols_per_subframe)]

    @property
    def subframe_samples(self) -> int:
        return sum(cp + useful for cp, useful in self.symbol_sample_layout())


def grid_geometry(bandwidth_hz: float, num: Numerology, mode: str = "NR") -> FrameGeometry:
    """Resolve the full grid geometry for a bandwidth / numerology / mode triple.

    The FFT is the smallest power of two covering the active subcarriers
    and the sample rate follows as fft_size * scs.
    """
    mode = mode.upper()
    if mode not in ("LTE", "NR"):
        raise ConfigError(f"mode must be 'LTE' or 'NR', got {mode!r}")
    if mode == "LTE" and num.mu != 0:
        raise ConfigError("the LTE grid only exists at 15 kHz spacing (mu=0)")
    key = (int(round(bandwidth_hz)), mode, num.mu)
    if key not in _PRB_TABLE:
        supported = sorted({bw for bw, _, _ in _PRB_TABLE})
        raise ConfigError(
            f"no PRB configuration for {bandwidth_hz/1e6:g} MHz / {num.scs_khz} kHz / {mode}; "
            f"supported bandwidths: {', '.join(f'{bw/1e6:g} MHz' for bw in supported)}"
        )
    n_prb = _PRB_TABLE[key]
    n_sc = SUBCARRIERS_PER_PRB * n_prb
    fft_size = 1
    while fft_size < n_sc:
        fft_size *= 2
    return FrameGeometry(
        numerology=num,
        mode=mode,
        bandwidth_hz=int(round(bandwidth_hz)),
        n_prb=n_prb,
        fft_size=fft_size,
    )
