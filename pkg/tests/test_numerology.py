"""Frozen-value and closure tests for the timing/geometry layer."""

import fractions

import pytest

from v2xsim.numerology import (
    KAPPA,
    T_C,
    TC_PER_MS,
    ConfigError,
    FrameGeometry,
    Numerology,
    cp_duration,
    cp_samples,
    grid_geometry,
    long_cp_symbol_indices,
    prb_width_khz,
    scs_khz,
    slot_structure,
    useful_samples_tc,
)


def test_base_time_units():
    assert KAPPA == 64
    assert T_C == pytest.approx(1.0 / (480e3 * 4096))
    assert TC_PER_MS == 1_966_080


@pytest.mark.parametrize("mu,expected", [(0, 15), (1, 30), (2, 60), (3, 120)])
def test_subcarrier_spacing(mu, expected):
    assert scs_khz(mu) == expected
    assert prb_width_khz(mu) == 12 * expected


@pytest.mark.parametrize("mu,slots,duration", [(0, 1, 1.0), (1, 2, 0.5), (2, 4, 0.25), (3, 8, 0.125)])
def test_slot_structure(mu, slots, duration):
    assert slot_structure(mu) == (slots, pytest.approx(duration))


@pytest.mark.parametrize("mu,expected", [(0, {0, 7}), (1, {0, 14}), (2, {0, 28}), (3, {0, 56})])
def test_long_cp_positions(mu, expected):
    assert long_cp_symbol_indices(mu) == frozenset(expected)


def test_cp_sample_counts_in_tc():
    # the three hand-evaluated anchor cases
    assert cp_samples(Numerology(0), 0) == 160 * KAPPA  # 10240
    assert cp_samples(Numerology(0), 1) == 144 * KAPPA  # 9216
    assert cp_samples(Numerology(2, cp="extended"), 3) == 8192
    # long CP recurs at the first symbol of each half-subframe
    assert cp_samples(Numerology(1), 14) == 144 * KAPPA // 2 + 16 * KAPPA
    assert cp_samples(Numerology(1), 1) == 144 * KAPPA // 2


def test_cp_durations_microseconds():
    assert cp_duration(Numerology(0), 0) * 1e6 == pytest.approx(5.2083, abs=1e-4)
    assert cp_duration(Numerology(0), 1) * 1e6 == pytest.approx(4.6875, abs=1e-4)
    assert cp_duration(Numerology(2, cp="extended"), 0) * 1e6 == pytest.approx(4.1667, abs=1e-4)
    assert cp_duration(Numerology(3), 1) * 1e6 == pytest.approx(0.586, abs=1e-3)


@pytest.mark.parametrize("mu", [0, 1, 2, 3])
def test_subframe_closure_normal_cp(mu):
    num = Numerology(mu)
    total = sum(cp_samples(num, l) + useful_samples_tc(mu) for l in range(num.symbols_per_subframe))
    assert total == TC_PER_MS


def test_subframe_closure_extended_cp():
    num = Numerology(2, cp="extended")
    total = sum(cp_samples(num, l) + useful_samples_tc(2) for l in range(num.symbols_per_subframe))
    assert total == TC_PER_MS


def test_symbol_duration_is_exact_rational():
    # useful symbol time is exactly 1/SCS in exact arithmetic
    for mu in (0, 1, 2, 3):
        t_sym = fractions.Fraction(useful_samples_tc(mu)) * fractions.Fraction(1, 480_000 * 4096)
        assert t_sym == fractions.Fraction(1, 15_000 * 2**mu)


def test_numerology_validation():
    with pytest.raises(ConfigError):
        Numerology(4)
    with pytest.raises(ConfigError):
        Numerology(1, cp="extended")
    with pytest.raises(ConfigError):
        Numerology(0, cp="bogus")
    assert Numerology(2, cp="extended").symbols_per_slot == 12


@pytest.mark.parametrize(
    "mode,mu,n_prb",
    [("LTE", 0, 100), ("NR", 0, 106), ("NR", 1, 51), ("NR", 2, 24), ("NR", 3, 11)],
)
def test_prb_counts_20mhz(mode, mu, n_prb):
    geo = grid_geometry(20_000_000, Numerology(mu), mode=mode)
    assert geo.n_prb == n_prb
    assert geo.n_subcarriers == 12 * n_prb


def test_common_sample_rate_all_numerologies():
    # FFT sizing lands every 20 MHz configuration on the same rate
    for mode, mu in [("LTE", 0), ("NR", 0), ("NR", 1), ("NR", 2), ("NR", 3)]:
        geo = grid_geometry(20_000_000, Numerology(mu), mode=mode)
        assert geo.sample_rate == 30_720_000


@pytest.mark.parametrize(
    "mu,cp,first,others",
    [(0, "normal", 160, 144), (1, "normal", 88, 72), (2, "normal", 52, 36), (3, "normal", 34, 18)],
)
def test_cp_samples_at_30p72(mu, cp, first, others):
    geo = grid_geometry(20_000_000, Numerology(mu, cp=cp))
    assert geo.cp_samples_at_rate(0) == first
    assert geo.cp_samples_at_rate(1) == others
    long_positions = geo.long_cp_symbols
    for l in range(geo.symbols_per_subframe):
        expected = first if l in long_positions else others
        assert geo.cp_samples_at_rate(l) == expected


def test_extended_cp_samples_at_rate():
    geo = grid_geometry(20_000_000, Numerology(2, cp="extended"))
    for l in range(geo.symbols_per_subframe):
        assert geo.cp_samples_at_rate(l) == 128


@pytest.mark.parametrize("mode,mu", [("LTE", 0), ("NR", 0), ("NR", 1), ("NR", 2), ("NR", 3)])
def test_subframe_sample_count(mode, mu):
    geo = grid_geometry(20_000_000, Numerology(mu), mode=mode)
    layout = geo.symbol_sample_layout()
    assert len(layout) == geo.symbols_per_subframe
    assert sum(cp + fft for cp, fft in layout) == 30720
    assert geo.subframe_samples == 30720


def test_grid_geometry_rejects_unknown_combinations():
    with pytest.raises(ConfigError):
        grid_geometry(20_000_000, Numerology(1), mode="LTE")
    with pytest.raises(ConfigError):
        grid_geometry(7_000_000, Numerology(0))


def test_cp_symbol_index_bounds():
    num = Numerology(1)
    with pytest.raises(ValueError):
        cp_samples(num, -1)
    with pytest.raises(ValueError):
        cp_samples(num, num.symbols_per_subframe)
