"""Turbo code tests: straight-line two-encoder oracle, interleaver laws."""

import numpy as np
import pytest

from v2xsim.coding import (
    QPP_PARAMS,
    VALID_BLOCK_SIZES,
    crc_attach,
    qpp_permutation,
    turbo_decode,
    turbo_encode,
)

G_FEEDBACK = (1, 0, 1, 1)  # 1 + D^2 + D^3
G_PARITY = (1, 1, 0, 1)  # 1 + D + D^3


def rsc_oracle(bits):
    """Single constituent encoder written against the polynomial taps."""
    mem = [0, 0, 0]
    parity = []
    for c in bits:
        fb = (G_FEEDBACK[1] * mem[0] + G_FEEDBACK[2] * mem[1] + G_FEEDBACK[3] * mem[2]) % 2
        a = (int(c) + fb) % 2
        z = (G_PARITY[0] * a + G_PARITY[1] * mem[0] + G_PARITY[2] * mem[1] + G_PARITY[3] * mem[2]) % 2
        parity.append(z)
        mem = [a, mem[0], mem[1]]
    tail_in, tail_par = [], []
    for _ in range(3):
        fb = (G_FEEDBACK[1] * mem[0] + G_FEEDBACK[2] * mem[1] + G_FEEDBACK[3] * mem[2]) % 2
        c = fb  # cancels the feedback, drains the register
        a = 0
        z = (G_PARITY[1] * mem[0] + G_PARITY[2] * mem[1] + G_PARITY[3] * mem[2]) % 2
        tail_in.append(c)
        tail_par.append(z)
        mem = [a, mem[0], mem[1]]
    assert mem == [0, 0, 0]
    return parity, tail_in, tail_par


def encode_oracle(bits):
    k = len(bits)
    f1, f2 = QPP_PARAMS[k]
    perm = [(f1 * i + f2 * i * i) % k for i in range(k)]
    par1, t1s, t1p = rsc_oracle(bits)
    par2, t2s, t2p = rsc_oracle([bits[p] for p in perm])
    out = []
    for i in range(k):
        out += [int(bits[i]), par1[i], par2[i]]
    out += [t1s[0], t1p[0], t1s[1], t1p[1], t1s[2], t1p[2]]
    out += [t2s[0], t2p[0], t2s[1], t2p[1], t2s[2], t2p[2]]
    return np.array(out, dtype=np.uint8)


def test_all_interleavers_are_bijective():
    for k in VALID_BLOCK_SIZES:
        perm = qpp_permutation(k)
        assert np.unique(perm).shape[0] == k


def test_block_size_set():
    assert VALID_BLOCK_SIZES[0] == 40
    assert VALID_BLOCK_SIZES[-1] == 6144
    assert len(VALID_BLOCK_SIZES) == 188
    assert 1824 in VALID_BLOCK_SIZES


def test_encoder_matches_oracle():
    rng = np.random.default_rng(31)
    sizes = [40, 48, 64, 104, 512, 1824]
    for k in sizes:
        for _ in range(100 // len(sizes) + 1):
            bits = rng.integers(0, 2, k).astype(np.uint8)
            assert np.array_equal(turbo_encode(bits), encode_oracle(bits))


def test_output_length():
    bits = np.zeros(1824, dtype=np.uint8)
    assert turbo_encode(bits).shape == (3 * 1824 + 12,)


def test_systematic_stream_is_input():
    rng = np.random.default_rng(37)
    bits = rng.integers(0, 2, 128).astype(np.uint8)
    enc = turbo_encode(bits)
    assert np.array_equal(enc[0 : 3 * 128 : 3], bits)


def test_noiseless_roundtrip_every_block_size():
    rng = np.random.default_rng(41)
    for k in VALID_BLOCK_SIZES:
        bits = rng.integers(0, 2, k).astype(np.uint8)
        llr = 4.0 * (1.0 - 2.0 * turbo_encode(bits).astype(float))
        dec, _ = turbo_decode(llr, max_iterations=2)
        assert np.array_equal(dec, bits), f"k={k}"


def test_crc_early_stop():
    rng = np.random.default_rng(43)
    payload = rng.integers(0, 2, 1800).astype(np.uint8)
    block = crc_attach(payload, "crc24a")
    llr = 4.0 * (1.0 - 2.0 * turbo_encode(block).astype(float))
    dec, iters = turbo_decode(llr, crc="crc24a")
    assert np.array_equal(dec, block)
    assert iters == 1


def test_decode_with_noise():
    # 1824-bit block over BPSK/AWGN around 0.5 dB Es/N0: the iterative
    # decoder should recover the block in the clear majority of trials
    rng = np.random.default_rng(47)
    sigma = 0.94
    ok = 0
    trials = 30
    for _ in range(trials):
        payload = rng.integers(0, 2, 1800).astype(np.uint8)
        block = crc_attach(payload, "crc24a")
        tx = 1.0 - 2.0 * turbo_encode(block).astype(float)
        rx = tx + rng.normal(0.0, sigma, tx.shape)
        llr = 2.0 * rx / sigma**2
        dec, _ = turbo_decode(llr, crc="crc24a")
        ok += int(np.array_equal(dec, block))
    assert ok >= trials - 3


def test_rejects_unsupported_sizes():
    with pytest.raises(ValueError):
        turbo_encode(np.zeros(41, dtype=np.uint8))
    with pytest.raises(ValueError):
        turbo_decode(np.zeros(3 * 41 + 12))
