"""Gray-mapped constellations and max-log soft demapping.

LLR convention: positive favours bit 0, matching the decoders.
"""

from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)
_SQRT10 = np.sqrt(10.0)

BITS_PER_SYMBOL = {"QPSK": 2, "QAM16": 4}


def _check_order(order: str) -> int:
    if order not in BITS_PER_SYMBOL:
        raise ValueError(f"unknown modulation order {order!r}")
    return BITS_PER_SYMBOL[order]


def qam_map(bits, order: str) -> np.ndarray:
    """Bits to unit-average-power constellation points.

    QPSK: (b0, b1) -> ((1-2 b0) + j (1-2 b1)) / sqrt(2), so 00 lands on
    (1+j)/sqrt(2). 16QAM uses the Gray layout with I driven by (b0, b2)
    and Q by (b1, b3), amplitude set {1, 3} / sqrt(10).
    """
    q = _check_order(order)
    arr = np.asarray(bits)
    if arr.ndim != 1 or arr.shape[0] % q != 0:
        raise ValueError(f"bit count must be a multiple of {q} for {order}")
    b = arr.reshape(-1, q).astype(np.float64)
    if order == "QPSK":
        return ((1.0 - 2.0 * b[:, 0]) + 1j * (1.0 - 2.0 * b[:, 1])) / _SQRT2
    i = (1.0 - 2.0 * b[:, 0]) * (2.0 - (1.0 - 2.0 * b[:, 2]))
    qy = (1.0 - 2.0 * b[:, 1]) * (2.0 - (1.0 - 2.0 * b[:, 3]))
    return (i + 1j * qy) / _SQRT10


def _qam16_axis_llrs(y: np.ndarray, nv) -> tuple[np.ndarray, np.ndarray]:
    """Max-log LLRs for the (sign, magnitude) bit pair on one real axis."""
    a = 1.0 / _SQRT10
    # nearest points among {-3a,-a,a,3a}; distances expand to closed form
    d = np.stack([(y - p) ** 2 for p in (3 * a, a, -a, -3 * a)])
    # sign bit: 0 on the positive side (points 3a, a)
    l_sign = np.minimum(d[2], d[3]) - np.minimum(d[0], d[1])
    # magnitude bit: 0 on the inner points (amplitude a)
    l_mag = np.minimum(d[0], d[3]) - np.minimum(d[1], d[2])
    return l_sign / nv, l_mag / nv


def llr_demap(symbols, noise_var, order: str) -> np.ndarray:
    """Max-log LLRs, scaled by 1/noise_var; accepts per-symbol variances."""
    _check_order(order)
    y = np.asarray(symbols, dtype=np.complex128)
    nv = np.asarray(noise_var, dtype=np.float64)
    if np.any(nv <= 0):
        raise ValueError("noise variance must be positive")
    if order == "QPSK":
        # exact: LLR = 2*sqrt(2)*Re(y)/nv for b0, same with Im for b1
        out = np.empty(2 * y.shape[0])
        out[0::2] = 2.0 * _SQRT2 * y.real / nv
        out[1::2] = 2.0 * _SQRT2 * y.imag / nv
        return out
    li_sign, li_mag = _qam16_axis_llrs(y.real, nv)
    lq_sign, lq_mag = _qam16_axis_llrs(y.imag, nv)
    out = np.empty(4 * y.shape[0])
    out[0::4] = li_sign
    out[1::4] = lq_sign
    out[2::4] = li_mag
    out[3::4] = lq_mag
    return out


def constellation(order: str) -> np.ndarray:
    """All points indexed by their bit label (MSB first)."""
    q = _check_order(order)
    n = 1 << q
    labels = ((np.arange(n)[:, None] >> np.arange(q - 1, -1, -1)) & 1).astype(np.uint8)
    return qam_map(labels.reshape(-1), order)
