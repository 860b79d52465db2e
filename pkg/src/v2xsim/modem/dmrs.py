"""Demodulation reference signals: constant-amplitude base, cyclic shift."""

from __future__ import annotations

import numpy as np

ALLOWED_SHIFTS = (0, 3, 6, 9)

_BASE_ROOTS = {24: 23, 96: 89}  # largest prime under the width, coprime with it


def _zadoff_chu(width: int) -> np.ndarray:
    """Even-length constant-amplitude zero-autocorrelation chirp."""
    root = _BASE_ROOTS.get(width)
    if root is None:
        # fall back to the largest odd coprime below width
        root = width - 1
        while np.gcd(root, width) != 1:
            root -= 1
    k = np.arange(width)
    return np.exp(-1j * np.pi * root * k * k / width)


def dmrs_generate(width: int, shift: int) -> np.ndarray:
    """Pilot sequence for one reference symbol of the given width.

    The cyclic shift multiplies the base sequence by the phase ramp
    exp(j 2 pi shift k / 12), one full turn per resource block.
    """
    if shift not in ALLOWED_SHIFTS:
        raise ValueError(f"cyclic shift must be one of {ALLOWED_SHIFTS}, got {shift}")
    if width <= 0 or width % 12 != 0:
        raise ValueError("pilot width must be a positive multiple of 12 subcarriers")
    k = np.arange(width)
    return _zadoff_chu(width) * np.exp(2j * np.pi * shift * k / 12)
