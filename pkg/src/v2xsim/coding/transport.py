"""Control message packing and transport-block segmentation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crc import crc_attach
from .turbo import VALID_BLOCK_SIZES

SCI_BITS = 32
_MCS_BITS = 5
_RIV_BITS = 13
_GROUP_BITS = 8

MAX_TB_BITS = VALID_BLOCK_SIZES[-1] - 24


def _field_bits(value: int, width: int, name: str) -> list[int]:
    if not 0 <= value < (1 << width):
        raise ValueError(f"{name} must fit in {width} bits, got {value}")
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


@dataclass(frozen=True)
class SciMessage:
    """Control payload: modulation/coding index, resource indication, group id.

    Packs to a fixed 32-bit field layout (5 + 13 + 8 bits, zero padded).
    """

    mcs_index: int
    resource_indication: int
    group_destination: int

    def to_bits(self) -> np.ndarray:
        bits = (
            _field_bits(self.mcs_index, _MCS_BITS, "mcs_index")
            + _field_bits(self.resource_indication, _RIV_BITS, "resource_indication")
            + _field_bits(self.group_destination, _GROUP_BITS, "group_destination")
        )
        bits += [0] * (SCI_BITS - len(bits))
        return np.array(bits, dtype=np.uint8)

    @classmethod
    def from_bits(cls, bits) -> "SciMessage":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.shape[0] != SCI_BITS:
            raise ValueError(f"control payload must be {SCI_BITS} bits")

        def take(offset: int, width: int) -> int:
            val = 0
            for b in arr[offset : offset + width]:
                val = (val << 1) | int(b)
            return val

        return cls(
            mcs_index=take(0, _MCS_BITS),
            resource_indication=take(_MCS_BITS, _RIV_BITS),
            group_destination=take(_MCS_BITS + _RIV_BITS, _GROUP_BITS),
        )


@dataclass(frozen=True)
class TransportBlock:
    bits: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.bits, dtype=np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    def __len__(self) -> int:
        return int(self.bits.shape[0])


def segment_transport_block(tb: TransportBlock) -> list[np.ndarray]:
    """Attach the 24-bit checksum and emit code blocks (one, at our sizes).

    The payload length plus checksum must land on a supported turbo
    block size; filler insertion is out of scope, so other lengths are
    rejected outright.
    """
    n = len(tb)
    if n > MAX_TB_BITS:
        raise ValueError(f"transport block of {n} bits exceeds maximum {MAX_TB_BITS}")
    if n + 24 not in VALID_BLOCK_SIZES:
        raise ValueError(
            f"transport block of {n} bits + 24-bit checksum is not a supported code block size"
        )
    return [crc_attach(tb.bits, "crc24a")]


def concatenate_code_blocks(blocks: list[np.ndarray]) -> TransportBlock:
    """Inverse of segmentation: strip the checksum and rebuild the block."""
    if len(blocks) != 1:
        raise ValueError("expected exactly one code block")
    return TransportBlock(np.asarray(blocks[0], dtype=np.uint8)[:-24])
