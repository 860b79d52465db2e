"""Bit-level processing: CRC, channel coding, rate matching, scrambling."""

from .convolutional import conv_encode, viterbi_decode
from .crc import crc_attach, crc_bits, crc_check
from .ratematch import rate_match, rate_recover
from .scrambling import gold_sequence, scramble
from .transport import (
    MAX_TB_BITS,
    SCI_BITS,
    SciMessage,
    TransportBlock,
    concatenate_code_blocks,
    segment_transport_block,
)
from .turbo import QPP_PARAMS, VALID_BLOCK_SIZES, qpp_permutation, turbo_decode, turbo_encode

__all__ = [
    "MAX_TB_BITS",
    "QPP_PARAMS",
    "SCI_BITS",
    "SciMessage",
    "TransportBlock",
    "VALID_BLOCK_SIZES",
    "concatenate_code_blocks",
    "conv_encode",
    "crc_attach",
    "crc_bits",
    "crc_check",
    "gold_sequence",
    "qpp_permutation",
    "rate_match",
    "rate_recover",
    "scramble",
    "segment_transport_block",
    "turbo_decode",
    "turbo_encode",
    "viterbi_decode",
]
