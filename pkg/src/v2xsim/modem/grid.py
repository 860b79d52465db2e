"""Resource-grid layout and mapping for the control and shared channels.

One transmission occupies the first 14 symbols of the subframe grid
regardless of numerology: 4 reference symbols at positions {2,5,8,11}
and 10 data-bearing symbols. The control channel spans 2 resource
blocks (240 elements over the 10 data symbols), the shared channel 8
blocks (960 elements), on adjacent subcarriers. Mapping is placement
only; anything outside the allocation stays zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..numerology import ConfigError, FrameGeometry

DMRS_SYMBOLS = (2, 5, 8, 11)
BURST_SYMBOLS = 14
DATA_SYMBOLS = tuple(l for l in range(BURST_SYMBOLS) if l not in DMRS_SYMBOLS)

CONTROL_PRB = 2
DATA_PRB = 8
CONTROL_RE = CONTROL_PRB * 12 * len(DATA_SYMBOLS)  # 240
DATA_RE = DATA_PRB * 12 * len(DATA_SYMBOLS)  # 960


@dataclass(frozen=True)
class Allocation:
    """Resource-block placement of the two channels within the grid."""

    control_prb_start: int
    data_prb_start: int

    @classmethod
    def adjacent(cls, control_prb_start: int) -> "Allocation":
        return cls(control_prb_start, control_prb_start + CONTROL_PRB)

    def control_subcarriers(self) -> np.ndarray:
        base = 12 * self.control_prb_start
        return np.arange(base, base + 12 * CONTROL_PRB)

    def data_subcarriers(self) -> np.ndarray:
        base = 12 * self.data_prb_start
        return np.arange(base, base + 12 * DATA_PRB)

    def check_fits(self, geometry: FrameGeometry) -> None:
        spans = [
            (self.control_prb_start, self.control_prb_start + CONTROL_PRB),
            (self.data_prb_start, self.data_prb_start + DATA_PRB),
        ]
        for lo, hi in spans:
            if lo < 0 or hi > geometry.n_prb:
                raise ConfigError(
                    f"allocation blocks [{lo},{hi}) exceed the {geometry.n_prb}-block grid"
                )
        c = set(range(*spans[0]))
        if c & set(range(*spans[1])):
            raise ConfigError("control and data allocations overlap")


@dataclass
class Dmrs:
    """Per-channel pilot sequences, repeated on each reference symbol."""

    control: np.ndarray
    data: np.ndarray


@dataclass
class ResourceGrid:
    cells: np.ndarray
    geometry: FrameGeometry
    allocation: Allocation | None = field(default=None)

    @classmethod
    def empty(cls, geometry: FrameGeometry, allocation: Allocation | None = None) -> "ResourceGrid":
        cells = np.zeros((geometry.n_subcarriers, geometry.symbols_per_subframe), dtype=np.complex128)
        return cls(cells, geometry, allocation)

    @property
    def n_subcarriers(self) -> int:
        return self.cells.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.cells.shape[1]


def map_subframe(control, data, dmrs: Dmrs, geometry: FrameGeometry,
                 allocation: Allocation) -> ResourceGrid:
    """Place control, data and pilots; every written cell is written once."""
    control = np.asarray(control, dtype=np.complex128)
    data = np.asarray(data, dtype=np.complex128)
    if control.shape != (CONTROL_RE,):
        raise ValueError(f"control channel carries {CONTROL_RE} symbols, got {control.shape}")
    if data.shape != (DATA_RE,):
        raise ValueError(f"data channel carries {DATA_RE} symbols, got {data.shape}")
    allocation.check_fits(geometry)
    if geometry.symbols_per_subframe < BURST_SYMBOLS:
        raise ConfigError("grid too short for a 14-symbol burst")
    csc = allocation.control_subcarriers()
    dsc = allocation.data_subcarriers()
    if dmrs.control.shape != csc.shape or dmrs.data.shape != dsc.shape:
        raise ValueError("pilot widths do not match the allocation")

    grid = ResourceGrid.empty(geometry, allocation)
    ctrl_blocks = control.reshape(len(DATA_SYMBOLS), len(csc))
    data_blocks = data.reshape(len(DATA_SYMBOLS), len(dsc))
    for i, l in enumerate(DATA_SYMBOLS):
        grid.cells[csc, l] = ctrl_blocks[i]
        grid.cells[dsc, l] = data_blocks[i]
    for l in DMRS_SYMBOLS:
        grid.cells[csc, l] = dmrs.control
        grid.cells[dsc, l] = dmrs.data
    return grid


def demap_subframe(grid: ResourceGrid) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`map_subframe` for the two modulated streams."""
    if grid.allocation is None:
        raise ValueError("grid carries no allocation")
    csc = grid.allocation.control_subcarriers()
    dsc = grid.allocation.data_subcarriers()
    control = np.concatenate([grid.cells[csc, l] for l in DATA_SYMBOLS])
    data = np.concatenate([grid.cells[dsc, l] for l in DATA_SYMBOLS])
    return control, data


def extract_pilots(grid: ResourceGrid, subcarriers: np.ndarray) -> np.ndarray:
    """Received cells at the reference symbols, shape (width, 4)."""
    return np.stack([grid.cells[subcarriers, l] for l in DMRS_SYMBOLS], axis=1)
