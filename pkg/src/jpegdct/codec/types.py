"""Value types shared across the codec: tables, frame layout, parsed scans."""

from dataclasses import dataclass, field

import numpy as np

from . import tables
from .errors import BadTableSlot


@dataclass(frozen=True)
class QuantTable:
    """64 quantization steps in zigzag order, slot id 0-3."""

    table_id: int
    steps: np.ndarray  # (64,) int32, zigzag order

    def __post_init__(self):
        steps = np.asarray(self.steps, dtype=np.int32).reshape(64)
        object.__setattr__(self, "steps", steps)
        if not 0 <= self.table_id <= 3:
            raise BadTableSlot(f"quantization table slot {self.table_id}")
        if steps.min() < 1 or steps.max() > 255:
            raise BadTableSlot("quantization steps must be in [1, 255]")

    @property
    def steps_natural(self) -> np.ndarray:
        """Steps as an 8x8 block in natural frequency order."""
        return tables.zigzag_to_natural_flat(self.steps).reshape(8, 8)

    def is_unit(self) -> bool:
        return bool(np.all(self.steps == 1))


@dataclass(frozen=True)
class HuffTable:
    """Canonical Huffman table definition (DHT payload form)."""

    table_class: str  # "dc" | "ac"
    table_id: int
    bits: tuple  # 16 counts of codes per code length 1..16
    huffval: tuple  # symbols, len == sum(bits)

    def __post_init__(self):
        if self.table_class not in ("dc", "ac"):
            raise BadTableSlot(f"huffman table class {self.table_class!r}")
        if not 0 <= self.table_id <= 3:
            raise BadTableSlot(f"huffman table slot {self.table_id}")
        bits = tuple(int(b) for b in self.bits)
        huffval = tuple(int(v) for v in self.huffval)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "huffval", huffval)
        if len(bits) != 16:
            raise BadTableSlot("huffman bits must have 16 entries")
        if len(huffval) != sum(bits):
            raise BadTableSlot("huffman value count disagrees with bits")


@dataclass(frozen=True)
class Component:
    """One frame component: id, sampling factors, quant table slot."""

    component_id: int
    h: int
    v: int
    quant_id: int


@dataclass(frozen=True)
class FrameInfo:
    width: int
    height: int
    precision: int
    components: tuple  # of Component

    @property
    def h_max(self) -> int:
        return max(c.h for c in self.components)

    @property
    def v_max(self) -> int:
        return max(c.v for c in self.components)

    def component_size(self, comp: Component) -> tuple:
        """(width, height) of a component's sample array."""
        w = -(-self.width * comp.h // self.h_max)
        h = -(-self.height * comp.v // self.v_max)
        return w, h


@dataclass(frozen=True)
class ScanComponent:
    """Per-scan table assignment for one component."""

    component_id: int
    dc_id: int
    ac_id: int


@dataclass
class CompressedImage:
    """Parsed headers plus the raw entropy-coded payload of one scan."""

    frame: FrameInfo
    quant_tables: dict  # slot -> QuantTable
    dc_tables: dict  # slot -> HuffTable
    ac_tables: dict  # slot -> HuffTable
    restart_interval: int
    scan: tuple  # of ScanComponent, in scan order
    entropy_data: bytes

    def quant_table_for(self, comp: Component) -> QuantTable:
        try:
            return self.quant_tables[comp.quant_id]
        except KeyError:
            raise BadTableSlot(
                f"component {comp.component_id} references missing "
                f"quantization table {comp.quant_id}"
            ) from None


@dataclass
class CoefficientGrid:
    """Per-component quantized (or de-quantized) DCT coefficient blocks.

    ``blocks`` has shape (blocks_high, blocks_wide, 8, 8) with each block in
    natural frequency order and DC prediction already undone.  The grid spans
    the padded MCU extent; cropping to the true image size happens later.
    """

    component_id: int
    blocks_wide: int
    blocks_high: int
    blocks: np.ndarray  # int32 or int64
    quant_id: int = field(default=0)

    def __post_init__(self):
        expected = (self.blocks_high, self.blocks_wide, 8, 8)
        if self.blocks.shape != expected:
            raise ValueError(
                f"blocks shape {self.blocks.shape} != {expected}"
            )
