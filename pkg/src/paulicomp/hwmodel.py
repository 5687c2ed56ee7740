"""Analytical cost model of the FPGA composer: memory footprint, PE cycles, DMA beats, PDP.

Per-entry widths for the PC and GF schemes and the fixed PS-PL overhead are
fitted constants, not measurements.
"""
from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import asdict, dataclass, fields, replace

from .composer import is_power_of_two
from .errors import InvalidPeCount

GB = 1e9

# bytes per stored entry
PC_ENTRY_BYTES = 12  # 64-bit column index + 32-bit value
GF_ENTRY_BYTES = 16
# calibrated to the n=3 execution-time anchor; PS-PL signaling dominates small n
DEFAULT_FIXED_OVERHEAD_S = 5.1e-6


class MemScheme(enum.Enum):
    PACOX = "pacox"
    PC = "pc"
    GF = "gf"


def memory_bytes(n: int, scheme: MemScheme) -> int:
    if not 1 <= n <= 64:
        raise ValueError(f"n must be in [1, 64], got {n}")
    size = 1 << n
    if scheme is MemScheme.PACOX:
        # n-bit index + 2-bit phase per entry, bit-packed
        return (size * (n + 2) + 7) // 8
    if scheme is MemScheme.PC:
        return size * PC_ENTRY_BYTES
    return size * GF_ENTRY_BYTES


def compute_cycles(n: int, n_pes: int) -> int:
    """One cycle per tuple per PE: ``sum_l ceil(2^l / N)``."""
    if not is_power_of_two(n_pes):
        raise InvalidPeCount(n_pes)
    return sum(-(-(1 << l) // n_pes) for l in range(n))


def transfer_beats(n: int, tuples_per_beat: int) -> int:
    if tuples_per_beat < 1:
        raise ValueError("tuples_per_beat must be >= 1")
    return -(-(1 << n) // tuples_per_beat)


def pdp(power_w: float, delay_s: float) -> float:
    if power_w < 0 or delay_s < 0:
        raise ValueError("power and delay must be non-negative")
    return power_w * delay_s


@dataclass(frozen=True)
class HwConfig:
    n_pes: int = 32
    freq_hz: float = 2.5e8
    dma_tuples_per_beat: int = 4
    bandwidth_bytes_per_s: float = 4e9
    fixed_overhead_s: float = DEFAULT_FIXED_OVERHEAD_S
    power_w: float = 0.96

    def __post_init__(self):
        if not is_power_of_two(self.n_pes):
            raise InvalidPeCount(self.n_pes)
        for f in fields(self):
            val = getattr(self, f.name)
            if val < 0 or (val == 0 and f.name != "fixed_overhead_s"):
                raise ValueError(f"{f.name} must be positive")

    def with_overrides(self, **kw) -> "HwConfig":
        types = {f.name: f.type for f in fields(self)}
        cast = {}
        for key, val in kw.items():
            if key not in types:
                raise KeyError(f"unknown HwConfig field {key!r}")
            cast[key] = int(float(val)) if types[key] in (int, "int") else float(val)
        return replace(self, **cast)


@dataclass(frozen=True)
class CostReport:
    n: int
    compute_cycles: int
    transfer_beats: int
    compute_time_s: float
    transfer_time_s: float
    total_time_s: float
    memory_bytes: int
    pdp_j: float

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @staticmethod
    def csv_header() -> list[str]:
        return [f.name for f in fields(CostReport)]

    def csv_row(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="").writerow(asdict(self).values())
        return buf.getvalue()


def total_time(n: int, cfg: HwConfig | None = None, include_transfer: bool = False) -> CostReport:
    """Modeled runtime; one DMA beat per clock, so transfer time is ``beats / freq``.

    ``pdp_j`` multiplies ``cfg.power_w`` by ``total_time_s``.
    """
    cfg = cfg or HwConfig()
    cycles = compute_cycles(n, cfg.n_pes)
    beats = transfer_beats(n, cfg.dma_tuples_per_beat)
    compute_t = cycles / cfg.freq_hz + cfg.fixed_overhead_s
    transfer_t = beats / cfg.freq_hz
    total = compute_t + (transfer_t if include_transfer else 0.0)
    return CostReport(
        n=n,
        compute_cycles=cycles,
        transfer_beats=beats,
        compute_time_s=compute_t,
        transfer_time_s=transfer_t,
        total_time_s=total,
        memory_bytes=memory_bytes(n, MemScheme.PACOX),
        pdp_j=pdp(cfg.power_w, total),
    )


def memory_table(n: int) -> dict[str, float]:
    """Footprint in GB (1e9 bytes) for each scheme."""
    return {s.name: memory_bytes(n, s) / GB for s in MemScheme}
