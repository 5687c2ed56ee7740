"""Compose a Pauli-string context into its sparse stacking ``(k, m)``.

Three engines produce bitwise-identical output:

* ``sequential``: one doubling per qubit, each copying the populated prefix
  ``[0, L)`` into ``[L, 2L)`` with an index shift of ``+-L`` and a conditional
  phase negation.
* ``pe_parallel``: the same doubling with the lower half split into ``N``
  contiguous segments (one per processing element); the segments are
  multiplexed onto ``workers`` threads that meet at a barrier after every
  doubling. Reads come from ``[0, L)`` and writes go to ``[L, 2L)`` of the
  same buffer, so iteration ``l``'s outputs are iteration ``l+1``'s inputs.
* ``direct``: the unrolled closed form ``k[j] = j ^ r`` and
  ``m[j] = m0 ^ parity(j & ~v)``.
"""
from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_MAX_QUBITS, Context, initial_phase, phase_negate_mask, PHASE_VALUES
from .errors import (
    FormatError,
    InvalidPeCount,
    MemoryPreflightFailed,
    QubitCountOutOfRange,
    TooManyQubits,
    TruncatedInput,
)

MAGIC = b"PCOX"
FORMAT_VERSION = 1
HEADER_SIZE = 6

MEM_BUDGET_ENV = "PAULICOMP_MEM_BUDGET"
DEFAULT_MEM_BUDGET = 4 << 30

_DIRECT_CHUNK = 1 << 20
_PHASES = np.array(PHASE_VALUES, dtype=np.complex128)
_SHIFTS = np.array([0, 2, 4, 6], dtype=np.uint8)


def is_power_of_two(x: int) -> bool:
    return isinstance(x, (int, np.integer)) and x >= 1 and (x & (x - 1)) == 0


def memory_budget() -> int:
    """Allocation budget in bytes; overridable through ``PAULICOMP_MEM_BUDGET``."""
    env = os.environ.get(MEM_BUDGET_ENV)
    return int(float(env)) if env else DEFAULT_MEM_BUDGET


def estimate_bytes(n: int, packed: bool = True) -> int:
    size = 1 << n
    return size * 8 + ((size + 3) // 4 if packed else size)


def preflight(n: int, packed: bool = True, budget: int | None = None, max_n: int = DEFAULT_MAX_QUBITS):
    if n > max_n:
        raise TooManyQubits(n, max_n)
    budget = memory_budget() if budget is None else budget
    need = estimate_bytes(n, packed)
    if need > budget:
        raise MemoryPreflightFailed(need, budget)


def pack_codes(codes: np.ndarray) -> np.ndarray:
    """Pack 2-bit codes four per byte, entry j at bits ``2*(j%4)+1 : 2*(j%4)`` of byte ``j//4``."""
    codes = np.asarray(codes, dtype=np.uint8)
    pad = (-len(codes)) % 4
    if pad:
        codes = np.concatenate([codes, np.zeros(pad, dtype=np.uint8)])
    quads = codes.reshape(-1, 4)
    return (quads[:, 0] | (quads[:, 1] << 2) | (quads[:, 2] << 4) | (quads[:, 3] << 6)).astype(np.uint8)


def unpack_codes(packed: np.ndarray, size: int) -> np.ndarray:
    out = (np.asarray(packed, dtype=np.uint8)[:, None] >> _SHIFTS) & 3
    return out.reshape(-1)[:size]


@dataclass(frozen=True, eq=False)
class SparsePauliOp:
    """Row ``j`` of the operator holds ``phase_value(m[j])`` at column ``k[j]`` and zeros elsewhere.

    ``m_data`` holds packed 2-bit codes when ``packed`` is true, otherwise one
    code per byte. Use :attr:`m` for the unpacked codes either way.
    """

    n: int
    k: np.ndarray
    m_data: np.ndarray
    packed: bool = True

    def __post_init__(self):
        self.k.setflags(write=False)
        self.m_data.setflags(write=False)

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def m(self) -> np.ndarray:
        if self.packed:
            return unpack_codes(self.m_data, self.size)
        return self.m_data

    @property
    def packed_m(self) -> np.ndarray:
        return self.m_data if self.packed else pack_codes(self.m_data)

    def phases(self) -> np.ndarray:
        return _PHASES[self.m]

    @property
    def nbytes(self) -> int:
        return self.k.nbytes + self.m_data.nbytes

    def __eq__(self, other):
        if not isinstance(other, SparsePauliOp):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.k, other.k)
            and np.array_equal(self.m, other.m)
        )

    def __repr__(self):
        return f"SparsePauliOp(n={self.n}, packed={self.packed})"

    # binary dump: "PCOX", version u8, n u8, k as <u8[2^n], packed m
    def to_bytes(self) -> bytes:
        header = MAGIC + bytes([FORMAT_VERSION, self.n])
        return header + self.k.astype("<u8").tobytes() + self.packed_m.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, packed: bool = True) -> "SparsePauliOp":
        if len(data) < HEADER_SIZE:
            raise TruncatedInput(HEADER_SIZE, len(data))
        if data[:4] != MAGIC:
            raise FormatError(f"bad magic {data[:4]!r}")
        if data[4] != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {data[4]}")
        n = data[5]
        if n < 1:
            raise QubitCountOutOfRange(n)
        size = 1 << n
        m_len = (size + 3) // 4
        needed = HEADER_SIZE + 8 * size + m_len
        if len(data) < needed:
            raise TruncatedInput(needed, len(data))
        k = np.frombuffer(data, dtype="<u8", count=size, offset=HEADER_SIZE).astype(np.uint64)
        m = np.frombuffer(data, dtype=np.uint8, count=m_len, offset=HEADER_SIZE + 8 * size).copy()
        if not packed:
            m = unpack_codes(m, size).copy()
        return cls(n=n, k=k, m_data=m, packed=packed)

    def write(self, path) -> int:
        data = self.to_bytes()
        with open(path, "wb") as f:
            f.write(data)
        return len(data)

    @classmethod
    def read(cls, path, packed: bool = True) -> "SparsePauliOp":
        with open(path, "rb") as f:
            return cls.from_bytes(f.read(), packed=packed)

    def coo_lines(self):
        """Yield ``row,col,re,im`` lines; values are exact integers."""
        for j, (col, code) in enumerate(zip(self.k.tolist(), self.m.tolist())):
            val = PHASE_VALUES[code]
            yield f"{j},{col},{int(val.real)},{int(val.imag)}"


@dataclass(frozen=True)
class EngineKind:
    name: str
    n_pes: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.name not in ("sequential", "pe_parallel", "direct"):
            raise ValueError(f"unknown engine {self.name!r}")
        if not is_power_of_two(self.n_pes):
            raise InvalidPeCount(self.n_pes)
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def sequential(cls) -> "EngineKind":
        return cls("sequential")

    @classmethod
    def direct(cls) -> "EngineKind":
        return cls("direct")

    @classmethod
    def pe_parallel(cls, n_pes: int, workers: int = 1) -> "EngineKind":
        return cls("pe_parallel", n_pes, workers)

    def __str__(self):
        if self.name == "pe_parallel":
            return f"pe_parallel(N={self.n_pes},workers={self.workers})"
        return self.name


def _alloc(c: Context, packed: bool, budget: int | None, max_n: int):
    preflight(c.n, packed, budget, max_n)
    size = 1 << c.n
    k = np.empty(size, dtype=np.uint64)
    m = np.zeros((size + 3) // 4 if packed else size, dtype=np.uint8)
    k[0] = c.r
    m0 = int(initial_phase(c.n_y))
    m[0] = m0
    return k, m


def _double_k(k: np.ndarray, L: int, flip: int, lo: int, hi: int):
    # k[L+lo : L+hi] = k[lo:hi] + (-1)^flip * L
    if flip:
        np.subtract(k[lo:hi], np.uint64(L), out=k[L + lo : L + hi])
    else:
        np.add(k[lo:hi], np.uint64(L), out=k[L + lo : L + hi])


def _double_m(m: np.ndarray, L: int, mask: int, lo: int, hi: int, packed: bool):
    if not packed:
        np.bitwise_xor(m[lo:hi], np.uint8(mask), out=m[L + lo : L + hi])
        return
    if L >= 4 and lo % 4 == 0 and hi % 4 == 0:
        b = L // 4
        np.bitwise_xor(m[lo // 4 : hi // 4], np.uint8(0x55 * mask), out=m[b + lo // 4 : b + hi // 4])
        return
    for j in range(lo, hi):
        code = (int(m[j >> 2]) >> (2 * (j & 3))) & 3
        t = L + j
        shift = 2 * (t & 3)
        m[t >> 2] = (int(m[t >> 2]) & ~(3 << shift) & 0xFF) | ((code ^ mask) << shift)


def compose_sequential(
    c: Context, packed: bool = True, budget: int | None = None, max_n: int = DEFAULT_MAX_QUBITS
) -> SparsePauliOp:
    k, m = _alloc(c, packed, budget, max_n)
    for l in range(c.n):
        L = 1 << l
        _double_k(k, L, (c.r >> l) & 1, 0, L)
        _double_m(m, L, phase_negate_mask((c.v >> l) & 1), 0, L, packed)
    return SparsePauliOp(c.n, k, m, packed)


def pe_segments(L: int, n_pes: int) -> list[tuple[int, int]]:
    """Half-open ranges of the lower half ``[0, L)`` assigned to PEs ``0..``.

    With ``L >= N`` every PE gets ``L/N`` entries; below that only ``L``
    single-entry segments are active.
    """
    if L >= n_pes:
        step = L // n_pes
        return [(p * step, (p + 1) * step) for p in range(n_pes)]
    return [(i, i + 1) for i in range(L)]


def work_units(L: int, n_pes: int, packed: bool) -> list[tuple[int, int, int]]:
    """``(pe, lo, hi)`` units; in packed layout sub-byte segments are coalesced to whole bytes.

    A coalesced group is owned by the PE of its first segment, so no two lanes
    ever write the same byte.
    """
    segs = pe_segments(L, n_pes)
    seg_len = segs[0][1] - segs[0][0]
    if not packed or seg_len % 4 == 0:
        return [(p, lo, hi) for p, (lo, hi) in enumerate(segs)]
    if L < 4:
        return [(0, 0, L)]
    per_group = 4 // seg_len
    return [(p, segs[p][0], segs[p + per_group - 1][1]) for p in range(0, len(segs), per_group)]


def compose_pe_parallel(
    c: Context,
    n_pes: int,
    workers: int = 1,
    packed: bool = True,
    budget: int | None = None,
    max_n: int = DEFAULT_MAX_QUBITS,
    trace: list | None = None,
) -> SparsePauliOp:
    """Doubling with ``n_pes`` logical PEs multiplexed onto ``workers`` threads.

    If ``trace`` is a list, ``(l, lane, pe, write_lo, write_hi)`` tuples are
    appended for every unit processed (write range half-open).
    """
    if not is_power_of_two(n_pes):
        raise InvalidPeCount(n_pes)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    k, m = _alloc(c, packed, budget, max_n)
    schedule = []
    for l in range(c.n):
        L = 1 << l
        lanes = [[] for _ in range(workers)]
        for pe, lo, hi in work_units(L, n_pes, packed):
            lanes[pe % workers].append((pe, lo, hi))
        schedule.append((L, (c.r >> l) & 1, phase_negate_mask((c.v >> l) & 1), lanes))
    lock = threading.Lock()

    def run_units(l, lane, units, L, flip, mask):
        for pe, lo, hi in units:
            _double_k(k, L, flip, lo, hi)
            _double_m(m, L, mask, lo, hi, packed)
            if trace is not None:
                with lock:
                    trace.append((l, lane, pe, L + lo, L + hi))

    if workers == 1:
        for l, (L, flip, mask, lanes) in enumerate(schedule):
            run_units(l, 0, lanes[0], L, flip, mask)
        return SparsePauliOp(c.n, k, m, packed)

    barrier = threading.Barrier(workers)

    def lane_main(lane):
        try:
            for l, (L, flip, mask, lanes) in enumerate(schedule):
                run_units(l, lane, lanes[lane], L, flip, mask)
                barrier.wait()
        except threading.BrokenBarrierError:
            pass
        except BaseException:
            barrier.abort()
            raise

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(lane_main, lane) for lane in range(workers)]
        for f in futures:
            f.result()
    return SparsePauliOp(c.n, k, m, packed)


def compose_direct(
    c: Context, packed: bool = True, budget: int | None = None, max_n: int = DEFAULT_MAX_QUBITS
) -> SparsePauliOp:
    preflight(c.n, packed, budget, max_n)
    size = 1 << c.n
    r = np.uint64(c.r)
    z = np.uint64(c.z_mask)
    m0 = np.uint8(initial_phase(c.n_y))
    k = np.empty(size, dtype=np.uint64)
    m = np.empty((size + 3) // 4 if packed else size, dtype=np.uint8)
    for start in range(0, size, _DIRECT_CHUNK):
        stop = min(size, start + _DIRECT_CHUNK)
        j = np.arange(start, stop, dtype=np.uint64)
        np.bitwise_xor(j, r, out=k[start:stop])
        codes = (np.bitwise_count(j & z) & np.uint8(1)) ^ m0
        if packed:
            m[start // 4 : (stop + 3) // 4] = pack_codes(codes)
        else:
            m[start:stop] = codes
    return SparsePauliOp(c.n, k, m, packed)


def compose(
    c: Context,
    engine: EngineKind | None = None,
    packed: bool = True,
    budget: int | None = None,
    max_n: int = DEFAULT_MAX_QUBITS,
) -> SparsePauliOp:
    engine = engine or EngineKind.sequential()
    if engine.name == "sequential":
        return compose_sequential(c, packed, budget, max_n)
    if engine.name == "direct":
        return compose_direct(c, packed, budget, max_n)
    return compose_pe_parallel(c, engine.n_pes, engine.workers, packed, budget, max_n)


def parse_engine(name: str, n_pes: int = 32, workers: int = 1) -> EngineKind:
    """Map a CLI engine name (``sequential``, ``pe-parallel``, ``direct``) to an EngineKind."""
    key = name.strip().lower().replace("-", "_")
    if key in ("pe_parallel", "parallel", "pe"):
        return EngineKind.pe_parallel(n_pes, workers)
    return EngineKind(key)
