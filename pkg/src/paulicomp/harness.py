"""Oracle sweeps and wall-clock benchmarks shared by the CLI and scripts/."""
from __future__ import annotations

import csv
import itertools
import statistics
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .composer import EngineKind, compose, preflight
from .core import PauliLabel, PauliString, encode_context, random_pauli_string
from .errors import MemoryPreflightFailed, TooManyQubits
from .hwmodel import HwConfig, total_time
from .oracle import dense_kronecker, matches_dense, one_nonzero_per_row, sparse_to_dense

EXHAUSTIVE_MAX_N = 5


def exhaustive_strings(n: int):
    for codes in itertools.product(range(4), repeat=n):
        yield PauliString(tuple(PauliLabel(c) for c in codes))


def sample_strings(n_max: int, samples_per_n: int, seed: int):
    """All strings for ``n <= 5`` then ``samples_per_n`` seeded random strings for each larger ``n``."""
    for n in range(1, min(n_max, EXHAUSTIVE_MAX_N) + 1):
        yield from exhaustive_strings(n)
    rng = np.random.default_rng(seed)
    for n in range(EXHAUSTIVE_MAX_N + 1, n_max + 1):
        for _ in range(samples_per_n):
            yield random_pauli_string(n, rng)


@dataclass
class VerifyResult:
    strings: int = 0
    engines: int = 0
    mismatches: int = 0
    first_mismatch: str | None = None

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def summary(self) -> str:
        return f"{self.strings} strings, {self.engines} engines, {self.mismatches} mismatches"


def default_engines(n_pes: int = 32, workers: int = 4) -> list[EngineKind]:
    return [EngineKind.sequential(), EngineKind.pe_parallel(n_pes, workers), EngineKind.direct()]


def verify(strings, engines: list[EngineKind], inject_fault: bool = False) -> VerifyResult:
    """Check every engine against the dense fold; ``inject_fault`` corrupts one result as a harness self-test."""
    res = VerifyResult(engines=len(engines))
    for s in strings:
        res.strings += 1
        expected = dense_kronecker(s)
        if not one_nonzero_per_row(expected):
            raise AssertionError(f"oracle for {s} does not have one nonzero per row")
        ctx = encode_context(s)
        for eng in engines:
            op = compose(ctx, eng)
            if inject_fault and res.strings == 1:
                m = op.m.copy()
                m[0] ^= 1
                op = type(op)(op.n, op.k.copy(), m, packed=False)
            if not matches_dense(op, expected, one_per_row=True):
                res.mismatches += 1
                if res.first_mismatch is None:
                    got = sparse_to_dense(op)
                    row, col = (int(x) for x in np.argwhere(got != expected)[0])
                    res.first_mismatch = (
                        f"{s} engine={eng} at ({row},{col}): "
                        f"expected {expected[row, col]}, got {got[row, col]}"
                    )
    return res


@dataclass
class BenchRecord:
    n: int
    engine: str
    workers: int
    n_pes: int
    wall_time_s: float
    repeats: int
    bytes_allocated: int
    status: str = "ok"
    model_compute_time_s: float = 0.0
    model_total_time_s: float = 0.0
    io_time_s: float | None = None


BENCH_COLUMNS = [f.name for f in fields(BenchRecord)]


def time_compose(ctx, engine: EngineKind, repeats: int) -> tuple[float, object]:
    times = []
    op = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        op = compose(ctx, engine)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), op


def bench(
    n_range,
    engines: list[EngineKind],
    repeats: int = 5,
    seed: int = 0,
    hw: HwConfig | None = None,
    with_io: bool = False,
    io_dir=None,
):
    """Yield one :class:`BenchRecord` per ``(n, engine)``; over-budget sizes are recorded as skipped."""
    hw = hw or HwConfig()
    rng = np.random.default_rng(seed)
    for n in n_range:
        model = total_time(n, hw, include_transfer=True) if n <= 64 else None
        model_kw = (
            dict(model_compute_time_s=model.compute_time_s, model_total_time_s=model.total_time_s)
            if model
            else {}
        )
        try:
            preflight(n)
        except (MemoryPreflightFailed, TooManyQubits) as e:
            for eng in engines:
                yield BenchRecord(n, eng.name, eng.workers, eng.n_pes, 0.0, repeats,
                                  0, status=f"skipped: {type(e).__name__}", **model_kw)
            continue
        s = random_pauli_string(n, rng)
        ctx = encode_context(s)
        for eng in engines:
            wall, op = time_compose(ctx, eng, repeats)
            io_t = None
            if with_io:
                import os
                import tempfile

                with tempfile.TemporaryDirectory(dir=io_dir) as d:
                    t0 = time.perf_counter()
                    op.write(os.path.join(d, "op.bin"))
                    io_t = time.perf_counter() - t0
            yield BenchRecord(n, eng.name, eng.workers, eng.n_pes, wall, repeats,
                              op.nbytes, io_time_s=io_t, **model_kw)
            del op


def write_bench_csv(records, f, with_io: bool = False):
    cols = BENCH_COLUMNS if with_io else [c for c in BENCH_COLUMNS if c != "io_time_s"]
    w = csv.DictWriter(f, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for rec in records:
        w.writerow(asdict(rec))
