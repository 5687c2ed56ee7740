"""Command-line front end.

Exit codes: 0 ok, 1 verification or validation failure, 2 usage error.

CSV schemas
  bench: n,engine,workers,n_pes,wall_time_s,repeats,bytes_allocated,status,
         model_compute_time_s,model_total_time_s[,io_time_s]
  model: n,compute_cycles,transfer_beats,compute_time_s,transfer_time_s,
         total_time_s,memory_bytes,pdp_j
  ham compose-all: index,pauli,coeff,wall_time_s

Set PAULICOMP_MEM_BUDGET (bytes) to change the allocation budget.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import sys
import time

from . import hamiltonian as ham
from .composer import compose, parse_engine
from .core import encode_context, parse_pauli_string
from .errors import PauliError
from .harness import bench, default_engines, sample_strings, verify, write_bench_csv
from .hwmodel import CostReport, HwConfig, memory_table, total_time
from .oracle import DENSE_MAX_QUBITS, sparse_to_dense

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _open_out(path, mode="w"):
    if path in (None, "-"):
        yield sys.stdout.buffer if "b" in mode else sys.stdout
    else:
        with open(path, mode, newline="" if "b" not in mode else None) as f:
            yield f


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _fmt_complex(z: complex) -> str:
    re, im = int(z.real), int(z.imag)
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}i" if im != 1 and im != -1 else ("i" if im == 1 else "-i")
    return f"{re}{im:+d}i"


def cmd_compose(args) -> int:
    s = parse_pauli_string(args.string)
    if args.format == "dense" and s.n > DENSE_MAX_QUBITS:
        raise UsageError(f"dense format is limited to n <= {DENSE_MAX_QUBITS}")
    if args.format == "bin" and args.out in (None, "-"):
        raise UsageError("--format bin requires --out PATH")
    engine = parse_engine(args.engine, args.n_pes, args.workers)
    op = compose(encode_context(s), engine)
    if args.format == "bin":
        written = op.write(args.out)
    else:
        with _open_out(args.out) as f:
            if args.format == "coo":
                lines = list(op.coo_lines())
            else:
                dense = sparse_to_dense(op)
                lines = [" ".join(f"{_fmt_complex(z):>3}" for z in row) for row in dense]
            text = "\n".join(lines) + "\n"
            f.write(text)
            written = len(text)
    summary = f"n={op.n} nnz={op.size} bytes={op.nbytes} written={written} engine={engine}"
    print(summary, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.n_max > DENSE_MAX_QUBITS or args.n_max < 1:
        raise UsageError(f"--n-max must be in [1, {DENSE_MAX_QUBITS}]")
    strings = sample_strings(args.n_max, args.samples_per_n, args.seed)
    res = verify(strings, default_engines(args.n_pes, args.workers), inject_fault=args.inject_fault)
    print(res.summary())
    if not res.ok:
        print(f"first mismatch: {res.first_mismatch}")
        return EXIT_FAIL
    return EXIT_OK


def cmd_bench(args) -> int:
    engines = []
    for name in args.engines.split(","):
        if name.strip().replace("-", "_") in ("pe_parallel", "parallel", "pe"):
            engines += [parse_engine(name, args.n_pes, w) for w in _int_list(args.workers)]
        else:
            engines.append(parse_engine(name))
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")
    records = bench(range(args.n_min, args.n_max + 1), engines, args.repeats, args.seed,
                    with_io=args.io)
    with _open_out(args.csv) as f:
        write_bench_csv(records, f, with_io=args.io)
    return EXIT_OK


def _overrides(pairs) -> HwConfig:
    kw = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise UsageError(f"--set expects key=value, got {pair!r}")
        key, val = pair.split("=", 1)
        kw[key.strip()] = val
    try:
        return HwConfig().with_overrides(**kw)
    except (KeyError, ValueError) as e:
        raise UsageError(str(e)) from None


def cmd_model(args) -> int:
    cfg = _overrides(args.set)
    n_min = args.n if args.n is not None else args.n_min
    n_max = args.n if args.n is not None else args.n_max
    if not 1 <= n_min <= n_max <= 64:
        raise UsageError("qubit range must satisfy 1 <= n-min <= n-max <= 64")
    with _open_out(args.csv) as f:
        f.write(",".join(CostReport.csv_header()) + "\n")
        for n in range(n_min, n_max + 1):
            f.write(total_time(n, cfg, include_transfer=args.include_transfer).csv_row() + "\n")
    out = sys.stderr if args.csv in (None, "-") else sys.stdout
    print("memory footprint (GB = 1e9 bytes)", file=out)
    print(f"{'n':>3} {'PACOX':>12} {'PC':>12} {'GF':>12}", file=out)
    for n in range(n_min, n_max + 1):
        t = memory_table(n)
        print(f"{n:>3} {t['PACOX']:>12.4g} {t['PC']:>12.4g} {t['GF']:>12.4g}", file=out)
    return EXIT_OK


def _hamiltonian(args) -> ham.PauliSum:
    if args.kind == "file":
        if not args.terms:
            raise UsageError("kind 'file' requires --terms PATH")
        return ham.load_terms(args.terms)
    if args.n is None:
        raise UsageError(f"kind {args.kind!r} requires --n")
    if args.kind == "tfim":
        return ham.build_tfim(args.n, args.J, args.h)
    if args.kind == "heisenberg":
        return ham.build_heisenberg(args.n, args.jx, args.jy, args.jz)
    return ham.stabilizer_sum(args.n)


def cmd_ham(args) -> int:
    H = _hamiltonian(args)
    engine = parse_engine(args.engine, args.n_pes, args.workers)
    if args.action == "compose-all":
        with _open_out(args.csv) as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["index", "pauli", "coeff", "wall_time_s"])
            total = 0.0
            for i, term in enumerate(H):
                t0 = time.perf_counter()
                compose(encode_context(term.string), engine)
                dt = time.perf_counter() - t0
                total += dt
                w.writerow([i, str(term.string), term.coeff, dt])
        out = sys.stderr if args.csv in (None, "-") else sys.stdout
        print(f"{len(H)} operators composed in {total:.6g} s", file=out)
        return EXIT_OK
    if args.state:
        psi = ham.StateVector.read(args.state)
    else:
        psi = ham.StateVector.basis(H.n, args.basis)
    val = ham.expectation(H, psi, engine)
    print(f"{val.real:.12g}" if abs(val.imag) <= 1e-9 else f"{val!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paulicomp", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def engine_flags(sp, default="sequential"):
        sp.add_argument("--engine", default=default,
                        help="sequential | pe-parallel | direct (default %(default)s)")
        sp.add_argument("--n-pes", type=int, default=32)
        sp.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("compose", help="compose one Pauli string to a file")
    c.add_argument("string")
    engine_flags(c)
    c.add_argument("--out", "-o")
    c.add_argument("--format", choices=["bin", "coo", "dense"], default="coo")
    c.set_defaults(func=cmd_compose)

    v = sub.add_parser("verify", help="check all engines against the dense oracle")
    v.add_argument("--n-max", type=int, default=5)
    v.add_argument("--samples-per-n", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n-pes", type=int, default=32)
    v.add_argument("--workers", type=int, default=4)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="median wall time of composition per n and engine")
    b.add_argument("--n-min", type=int, default=3)
    b.add_argument("--n-max", type=int, default=19)
    b.add_argument("--engines", default="sequential,pe-parallel,direct")
    b.add_argument("--n-pes", type=int, default=32)
    b.add_argument("--workers", default="1", help="comma list for pe-parallel lanes")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv")
    b.add_argument("--io", action="store_true", help="add an io_time_s column (binary dump time)")
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("model", help="hardware cost model rows and memory table")
    m.add_argument("--n", type=int)
    m.add_argument("--n-min", type=int, default=3)
    m.add_argument("--n-max", type=int, default=19)
    m.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="HwConfig override, e.g. n_pes=64 or fixed_overhead_s=0")
    m.add_argument("--include-transfer", action="store_true")
    m.add_argument("--csv")
    m.set_defaults(func=cmd_model)

    h = sub.add_parser("ham", help="Hamiltonian workloads")
    h.add_argument("kind", choices=["tfim", "heisenberg", "stabilizer", "file"])
    h.add_argument("action", choices=["compose-all", "expect"])
    h.add_argument("--n", type=int)
    h.add_argument("--J", type=float, default=1.0)
    h.add_argument("--h", type=float, default=1.0)
    h.add_argument("--jx", type=float, default=1.0)
    h.add_argument("--jy", type=float, default=1.0)
    h.add_argument("--jz", type=float, default=1.0)
    h.add_argument("--terms", help="term file: '<coeff> <pauli>' per line")
    h.add_argument("--state", help="PSIV state vector file")
    h.add_argument("--basis", type=int, default=0, help="basis-state index when no --state")
    h.add_argument("--csv")
    engine_flags(h)
    h.set_defaults(func=cmd_ham)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PauliError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
