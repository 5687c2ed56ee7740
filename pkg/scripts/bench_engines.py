"""Host wall-clock sweep of all engines next to the modeled hardware times.

    python scripts/bench_engines.py --n-max 22 --workers 1,2,4,8 --out bench.csv
"""
import argparse
import sys

from paulicomp.composer import EngineKind
from paulicomp.harness import bench, write_bench_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-min", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=19)
    ap.add_argument("--n-pes", type=int, default=32)
    ap.add_argument("--workers", default="1,4,8")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    engines = [EngineKind.sequential(), EngineKind.direct()]
    engines += [EngineKind.pe_parallel(args.n_pes, int(w)) for w in args.workers.split(",")]
    records = bench(range(args.n_min, args.n_max + 1), engines, args.repeats, args.seed)
    if args.out == "-":
        write_bench_csv(records, sys.stdout)
    else:
        with open(args.out, "w", newline="") as f:
            write_bench_csv(records, f)


if __name__ == "__main__":
    main()
