"""Memory footprint of the three storage schemes for n = 1..32, as CSV on stdout."""
import argparse
import csv
import sys

from paulicomp.hwmodel import GB, MemScheme, memory_bytes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=32)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n"] + [f"{s.name}_GB" for s in MemScheme])
    for n in range(1, args.n_max + 1):
        w.writerow([n] + [f"{memory_bytes(n, s) / GB:.6g}" for s in MemScheme])


if __name__ == "__main__":
    main()
