"""Modeled execution time vs. total runtime (with DMA transfer) for n = 3..19.

Shows the transfer-dominated regime: beats grow as 2^n / 4 while PE cycles
grow as 2^n / 32.
"""
import argparse

from paulicomp.hwmodel import HwConfig, total_time


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=19)
    ap.add_argument("--n-pes", type=int, default=32)
    ap.add_argument("--overhead", type=float, default=None, help="fixed PS-PL overhead in seconds")
    args = ap.parse_args()
    cfg = HwConfig(n_pes=args.n_pes)
    if args.overhead is not None:
        cfg = cfg.with_overrides(fixed_overhead_s=args.overhead)
    print(f"{'n':>3} {'exec_s':>11} {'total_s':>11} {'transfer/exec':>14} {'pdp_J':>11}")
    for n in range(args.n_min, args.n_max + 1):
        ex = total_time(n, cfg)
        tot = total_time(n, cfg, include_transfer=True)
        print(f"{n:>3} {ex.total_time_s:>11.4e} {tot.total_time_s:>11.4e} "
              f"{tot.transfer_time_s / ex.total_time_s:>14.3f} {ex.pdp_j:>11.4e}")


if __name__ == "__main__":
    main()
