"""Franel-Landau growth over a doubling N range: table, log-log slope, band.

    python3 scripts/fl_growth.py --start 512 --count 7
"""

import argparse
import math
import os
import time

from farey_audit.discrepancy import exponent_fit, franel_landau_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--start", type=int, default=512)
    ap.add_argument("--count", type=int, default=7)
    ap.add_argument("--factor", type=int, default=2)
    ap.add_argument("--threads", type=int, default=os.cpu_count())
    args = ap.parse_args()

    ns = [args.start * args.factor**i for i in range(args.count)]
    t0 = time.perf_counter()
    rows = franel_landau_scan(ns, threads=args.threads)
    elapsed = time.perf_counter() - t0

    print(f"{'N':>8} {'Phi(N)':>12} {'fl_sum':>14} {'fl/(sqrt N ln N)':>18} {'fl/sqrt N':>10}")
    for r in rows:
        print(f"{r.N:>8} {r.phi_N:>12} {r.fl_sum:>14.6f} {r.normalized:>18.8f} {r.fl_sum / math.sqrt(r.N):>10.5f}")
    fit = exponent_fit(rows)
    norm = [r.normalized for r in rows]
    print(f"\nslope {fit.slope:.4f}  intercept {fit.intercept:.4f}  r2 {fit.r2:.5f}")
    print(f"normalized band max/min = {max(norm) / min(norm):.3f}")
    # local slopes show whether the growth rate is still drifting
    for a, b in zip(rows, rows[1:]):
        local = math.log(b.fl_sum / a.fl_sum) / math.log(b.N / a.N)
        print(f"  local slope {a.N:>6} -> {b.N:<6} {local:.4f}")
    print(f"scan time {elapsed:.1f}s")


if __name__ == "__main__":
    main()
