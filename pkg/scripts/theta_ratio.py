"""Growth of twisted Moebius sums: |theta(x, chi)| / (sqrt x ln x) at powers of ten.

    python3 scripts/theta_ratio.py --bound 1000000 --q 1 4 5 7
"""

import argparse

from farey_audit.characters import enumerate_characters
from farey_audit.lfunctions import theta_chi
from farey_audit.sieves import sieve_build


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--bound", type=int, default=1_000_000)
    ap.add_argument("--q", type=int, nargs="+", default=[1, 4, 5, 7])
    args = ap.parse_args()

    table = sieve_build(args.bound)
    xs = [10**e for e in range(1, 20) if 10**e <= args.bound]
    print("chi".rjust(8) + "".join(f"{x:>12}" for x in xs))
    for q in args.q:
        for chi in enumerate_characters(q):
            ratios = [theta_chi(x, chi, table).ratio for x in xs]
            print(f"{q:>4}#{chi.index:<3}" + "".join(f"{r:>12.4f}" for r in ratios))


if __name__ == "__main__":
    main()
