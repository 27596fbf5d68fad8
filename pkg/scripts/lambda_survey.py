"""How often each run-length inequality fails, across k for fixed N.

    python3 scripts/lambda_survey.py --n 1000 --kmax 60
"""

import argparse

from farey_audit.discrepancy import lambda_audit


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--kmax", type=int, default=60)
    args = ap.parse_args()

    print(f"{'k':>5} {'runs':>6} {'max l1':>7} {'width':>6} {'spacing':>8} {'product':>8}")
    for k in range(2, min(args.kmax, args.n) + 1):
        a = lambda_audit(args.n, k)
        v = a.violations
        print(f"{k:>5} {len(a.runs):>6} {a.max_lambda1:>7} {v['width']:>6} {v['spacing']:>8} {v['product']:>8}")


if __name__ == "__main__":
    main()
