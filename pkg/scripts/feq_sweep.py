"""Functional-equation residuals on a grid of strip points.

Covers zeta and every primitive nonprincipal character with q up to --qmax.
Points are evaluated in parallel; rows are printed in grid order.

    python3 scripts/feq_sweep.py --qmax 8 --tmax 20
"""

import argparse
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from farey_audit.characters import enumerate_characters, is_primitive
from farey_audit.lfunctions import functional_equation_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--qmax", type=int, default=8)
    ap.add_argument("--tmax", type=float, default=20.0)
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--threads", type=int, default=os.cpu_count())
    args = ap.parse_args()

    sigmas = np.linspace(0.1, 0.9, args.steps)
    ts = np.linspace(0.0, args.tmax, args.steps)
    points = [complex(s, t) for s in sigmas for t in ts]
    subjects = [("zeta", "zeta")] + [
        (f"q={chi.modulus}#{chi.index}", chi)
        for q in range(3, args.qmax + 1)
        for chi in enumerate_characters(q)
        if not chi.is_principal and is_primitive(chi)
    ]
    jobs = [(name, subj, s) for name, subj in subjects for s in points]
    with ThreadPoolExecutor(args.threads) as pool:
        res = list(pool.map(lambda j: functional_equation_residual(j[2], j[1]), jobs))

    print(f"{'subject':>10} {'max residual':>14} {'worst s':>18}")
    for i, (name, _) in enumerate(subjects):
        chunk = res[i * len(points):(i + 1) * len(points)]
        w = int(np.argmax(chunk))
        print(f"{name:>10} {chunk[w]:>14.3e} {str(points[w]):>18}")


if __name__ == "__main__":
    main()
