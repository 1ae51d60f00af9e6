"""Error of the N-fold composition against the closed forms, and the certified bound.

Prints, for s = 2, -2, 4 at a fixed point, the actual error of
``f_1 o ... o f_N`` next to the truncation bound the certificate gives.
"""

import argparse
import cmath

from infcomp import FactorFamily, certify, compose_pointwise, oracle_h
from infcomp.convergence import truncation_error

CASES = ((2, 1), (-2, 2), (4, 3))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--z", type=float, nargs=2, default=(0.2, 0.1))
    ap.add_argument("--max-n", type=int, default=40)
    args = ap.parse_args()
    z = complex(*args.z)
    print(f"{'s':>4} {'N':>4} {'actual':>12} {'bound':>12}")
    for s, idx in CASES:
        fam = FactorFamily.geometric(s)
        cert = certify(fam)
        if abs(z) > cert.safe_radius:
            print(f"{s:>4}  z outside the direct disk of radius {cert.safe_radius}")
            continue
        exact = oracle_h(idx, z)
        for N in range(1, args.max_n + 1, 3):
            err = abs(compose_pointwise(fam, 1, N, z) - exact)
            print(f"{s:>4} {N:>4} {err:12.3e} {truncation_error(cert, 1, N):12.3e}")


if __name__ == "__main__":
    main()
