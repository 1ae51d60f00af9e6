"""How close the measured Cauchy differences come to their bound on random families."""

import argparse
import random

from infcomp import cauchy_diff_bound, certify, compose_pointwise
from infcomp.verify import SEED, disk_points, random_explicit_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--families", type=int, default=20)
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--seed", type=int, default=SEED)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    ratios = []
    for i in range(args.families):
        fam = random_explicit_family(rng)
        cert = certify(fam)
        worst = 0.0
        for z in disk_points(rng, args.points, cert.safe_radius):
            vals = [compose_pointwise(fam, 1, N, z) for N in range(1, 11)]
            for M in range(1, 10):
                for N in range(M + 1, 11):
                    b = cauchy_diff_bound(cert, 1, M, N)
                    if b > 0:
                        worst = max(worst, abs(vals[N - 1] - vals[M - 1]) / b)
        ratios.append(worst)
        print(f"family {i:2d}: {len(fam.factors):2d} factors, alpha {cert.alpha:.3f}, worst ratio {worst:.4f}")
    print(f"overall worst measured/bound: {max(ratios):.4f}")


if __name__ == "__main__":
    main()
