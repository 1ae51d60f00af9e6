"""Run the CLI grid for a Poincare function and plot |F| and the error bound."""

import argparse
import csv
import io
import math
import subprocess
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=float, nargs="+", default=[2.0])
    ap.add_argument("--extent", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=41)
    ap.add_argument("--out", default="grid.png")
    args = ap.parse_args()
    e = args.extent
    cmd = [sys.executable, "-m", "infcomp", "grid", "--method", "poincare", "--s", *map(str, args.s),
           "--grid", str(-e), str(e), str(-e), str(e), str(args.steps), "--epsilon", "1e-8", "--jobs", "4"]
    out = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    rows = list(csv.DictReader(io.StringIO(out)))
    n = args.steps
    mag = [[math.nan] * n for _ in range(n)]
    err = [[math.nan] * n for _ in range(n)]
    for k, row in enumerate(rows):
        i, j = divmod(k, n)
        if row["f_re"] in ("overflow", "budget_exceeded"):
            continue
        mag[i][j] = math.log10(1e-300 + math.hypot(float(row["f_re"]), float(row["f_im"])))
        err[i][j] = math.log10(1e-300 + float(row["error_bound"]))
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.5))
    for ax, data, title in zip(axes, (mag, err), ("log10 |F_s(z)|", "log10 error bound")):
        im = ax.imshow(data, origin="lower", extent=(-e, e, -e, e))
        ax.set_title(title)
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
