"""Linear forecasting of a two-channel trend with no normalization, RevIN,
batch-style and layer-style normalization. Writes summary and prediction CSVs."""

import argparse
import csv
from pathlib import Path

import numpy as np

from linearcast.evaluation import format_table
from linearcast.experiments import normalization_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=96)
    ap.add_argument("--m", type=int, default=96)
    ap.add_argument("--out", default="results/normalization")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    res = normalization_study(args.n, args.m)
    print(format_table([v["report"] for v in res.values()], ("model", "mse", "mae", "r2")), end="")
    truth = res["linear"]["truth"]
    with (out / "first_test_window.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "channel", "truth", *res])
        for ch in range(truth.shape[1]):
            for j in range(truth.shape[2]):
                w.writerow([j, ch, truth[0, ch, j], *(v["pred"][0, ch, j] for v in res.values())])
    for name, v in res.items():
        ratio = np.mean(np.abs(v["pred"])) / np.mean(np.abs(v["truth"]))
        print(f"{name:12s} mean|pred| / mean|truth| = {ratio:.3f}")


if __name__ == "__main__":
    main()
