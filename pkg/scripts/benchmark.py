"""Three-seed benchmark rows (input length 336) for one or more datasets.

Needs the CSV files in $LINEARCAST_DATA_DIR (ETTh1.csv, ETTm1.csv, weather.csv, ...).
"""

import argparse
from pathlib import Path

from linearcast.data_io import PRESETS, load_csv, preset_path
from linearcast.evaluation import format_table, write_reports_csv
from linearcast.experiments import run_seeds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--datasets", default="etth1")
    ap.add_argument("--models", default="rlinear,rmlp")
    ap.add_argument("--pred-lens", default="96,192,336,720")
    ap.add_argument("--input-len", type=int, default=336)
    ap.add_argument("--out", default="results/benchmark.csv")
    args = ap.parse_args()

    reports = []
    for name in args.datasets.split(","):
        preset = PRESETS[name]
        series = load_csv(preset_path(preset), preset)
        for model in args.models.split(","):
            for m in (int(v) for v in args.pred_lens.split(",")):
                rep = run_seeds(series, model, args.input_len, m, split=preset.split, dataset=name)
                reports.append(rep)
                print(format_table([rep]).splitlines()[-1], flush=True)
    print(format_table(reports), end="")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        write_reports_csv(reports, fh)


if __name__ == "__main__":
    main()
