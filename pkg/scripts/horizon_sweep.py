"""Test MSE of a shared model against input length on the three-sine simulation
(or on a CSV via --data/--preset)."""

import argparse
from pathlib import Path

from linearcast.data_io import PRESETS, load_csv, preset_path
from linearcast.evaluation import format_table, write_reports_csv
from linearcast.experiments import SIM_SPLIT, sweep_input_lengths
from linearcast.signals import THREE_SINE_OMEGAS, gen_multiperiod


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default="rlinear")
    ap.add_argument("--input-lens", default="24,48,96,192,336,720")
    ap.add_argument("--pred-len", type=int, default=96)
    ap.add_argument("--data")
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--out", default="results/horizon.csv")
    args = ap.parse_args()

    if args.preset or args.data:
        preset = PRESETS[args.preset or "custom"]
        series = load_csv(args.data or preset_path(preset), preset)
        split = preset.split
    else:
        series, split = gen_multiperiod(3000, THREE_SINE_OMEGAS), SIM_SPLIT
    lens = [int(v) for v in args.input_lens.split(",")]
    rows = sweep_input_lengths(series, args.model, lens, args.pred_len, split=split)
    print(format_table(rows, ("n", "m", "mse", "mae", "r2", "error")), end="")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        write_reports_csv(rows, fh)


if __name__ == "__main__":
    main()
