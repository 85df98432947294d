"""Shared RLinear vs RLinear-CI vs RMLP on three channels with different periods.

``--signal sine`` uses zero-phase sines at angular frequencies 1/3, 1/5, 1/10.
``--signal patterns`` repeats random patterns of integer length 19, 31 and 63,
which excite every harmonic of each period.
"""

import argparse
from pathlib import Path

from linearcast.evaluation import format_table, write_reports_csv
from linearcast.experiments import channel_study
from linearcast.signals import THREE_SINE_OMEGAS, gen_multiperiod, gen_periodic_patterns


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--signal", choices=["sine", "patterns"], default="sine")
    ap.add_argument("--length", type=int, default=3000)
    ap.add_argument("--n", type=int, default=96)
    ap.add_argument("--m", type=int, default=96)
    ap.add_argument("--out", default="results/channels")
    args = ap.parse_args()

    if args.signal == "sine":
        series = gen_multiperiod(args.length, THREE_SINE_OMEGAS)
    else:
        series = gen_periodic_patterns(args.length, (19, 31, 63), seed=0)
    reports = list(channel_study(series, n=args.n, m=args.m).values())
    print(format_table(reports, ("model", "n", "m", "mse", "mae", "r2")), end="")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / f"{args.signal}.csv").open("w", newline="") as fh:
        write_reports_csv(reports, fh)


if __name__ == "__main__":
    main()
