"""Command-line harness: ``linearcast <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .closed_form import (
    build_affine_weights,
    build_multiperiod_solution,
    build_periodic_weights,
    checked_lcm,
)
from .data_io import (
    PRESETS,
    file_sha256,
    load_checkpoint,
    load_csv,
    preset_path,
    save_checkpoint,
    write_csv,
)
from .errors import ForecastError
from .evaluation import (
    DEFAULT_SEEDS,
    estimate_period,
    evaluate,
    format_table,
    weight_periodicity_profile,
    write_reports_csv,
)
from .experiments import TREND_INTERCEPTS, TREND_SLOPES, prepare, run_experiment, run_seeds, sweep_input_lengths
from .models import PRESET_MODELS
from .series import window_arrays
from .signals import (
    THREE_SINE_OMEGAS,
    MULTIPERIOD_SHORT_LENGTH,
    MULTIPERIOD_LENGTH,
    MULTIPERIOD_OMEGAS,
    gen_affine_recurrent,
    gen_integer_periodic,
    gen_multiperiod,
    gen_season_trend,
    gen_sine,
    gen_trend,
    gen_trends,
)
from .training import TrainConfig

log = logging.getLogger("linearcast")


# -- argument helpers ---------------------------------------------------------

def positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def positive_float(s: str) -> float:
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def float_list(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def int_list(s: str) -> list[int]:
    try:
        vals = [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("expected positive integers")
    return vals


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="CSV file (date column first, then one column per channel)")
    p.add_argument("--preset", choices=sorted(PRESETS), help="dataset preset (split borders, channel count)")


def _add_train_args(p: argparse.ArgumentParser) -> None:
    d = TrainConfig()
    p.add_argument("--lr", type=positive_float, default=d.lr)
    p.add_argument("--batch", type=positive_int, default=d.batch_size)
    p.add_argument("--epochs", type=positive_int, default=d.max_epochs)
    p.add_argument("--patience", type=positive_int, default=d.patience)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--hidden", type=positive_int, default=512, help="MLP hidden width (rmlp)")
    p.add_argument("--no-bias", action="store_true", help="drop bias terms from the core")


def _train_config(args) -> TrainConfig:
    return TrainConfig(lr=args.lr, batch_size=args.batch, max_epochs=args.epochs,
                       patience=min(args.patience, args.epochs), seed=args.seed)


def _model_kwargs(args) -> dict:
    return {"h": args.hidden, "bias": not args.no_bias}


def _resolve_data(args):
    preset = PRESETS[args.preset] if args.preset else PRESETS["custom"]
    if args.data:
        path = Path(args.data)
    elif args.preset and args.preset != "custom":
        path = preset_path(preset)
    else:
        raise _Usage("one of --data or --preset is required")
    series = load_csv(path, preset)
    return series, preset, path, file_sha256(path)


def _write_manifest(primary: Path, subcommand: str, args, outputs, started: float,
                    seeds=None, dataset_hash=None) -> Path:
    flags = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "subcommand": subcommand,
        "version": __version__,
        "flags": flags,
        "seeds": seeds if seeds is not None else ([flags["seed"]] if "seed" in flags else []),
        "dataset_sha256": dataset_hash,
        "outputs": [str(o) for o in outputs],
        "wall_seconds": round(time.perf_counter() - started, 3),
    }
    path = primary.with_name(primary.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=1, default=str) + "\n", encoding="utf-8")
    return path


class _Usage(Exception):
    pass


# -- subcommands --------------------------------------------------------------

def cmd_simulate(args) -> int:
    started = time.perf_counter()
    kind = args.kind
    length = args.length
    if args.preset == "three-sines":
        kind, omegas, length = "multiperiod", list(THREE_SINE_OMEGAS), MULTIPERIOD_LENGTH
    elif args.preset in ("five-sines", "five-sines-short"):
        kind, omegas = "multiperiod", list(MULTIPERIOD_OMEGAS)
        length = MULTIPERIOD_SHORT_LENGTH if args.preset == "five-sines-short" else MULTIPERIOD_LENGTH
    elif args.preset == "trend2":
        kind = "trends"
    else:
        omegas = args.omegas
    if kind is None:
        raise _Usage("--kind or --preset is required")
    if length is None:
        length = MULTIPERIOD_LENGTH

    if kind == "sine":
        series = gen_sine(length, args.omega, args.amplitude, args.phase, args.noise, args.seed)
    elif kind == "trend":
        series = gen_trend(length, args.slope, args.intercept)
    elif kind == "trends":
        series = gen_trends(length, TREND_SLOPES, TREND_INTERCEPTS)
    elif kind == "season_trend":
        series = gen_season_trend(length, args.omega, args.amplitude, args.slope, args.intercept,
                                  args.noise, args.seed)
    elif kind == "multiperiod":
        if args.periods:
            series = gen_integer_periodic(length, args.periods, args.amplitude)
        else:
            if not omegas:
                raise _Usage("multiperiod needs --omegas or --periods")
            series = gen_multiperiod(length, omegas, args.amplitude, args.noise, args.seed)
    else:  # affine_recurrent
        if args.period is None:
            raise _Usage("affine_recurrent needs --period")
        seg = np.random.default_rng(args.seed).normal(size=args.period)
        series = gen_affine_recurrent(length, args.period, args.a, args.c, seg)

    out = Path(args.out)
    write_csv(series, out)
    _write_manifest(out, "simulate", args, [out], started, seeds=[args.seed])
    print(f"wrote {series.channels}-channel series of length {series.length} to {out}")
    return 0


def cmd_train(args) -> int:
    started = time.perf_counter()
    series, preset, path, digest = _resolve_data(args)
    config = _train_config(args)
    res = run_experiment(series, args.model, args.input_len, args.pred_len, config, preset.split,
                         preset.name if args.preset else path.stem, **_model_kwargs(args))
    ckpt = Path(args.ckpt)
    save_checkpoint(res.model, ckpt, res.data.scaler, config.to_dict(), config.seed,
                    extra={"model_name": args.model, "dataset": str(path),
                           "split": preset.split.mode, "hidden": args.hidden})
    history = Path(args.history) if args.history else ckpt.with_name(ckpt.name + ".history.csv")
    with history.open("w", newline="", encoding="utf-8") as fh:
        res.history.write_csv(fh, timing=args.timing)
    _write_manifest(ckpt, "train", args, [ckpt, history], started, dataset_hash=digest)
    best = res.history.val_loss[res.history.best_epoch - 1]
    print(f"best epoch {res.history.best_epoch}/{res.history.epochs}  val_mse {best:.6f}  "
          f"test_mse {res.report.mse:.6f}  test_mae {res.report.mae:.6f}")
    return 0


def _seed_list(runs: int) -> list[int]:
    seeds = list(DEFAULT_SEEDS[:runs])
    extra = 8
    while len(seeds) < runs:
        seeds.append(extra)
        extra += 1
    return seeds


def cmd_eval(args) -> int:
    started = time.perf_counter()
    ck = load_checkpoint(args.ckpt)
    series, preset, path, digest = _resolve_data(args)
    model = ck.model
    name = ck.extra.get("model_name", model.kind)
    dataset = preset.name if args.preset else path.stem
    if args.runs == 1:
        data = prepare(series, preset.split, model.n, model.m)
        if ck.scaler is not None and not np.allclose(ck.scaler.mean, data.scaler.mean):
            log.warning("checkpoint scaler differs from the one fitted on this data's train split")
        report = evaluate(model, data.test, dataset, name, ck.seed)
        seeds = [ck.seed]
    else:
        cfg = TrainConfig(**ck.train_config) if ck.train_config else TrainConfig()
        seeds = _seed_list(args.runs)
        kwargs = {"h": ck.extra.get("hidden", 512), "bias": model.core.bias}
        report = run_seeds(series, name, model.n, model.m, cfg, preset.split, dataset, seeds, **kwargs)
    print(format_table([report], ("dataset", "model", "n", "m", "runs", "mse", "mae", "r2", "mse_min")), end="")
    if args.out:
        out = Path(args.out)
        with out.open("w", newline="", encoding="utf-8") as fh:
            write_reports_csv([report], fh)
        _write_manifest(out, "eval", args, [out], started, seeds=seeds, dataset_hash=digest)
    return 0


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    series, preset, path, digest = _resolve_data(args)
    config = _train_config(args)
    dataset = preset.name if args.preset else path.stem
    rows = sweep_input_lengths(series, args.model, args.input_lens, args.pred_len, config, preset.split, dataset)
    out = Path(args.out)
    with out.open("w", newline="", encoding="utf-8") as fh:
        fh.write("n,mse,mae,r2,error\n")
        for r in rows:
            fh.write(f"{r.n},{r.mse!r},{r.mae!r},{r.r2!r},{r.error or ''}\n")
    _write_manifest(out, "sweep", args, [out], started, dataset_hash=digest)
    print(format_table(rows, ("n", "m", "mse", "mae", "r2", "error")), end="")
    return 0


def _max_error(W, b, values: np.ndarray, n: int, m: int, relative: bool) -> float:
    from .series import MultivariateSeries

    X, Y = window_arrays(MultivariateSeries(values), n, m)
    err = np.abs(X @ W + b - Y)
    if relative:
        err = err / np.maximum(np.abs(Y), 1.0)
    return float(err.max())


def cmd_closed_form(args) -> int:
    started = time.perf_counter()
    n = args.n
    check = load_csv(args.check_data).values if args.check_data else None
    if args.periods:
        lcm = checked_lcm(args.periods)
        m = args.m or n
        lf = build_multiperiod_solution(args.periods, n, m)
        W, b = lf.W, lf.b
        values = check if check is not None else gen_integer_periodic(max(args.length, n + m + 1), args.periods).values
        err = _max_error(W, b, values, n, m, relative=False)
        print(f"shared solution for periods {args.periods}: lcm={lcm}, n={n}, m={m}, "
              f"channels={values.shape[0]}, max_abs_error={err:.3e}")
    else:
        if args.period is None:
            raise _Usage("--period or --periods is required")
        m = args.m or n
        affine = args.a is not None or args.c is not None
        a = 1.0 if args.a is None else args.a
        c = 0.0 if args.c is None else args.c
        if affine:
            W, b = build_affine_weights(n, m, args.period, args.k, a, c)
        else:
            W, b = build_periodic_weights(n, m, args.period, args.k)
        if check is not None:
            values = check
        elif affine:
            seg = np.random.default_rng(args.seed).normal(size=args.period)
            values = gen_affine_recurrent(n + m + args.period, args.period, a, c, seg).values
        else:
            values = gen_integer_periodic(max(args.length, n + m + 1), [args.period]).values
        err = _max_error(W, b, values, n, m, relative=affine)
        label = "max_rel_error" if affine else "max_abs_error"
        print(f"{'affine' if affine else 'periodic'} solution n={n}, m={m}, p={args.period}, k={args.k}: "
              f"{label}={err:.3e}")
    if args.out:
        out = Path(args.out)
        _write_matrix_csv(W, out)
        _write_manifest(out, "closed-form", args, [out], started)
    if args.tol is not None and err > args.tol:
        print(f"error {err:.3e} exceeds tolerance {args.tol:.1e}", file=sys.stderr)
        return 1
    return 0


def _write_matrix_csv(W: np.ndarray, path: Path) -> None:
    n, m = W.shape
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("row," + ",".join(f"out_{j}" for j in range(1, m + 1)) + "\n")
        for i in range(n):
            fh.write(f"in_{i + 1}," + ",".join(repr(float(v)) for v in W[i]) + "\n")


def cmd_export_weights(args) -> int:
    started = time.perf_counter()
    ck = load_checkpoint(args.ckpt)
    mats = ck.model.core.transition_matrix()
    if not 0 <= args.channel < mats.shape[0]:
        raise _Usage(f"--channel must be in [0, {mats.shape[0] - 1}]")
    W = mats[args.channel]
    out = Path(args.out)
    _write_matrix_csv(W, out)
    outputs = [out]
    if args.profile:
        profile = weight_periodicity_profile(W)
        prof_path = out.with_name(out.stem + "_profile.csv")
        with prof_path.open("w", encoding="utf-8") as fh:
            fh.write("d,lag,mean_abs_weight\n")
            for d, v in enumerate(profile):
                fh.write(f"{d},{d + 1},{float(v)!r}\n")
        outputs.append(prof_path)
        print(f"estimated period: {estimate_period(profile)}")
    _write_manifest(out, "export-weights", args, outputs, started)
    print(f"wrote {W.shape[0]}x{W.shape[1]} transition matrix to {out}")
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linearcast", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated series as CSV")
    p.add_argument("--kind", choices=["sine", "trend", "season_trend", "multiperiod", "affine_recurrent"])
    p.add_argument("--preset", choices=["three-sines", "five-sines", "five-sines-short", "trend2"],
                   help="canned signal: three-sines (omega 1/3, 1/5, 1/10), five-sines (omega 1/30 .. 1/3, "
                        "length 3000, or 200 with five-sines-short), trend2 two-channel trend")
    p.add_argument("--length", type=positive_int)
    p.add_argument("--omega", type=positive_float, default=2 * math.pi / 24)
    p.add_argument("--omegas", type=float_list)
    p.add_argument("--periods", type=int_list, help="integer periods (multiperiod)")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--slope", type=float, default=1.0)
    p.add_argument("--intercept", type=float, default=0.0)
    p.add_argument("--period", type=positive_int)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train", help="train a model and write checkpoint + history")
    p.add_argument("--model", choices=sorted(PRESET_MODELS), default="rlinear")
    _add_data_args(p)
    p.add_argument("--input-len", type=positive_int, default=336)
    p.add_argument("--pred-len", type=positive_int, default=96)
    _add_train_args(p)
    p.add_argument("--ckpt", default="model.ckpt.json")
    p.add_argument("--history", help="history CSV path (default: <ckpt>.history.csv)")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the history CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a checkpoint on the test split")
    p.add_argument("--ckpt", required=True)
    _add_data_args(p)
    p.add_argument("--runs", type=positive_int, default=1,
                   help="1: score the checkpoint; >1: retrain with that many seeds and average")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="train/evaluate over several input lengths")
    p.add_argument("--input-lens", type=int_list, required=True)
    p.add_argument("--pred-len", type=positive_int, default=96)
    p.add_argument("--model", choices=sorted(PRESET_MODELS), default="rlinear")
    _add_data_args(p)
    _add_train_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("closed-form", help="build and check an analytic transition matrix")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--m", type=positive_int)
    p.add_argument("--period", type=positive_int)
    p.add_argument("--periods", type=int_list)
    p.add_argument("--k", type=positive_int, default=1)
    p.add_argument("--a", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--check-data", help="CSV to verify against (default: generated series)")
    p.add_argument("--length", type=positive_int, default=500, help="length of the generated check series")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, help="exit 1 when the error exceeds this")
    p.add_argument("--out", help="write W as CSV")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("export-weights", help="write a checkpoint's transition matrix as CSV")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--channel", type=int, default=0, help="replica to export in channel-independent mode")
    p.add_argument("--profile", action="store_true", help="also write the stripe profile and estimated period")
    p.set_defaults(func=cmd_export_weights)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"linearcast {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"linearcast {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ForecastError as exc:
        print(f"linearcast {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
