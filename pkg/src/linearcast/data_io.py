"""CSV ingestion, dataset presets and checkpoint persistence."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ChannelCountMismatch,
    MissingFile,
    NonFiniteValue,
    ParseError,
    ShapeCorruption,
    VersionMismatch,
)
from .models import FrozenRandomCore, ForecastModel, LinearCore, MlpCore
from .normalization import RevinState
from .series import MultivariateSeries, ScalerStats, SplitSpec

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
DATA_DIR_ENV = "LINEARCAST_DATA_DIR"


@dataclass(frozen=True)
class DatasetPreset:
    name: str
    expected_channels: int | None
    split: SplitSpec
    date_column: str = "date"
    file_name: str | None = None
    expected_rows: int | None = None
    granularity: str | None = None

    @property
    def strict(self) -> bool:
        # Channel/row mismatches are fatal for ETT, warnings elsewhere.
        return self.name.startswith("ett")


_ETT_HOURLY_ROWS = 17420

PRESETS: dict[str, DatasetPreset] = {
    "etth1": DatasetPreset("etth1", 7, SplitSpec.ett_hourly(), file_name="ETTh1.csv",
                           expected_rows=_ETT_HOURLY_ROWS, granularity="1h"),
    "etth2": DatasetPreset("etth2", 7, SplitSpec.ett_hourly(), file_name="ETTh2.csv",
                           expected_rows=_ETT_HOURLY_ROWS, granularity="1h"),
    "ettm1": DatasetPreset("ettm1", 7, SplitSpec.ett_15min(), file_name="ETTm1.csv",
                           expected_rows=4 * _ETT_HOURLY_ROWS, granularity="15min"),
    "ettm2": DatasetPreset("ettm2", 7, SplitSpec.ett_15min(), file_name="ETTm2.csv",
                           expected_rows=4 * _ETT_HOURLY_ROWS, granularity="15min"),
    "weather": DatasetPreset("weather", 21, SplitSpec("ratio_7_2_1"), file_name="weather.csv",
                             expected_rows=52696, granularity="10min"),
    "ecl": DatasetPreset("ecl", 321, SplitSpec("ratio_7_2_1"), file_name="electricity.csv",
                         expected_rows=26304, granularity="1h"),
    "custom": DatasetPreset("custom", None, SplitSpec("ratio_7_2_1")),
}


def preset_path(preset: DatasetPreset, data_dir: str | os.PathLike | None = None) -> Path:
    """Default file location: ``$LINEARCAST_DATA_DIR/<file_name>``."""
    if preset.file_name is None:
        raise MissingFile(f"preset {preset.name!r} has no default file; pass a path")
    base = data_dir or os.environ.get(DATA_DIR_ENV, "data")
    return Path(base) / preset.file_name


def load_csv(path: str | os.PathLike, preset: DatasetPreset = PRESETS["custom"]) -> MultivariateSeries:
    """Read ``date,<ch1>,<ch2>,...``; every non-date column becomes a channel.

    Row and column numbers in errors are 1-indexed file coordinates (the
    header is row 1).
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, 1, f"{path} is empty") from None
        if len(header) < 2:
            raise ParseError(1, len(header), "need a date column and at least one channel")
        names = [h.strip() for h in header[1:]]
        rows = []
        for r, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise ParseError(r, len(rec), f"expected {len(header)} fields, got {len(rec)}")
            vals = []
            for col, cell in enumerate(rec[1:], start=2):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(r, col, f"cannot parse {cell!r} at row {r}, column {col}") from None
                if not math.isfinite(v):
                    raise NonFiniteValue(r, col)
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ParseError(2, 1, f"{path} has no data rows")

    c = len(names)
    if preset.expected_channels is not None and c != preset.expected_channels:
        msg = f"{path}: expected {preset.expected_channels} channels for {preset.name}, found {c}"
        if preset.strict:
            raise ChannelCountMismatch(msg)
        log.warning(msg)
    if preset.expected_rows is not None and len(rows) != preset.expected_rows:
        log.warning("%s: expected %d rows for %s, found %d", path, preset.expected_rows, preset.name, len(rows))
    return MultivariateSeries(np.array(rows).T, tuple(names), preset.granularity)


def write_csv(series: MultivariateSeries, path: str | os.PathLike, date_column: str = "date") -> None:
    """Inverse of :func:`load_csv`; the date column holds the integer step index."""
    names = series.channel_names or tuple(f"ch{i}" for i in range(series.channels))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([date_column, *names])
        for t in range(series.length):
            w.writerow([t, *(repr(float(v)) for v in series.values[:, t])])


def file_sha256(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# -- checkpoints -------------------------------------------------------------

def _block(name: str, arr: np.ndarray, trainable: bool = True) -> dict:
    # json writes floats with repr(), which round-trips float64 exactly.
    return {"name": name, "shape": list(arr.shape), "trainable": trainable,
            "values": [float(v) for v in np.ravel(arr)]}


def save_checkpoint(
    model: ForecastModel,
    path: str | os.PathLike,
    scaler: ScalerStats | None = None,
    train_config: dict | None = None,
    seed: int | None = None,
    extra: dict | None = None,
) -> None:
    core = model.core
    params = [_block(f"core.{k}", v) for k, v in core.params.items()]
    if isinstance(core, FrozenRandomCore):
        params.append(_block("core.R", core.R, trainable=False))
    if model.revin is not None:
        params += [_block("revin.gamma", model.revin.gamma), _block("revin.beta", model.revin.beta)]
    doc = {
        "version": CHECKPOINT_VERSION,
        "model": core.kind,
        "dims": {"c": model.channels, "n": core.n, "m": core.m, "h": getattr(core, "hidden", None)},
        "flags": {
            "revin": model.revin is not None,
            "revin_eps": model.revin.eps if model.revin is not None else None,
            "channel_mode": model.channel_mode,
            "bias": core.bias,
            "frozen_seed": getattr(core, "frozen_seed", None),
        },
        "params": params,
        "scaler": None if scaler is None else {
            "mean": [float(v) for v in scaler.mean], "std": [float(v) for v in scaler.std]},
        "train_config": train_config,
        "seed": seed,
        "extra": extra or {},
    }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="utf-8")


@dataclass
class LoadedCheckpoint:
    model: ForecastModel
    scaler: ScalerStats | None
    train_config: dict | None
    seed: int | None
    extra: dict


def load_checkpoint(path: str | os.PathLike) -> LoadedCheckpoint:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(f"no such checkpoint: {path}") from None
    except OSError as exc:
        raise MissingFile(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeCorruption(f"{path} is not a complete checkpoint: {exc}") from None
    if not isinstance(doc, dict) or "version" not in doc:
        raise ShapeCorruption(f"{path} has no version field")
    if doc["version"] != CHECKPOINT_VERSION:
        raise VersionMismatch(f"checkpoint version {doc['version']}, expected {CHECKPOINT_VERSION}")
    try:
        return _materialize(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeCorruption(f"{path}: malformed checkpoint ({exc})") from None


def _materialize(doc: dict) -> LoadedCheckpoint:
    dims, flags = doc["dims"], doc["flags"]
    c, n, m = int(dims["c"]), int(dims["n"]), int(dims["m"])
    blocks = {}
    for blk in doc["params"]:
        shape = tuple(int(s) for s in blk["shape"])
        vals = np.array(blk["values"], dtype=np.float64)
        if vals.size != int(np.prod(shape)):
            raise ShapeCorruption(f"block {blk['name']}: {vals.size} values for shape {shape}")
        blocks[blk["name"]] = vals.reshape(shape)

    replicas = 1 if flags["channel_mode"] == "shared" else c
    kind, bias = doc["model"], bool(flags["bias"])
    h = dims.get("h")
    expected = {
        "linear": {"W": (n, m), "b": (m,)},
        "mlp": {"W1": (n, h), "b1": (h,), "W2": (h, n), "b2": (n,), "Wp": (n, m), "bp": (m,)},
        "frozen": {"Wp": (n, m), "bp": (m,)},
    }[kind]
    core_params = {}
    for k, shp in expected.items():
        if k.startswith("b") and not bias:
            continue
        arr = blocks.get(f"core.{k}")
        if arr is None or arr.shape != (replicas, *shp):
            got = None if arr is None else arr.shape
            raise ShapeCorruption(f"core.{k}: expected shape {(replicas, *shp)}, got {got}")
        core_params[k] = arr

    if kind == "linear":
        core = LinearCore(n, m, core_params, bias)
    elif kind == "mlp":
        core = MlpCore(n, m, int(h), core_params, bias)
    else:
        R = blocks.get("core.R")
        if R is None or R.shape != (replicas, n, n):
            raise ShapeCorruption("frozen checkpoint is missing a well-formed core.R block")
        R.setflags(write=False)
        core = FrozenRandomCore(n, m, R, core_params, bias, int(flags["frozen_seed"]))

    revin = None
    if flags["revin"]:
        g, b = blocks.get("revin.gamma"), blocks.get("revin.beta")
        if g is None or b is None or g.shape != (c,) or b.shape != (c,):
            raise ShapeCorruption("RevIN parameters missing or mis-shaped")
        revin = RevinState(g, b, float(flags["revin_eps"]))

    scaler = None
    if doc.get("scaler"):
        mean, std = np.array(doc["scaler"]["mean"]), np.array(doc["scaler"]["std"])
        if mean.shape != (c,) or std.shape != (c,):
            raise ShapeCorruption("scaler statistics do not match the channel count")
        scaler = ScalerStats(mean, std)
    model = ForecastModel(core, c, revin, flags["channel_mode"])
    return LoadedCheckpoint(model, scaler, doc.get("train_config"), doc.get("seed"), doc.get("extra") or {})
