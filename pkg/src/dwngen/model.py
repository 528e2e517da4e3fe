"""Data model for DWN accelerators: model description, datasets, file I/O.

A ``DwnModel`` is the complete inference-time description of a single-layer
differential weightless network: per-feature thermometer thresholds, the
encoder-output-to-LUT wiring, and the LUT truth tables, grouped per class.
Everything downstream (simulation, quantization, netlist construction,
Verilog emission) consumes this one structure.

Conventions fixed here and shared by all other modules:

* Encoder output bits are flattened feature-major: bit ``f * T + j`` is
  threshold ``j`` of feature ``f``.
* A truth table is an integer of ``2**k`` bits; bit ``a`` is the LUT output
  for address ``a``, and connection column 0 drives the least significant
  address bit.  On disk, tables are zero-padded hex strings.
* Thresholds within a feature row are strictly ascending.
"""

from __future__ import annotations

import io
import json
import warnings
from dataclasses import dataclass

import numpy as np

COMPONENTS = ("encoder", "lut_layer", "popcount", "argmax")

# Top-of-range guard for normalization: the largest training value maps to
# -1 + 2/(1 + 2**-20), strictly below 1.
NORM_EPS_SHIFT = 20


class ModelFormatError(ValueError):
    """Model document violates the schema or a model invariant."""


class DatasetFormatError(ValueError):
    """Dataset text is malformed (ragged rows, bad cells, bad labels)."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ModelConfig:
    """Shape of a DWN model, without learned parameters."""

    num_features: int
    bits_per_feature: int
    lut_arity: int
    num_classes: int
    luts_per_class: int

    @property
    def num_luts(self) -> int:
        return self.num_classes * self.luts_per_class


# Named model sizes; the numeric suffix is the LUT-layer size L.  All share
# 16 input features, 200 thresholds per feature, 6-input LUTs, 5 classes.
PRESETS: dict[str, ModelConfig] = {
    "sm-10": ModelConfig(16, 200, 6, 5, 2),
    "sm-50": ModelConfig(16, 200, 6, 5, 10),
    "md-360": ModelConfig(16, 200, 6, 5, 72),
    "lg-2400": ModelConfig(16, 200, 6, 5, 480),
}

# Reference accuracies the bit-width search defends for each named size
# (the accuracy each size reaches on the 16-feature jet-classification
# benchmark before quantization); pipeline uses these when --baseline is
# omitted for a preset.
PRESET_BASELINES: dict[str, float] = {
    "sm-10": 0.711,
    "sm-50": 0.740,
    "md-360": 0.756,
    "lg-2400": 0.763,
}


@dataclass(frozen=True)
class DwnModel:
    """Complete inference-time description of a single-layer DWN.

    ``frac_bits`` is None for real-valued thresholds, or n for signed
    fixed-point (1,n) thresholds (1 sign bit, n fractional bits).
    """

    name: str
    num_features: int
    bits_per_feature: int
    lut_arity: int
    num_classes: int
    luts_per_class: int
    thresholds: np.ndarray  # (F, T) float64, strictly ascending rows
    connections: np.ndarray  # (L, k) int64, indices into [0, F*T)
    truth_tables: tuple[int, ...]  # L tables, each 2**k bits
    frac_bits: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "thresholds", _freeze(np.asarray(self.thresholds, dtype=np.float64)))
        object.__setattr__(self, "connections", _freeze(np.asarray(self.connections, dtype=np.int64)))
        object.__setattr__(self, "truth_tables", tuple(int(t) for t in self.truth_tables))
        validate_model(self)

    @property
    def num_luts(self) -> int:
        return self.num_classes * self.luts_per_class

    @property
    def encoder_bits(self) -> int:
        return self.num_features * self.bits_per_feature

    @property
    def config(self) -> ModelConfig:
        return ModelConfig(
            self.num_features,
            self.bits_per_feature,
            self.lut_arity,
            self.num_classes,
            self.luts_per_class,
        )

    def class_of_lut(self, i: int) -> int:
        return i // self.luts_per_class


def validate_model(m: DwnModel) -> None:
    """Check every model invariant; raise ModelFormatError with a location."""
    F, T, k, C = m.num_features, m.bits_per_feature, m.lut_arity, m.num_classes
    if F < 1:
        raise ModelFormatError("num_features must be >= 1")
    if T < 1:
        raise ModelFormatError("bits_per_feature must be >= 1")
    if not 2 <= k <= 6:
        raise ModelFormatError(f"lut_arity must be in [2, 6], got {k}")
    if C < 1:
        raise ModelFormatError("num_classes must be >= 1")
    if m.luts_per_class < 1:
        raise ModelFormatError("luts_per_class must be >= 1")

    L = C * m.luts_per_class
    if m.thresholds.shape != (F, T):
        raise ModelFormatError(
            f"thresholds shape {m.thresholds.shape} != ({F}, {T})"
        )
    if m.connections.shape != (L, k):
        raise ModelFormatError(
            f"connections shape {m.connections.shape} != ({L}, {k})"
        )
    if len(m.truth_tables) != L:
        raise ModelFormatError(
            f"expected {L} truth tables, got {len(m.truth_tables)}"
        )

    diffs = np.diff(m.thresholds, axis=1)
    if T > 1 and not np.all(diffs > 0):
        f, j = np.argwhere(diffs <= 0)[0]
        raise ModelFormatError(
            f"thresholds not strictly ascending: thresholds[{f}] at column {j + 1}"
        )

    if m.connections.size and (m.connections.min() < 0 or m.connections.max() >= F * T):
        i, c = np.argwhere((m.connections < 0) | (m.connections >= F * T))[0]
        raise ModelFormatError(
            f"connection index out of range [0, {F * T}): connections[{i}][{c}] = {m.connections[i, c]}"
        )

    table_bits = 1 << k
    for i, t in enumerate(m.truth_tables):
        if not 0 <= t < (1 << table_bits):
            raise ModelFormatError(f"truth_tables[{i}] does not fit in {table_bits} bits")

    if m.frac_bits is not None:
        n = m.frac_bits
        if n < 1:
            raise ModelFormatError("frac_bits must be >= 1 for fixed-point thresholds")
        scaled = m.thresholds * (1 << n)
        if not np.all(scaled == np.round(scaled)):
            f, j = np.argwhere(scaled != np.round(scaled))[0]
            raise ModelFormatError(
                f"thresholds[{f}][{j}] = {m.thresholds[f, j]} not representable in (1,{n})"
            )
        lo, hi = -1.0, 1.0 - 2.0 ** -n
        if m.thresholds.min() < lo or m.thresholds.max() > hi:
            f, j = np.argwhere((m.thresholds < lo) | (m.thresholds > hi))[0]
            raise ModelFormatError(
                f"thresholds[{f}][{j}] = {m.thresholds[f, j]} outside [{lo}, {hi}]"
            )


def table_to_hex(table: int, lut_arity: int) -> str:
    digits = max(1, (1 << lut_arity) // 4)
    return format(table, f"0{digits}x")


def table_from_hex(text: str, lut_arity: int, where: str) -> int:
    digits = max(1, (1 << lut_arity) // 4)
    if len(text) != digits:
        raise ModelFormatError(f"{where}: expected {digits} hex digits, got {len(text)}")
    try:
        return int(text, 16)
    except ValueError:
        raise ModelFormatError(f"{where}: not a hex string: {text!r}") from None


_REQUIRED_KEYS = (
    "name",
    "num_features",
    "bits_per_feature",
    "lut_arity",
    "num_classes",
    "luts_per_class",
    "threshold_format",
    "thresholds",
    "connections",
    "truth_tables",
)


def load_model(text: str) -> DwnModel:
    """Parse and validate a model JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("top level must be a JSON object")
    for key in _REQUIRED_KEYS:
        if key not in doc:
            raise ModelFormatError(f"missing required key: {key}")

    fmt = doc["threshold_format"]
    if not isinstance(fmt, dict) or "mode" not in fmt:
        raise ModelFormatError("threshold_format must be an object with a 'mode'")
    if fmt["mode"] == "real":
        frac_bits = None
    elif fmt["mode"] == "fixed":
        if "frac_bits" not in fmt:
            raise ModelFormatError("threshold_format: fixed mode requires frac_bits")
        frac_bits = int(fmt["frac_bits"])
    else:
        raise ModelFormatError(f"threshold_format.mode must be 'real' or 'fixed', got {fmt['mode']!r}")

    k = int(doc["lut_arity"])
    if not 2 <= k <= 6:
        raise ModelFormatError(f"lut_arity must be in [2, 6], got {k}")
    tables = doc["truth_tables"]
    if not isinstance(tables, list):
        raise ModelFormatError("truth_tables must be a list of hex strings")
    parsed_tables = [
        table_from_hex(t, k, f"truth_tables[{i}]") for i, t in enumerate(tables)
    ]

    try:
        thresholds = np.array(doc["thresholds"], dtype=np.float64)
        connections = np.array(doc["connections"], dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise ModelFormatError(f"thresholds/connections not rectangular numeric arrays: {e}") from None
    if thresholds.ndim != 2:
        raise ModelFormatError("thresholds must be an array of per-feature rows")
    if connections.ndim != 2:
        raise ModelFormatError("connections must be an array of per-LUT rows")

    return DwnModel(
        name=str(doc["name"]),
        num_features=int(doc["num_features"]),
        bits_per_feature=int(doc["bits_per_feature"]),
        lut_arity=k,
        num_classes=int(doc["num_classes"]),
        luts_per_class=int(doc["luts_per_class"]),
        thresholds=thresholds,
        connections=connections,
        truth_tables=tuple(parsed_tables),
        frac_bits=frac_bits,
    )


def save_model(model: DwnModel) -> str:
    """Serialize to JSON; load_model(save_model(m)) reproduces m exactly."""
    if model.frac_bits is None:
        fmt = {"mode": "real"}
    else:
        fmt = {"mode": "fixed", "frac_bits": model.frac_bits}
    doc = {
        "name": model.name,
        "num_features": model.num_features,
        "bits_per_feature": model.bits_per_feature,
        "lut_arity": model.lut_arity,
        "num_classes": model.num_classes,
        "luts_per_class": model.luts_per_class,
        "threshold_format": fmt,
        "thresholds": [[float(x) for x in row] for row in model.thresholds],
        "connections": [[int(x) for x in row] for row in model.connections],
        "truth_tables": [table_to_hex(t, model.lut_arity) for t in model.truth_tables],
    }
    return json.dumps(doc, indent=2)


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus integer labels, with optional normalization stats.

    ``normalization`` is an (F, 2) array of per-feature (min, max) from the
    split the stats were fitted on, or None for raw data.
    """

    num_features: int
    features: np.ndarray  # (N, F) float64
    labels: np.ndarray  # (N,) int64
    normalization: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "features", _freeze(np.asarray(self.features, dtype=np.float64)))
        object.__setattr__(self, "labels", _freeze(np.asarray(self.labels, dtype=np.int64)))
        if self.normalization is not None:
            object.__setattr__(self, "normalization", _freeze(np.asarray(self.normalization, dtype=np.float64)))
        if self.features.shape != (len(self.labels), self.num_features):
            raise DatasetFormatError(
                f"features shape {self.features.shape} != ({len(self.labels)}, {self.num_features})"
            )

    def __len__(self) -> int:
        return len(self.labels)


def load_dataset(text: str, num_features: int, skip_header: bool = False) -> Dataset:
    """Parse CSV with num_features numeric columns plus one integer label.

    Returns raw (unnormalized) values; normalization metadata is unset.
    """
    rows = []
    labels = []
    lines = io.StringIO(text).read().splitlines()
    if skip_header and lines:
        lines = lines[1:]
    for lineno, line in enumerate(lines, start=1 + int(skip_header)):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != num_features + 1:
            raise DatasetFormatError(
                f"line {lineno}: expected {num_features + 1} columns, got {len(cells)}"
            )
        try:
            rows.append([float(c) for c in cells[:-1]])
        except ValueError:
            raise DatasetFormatError(f"line {lineno}: non-numeric feature cell") from None
        cell = cells[-1].strip()
        try:
            label = int(cell)
        except ValueError:
            raise DatasetFormatError(f"line {lineno}: label {cell!r} is not an integer") from None
        if label < 0:
            raise DatasetFormatError(f"line {lineno}: negative label {label}")
        labels.append(label)
    features = np.array(rows, dtype=np.float64).reshape(len(rows), num_features)
    return Dataset(num_features, features, np.array(labels, dtype=np.int64))


def save_dataset(data: Dataset) -> str:
    out = io.StringIO()
    for x, y in zip(data.features, data.labels):
        out.write(",".join(repr(float(v)) for v in x))
        out.write(f",{int(y)}\n")
    return out.getvalue()


def _norm_map(features: np.ndarray, stats: np.ndarray) -> np.ndarray:
    lo = stats[:, 0]
    hi = stats[:, 1]
    span = hi - lo
    eps = span * 2.0 ** -NORM_EPS_SHIFT
    out = np.zeros_like(features)
    ok = span > 0
    out[:, ok] = -1.0 + 2.0 * (features[:, ok] - lo[ok]) / (span[ok] + eps[ok])
    # Constant features carry no information; pin them to mid-range.
    out[:, ~ok] = 0.0
    return np.clip(out, -1.0, 1.0 - 2.0 ** -NORM_EPS_SHIFT)


def normalize_dataset(data: Dataset) -> Dataset:
    """Fit per-feature min/max on this split and map values into [-1, 1).

    The fitted (min, max) are recorded so unseen samples can reuse the same
    mapping via apply_normalization; constant features map to 0.0 with a
    warning rather than an error.
    """
    if len(data) == 0:
        raise DatasetFormatError("cannot normalize an empty dataset")
    stats = np.stack([data.features.min(axis=0), data.features.max(axis=0)], axis=1)
    const = np.nonzero(stats[:, 1] == stats[:, 0])[0]
    if const.size:
        warnings.warn(
            f"constant feature(s) {const.tolist()} normalized to 0.0",
            stacklevel=2,
        )
    return Dataset(data.num_features, _norm_map(data.features, stats), data.labels, stats)


def apply_normalization(data: Dataset, stats: np.ndarray) -> Dataset:
    """Map an unseen split through previously fitted stats, clamped to [-1, 1)."""
    stats = np.asarray(stats, dtype=np.float64)
    if stats.shape != (data.num_features, 2):
        raise DatasetFormatError(f"normalization stats shape {stats.shape} != ({data.num_features}, 2)")
    return Dataset(data.num_features, _norm_map(data.features, stats), data.labels, stats)
