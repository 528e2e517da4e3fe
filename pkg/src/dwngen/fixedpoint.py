"""Signed fixed-point (1,n) quantization and the bit-width search.

The (1,n) format has one sign bit and n fractional bits: representable
values are m * 2**-n for integer mantissas m in [-2**n, 2**n - 1], i.e. the
range [-1, 1 - 2**-n].  Thresholds and accelerator inputs share the format,
so software accuracy matches what the generated hardware computes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Dataset, DwnModel, ModelFormatError


class CapacityError(ValueError):
    """Too few representable values to keep a threshold row strictly ascending."""


@dataclass(frozen=True)
class FixedPointFormat:
    """Signed (1,n) fixed point: 1 sign bit plus n fractional bits."""

    frac_bits: int

    def __post_init__(self):
        if self.frac_bits < 1:
            raise ValueError("frac_bits must be >= 1")

    @property
    def width(self) -> int:
        return self.frac_bits + 1

    @property
    def min_value(self) -> float:
        return -1.0

    @property
    def max_value(self) -> float:
        return 1.0 - 2.0 ** -self.frac_bits

    @property
    def step(self) -> float:
        return 2.0 ** -self.frac_bits

    def mantissa_range(self) -> tuple[int, int]:
        return -(1 << self.frac_bits), (1 << self.frac_bits) - 1

    def to_mantissa(self, x) -> np.ndarray:
        """Round to the nearest mantissa (ties to even), saturating."""
        lo, hi = self.mantissa_range()
        m = np.rint(np.asarray(x, dtype=np.float64) * (1 << self.frac_bits))
        return np.clip(m, lo, hi).astype(np.int64)

    def from_mantissa(self, m) -> np.ndarray:
        return np.asarray(m, dtype=np.float64) * self.step

    def is_representable(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.mantissa_range()
        m = x * (1 << self.frac_bits)
        return bool(np.all(m == np.round(m)) and np.all(m >= lo) and np.all(m <= hi))


def quantize_value(x, fmt: FixedPointFormat):
    """Nearest representable value; ties to even mantissa; saturating.

    For in-range x the error is at most half a step, 2**-(n+1).
    """
    out = fmt.from_mantissa(fmt.to_mantissa(x))
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def _strictify_mantissas(m: np.ndarray, lo: int, hi: int, where: str) -> np.ndarray:
    """Make a sorted mantissa row strictly ascending within [lo, hi]."""
    if len(m) > hi - lo + 1:
        raise CapacityError(
            f"{where}: {len(m)} thresholds cannot be distinct with "
            f"{hi - lo + 1} representable values"
        )
    m = m.copy()
    for i in range(1, len(m)):
        if m[i] <= m[i - 1]:
            m[i] = m[i - 1] + 1
    if m[-1] > hi:
        m[-1] = hi
        for i in range(len(m) - 2, -1, -1):
            if m[i] >= m[i + 1]:
                m[i] = m[i + 1] - 1
        if m[0] < lo:
            raise CapacityError(f"{where}: thresholds overflow [{lo}, {hi}] after dedup")
    return m


def quantize_model(model: DwnModel, frac_bits: int) -> DwnModel:
    """Quantize all thresholds to (1,n), restoring strict ascent per row.

    Collided thresholds are separated by minimal upward steps (shifting down
    from the top cap when the row saturates).  Raises CapacityError when a
    row has more thresholds than the format has representable values,
    i.e. T > 2**(n+1).
    """
    if model.frac_bits is not None and model.frac_bits < frac_bits:
        raise ModelFormatError(
            f"model is fixed({model.frac_bits}); cannot re-quantize to finer ({frac_bits}) precision"
        )
    fmt = FixedPointFormat(frac_bits)
    lo, hi = fmt.mantissa_range()
    T = model.bits_per_feature
    if T > (hi - lo + 1):
        raise CapacityError(
            f"{T} thresholds per feature exceed capacity 2**{frac_bits + 1} = {hi - lo + 1} of (1,{frac_bits})"
        )
    rows = []
    for f in range(model.num_features):
        m = fmt.to_mantissa(model.thresholds[f])
        m = _strictify_mantissas(m, lo, hi, f"feature {f}")
        rows.append(fmt.from_mantissa(m))
    return DwnModel(
        name=model.name,
        num_features=model.num_features,
        bits_per_feature=model.bits_per_feature,
        lut_arity=model.lut_arity,
        num_classes=model.num_classes,
        luts_per_class=model.luts_per_class,
        thresholds=np.stack(rows),
        connections=model.connections,
        truth_tables=model.truth_tables,
        frac_bits=frac_bits,
    )


def quantize_dataset(data: Dataset, frac_bits: int) -> Dataset:
    """Quantize every feature value, modeling (n+1)-bit inputs at the ports."""
    fmt = FixedPointFormat(frac_bits)
    return Dataset(
        data.num_features,
        quantize_value(data.features, fmt),
        data.labels,
        data.normalization,
    )


@dataclass(frozen=True)
class PtqResult:
    """Outcome of the fractional-bit search.

    ``trace`` records (n, accuracy) from n_max downward, contiguous in n; a
    None accuracy marks a capacity failure at that n.  ``chosen_n`` is None
    when even n_max missed the baseline.
    """

    baseline: float
    chosen_n: int | None
    accuracy: float | None
    trace: tuple[tuple[int, float | None], ...]

    @property
    def feasible(self) -> bool:
        return self.chosen_n is not None


def ptq_search(
    model: DwnModel,
    data: Dataset,
    baseline_acc: float,
    n_max: int = 15,
    n_min: int = 1,
) -> PtqResult:
    """Progressively reduce fractional bits until accuracy drops below baseline.

    Both thresholds and inputs are quantized at each candidate n.  The sweep
    runs from n_max downward and stops at the first n whose accuracy misses
    baseline_acc (capacity errors count as failures); the previous n, the
    smallest one still meeting the baseline, is chosen.
    """
    from .simulator import accuracy as eval_accuracy

    if model.frac_bits is not None:
        raise ModelFormatError("ptq_search expects a real-valued model")
    if not 0.0 < baseline_acc <= 1.0:
        raise ValueError(f"baseline_acc must be in (0, 1], got {baseline_acc}")
    if n_max < n_min:
        raise ValueError("n_max must be >= n_min")

    trace: list[tuple[int, float | None]] = []
    for n in range(n_max, n_min - 1, -1):
        try:
            qmodel = quantize_model(model, n)
        except CapacityError:
            trace.append((n, None))
            break
        acc = eval_accuracy(qmodel, quantize_dataset(data, n))
        trace.append((n, acc))
        if acc < baseline_acc:
            break

    passing = [(n, a) for n, a in trace if a is not None and a >= baseline_acc]
    if not passing:
        return PtqResult(baseline_acc, None, None, tuple(trace))
    chosen_n, acc = passing[-1]
    return PtqResult(baseline_acc, chosen_n, acc, tuple(trace))
