"""Thermometer threshold placement and encoding.

A feature value is encoded against T ascending thresholds as the bit vector
bit_j = [x >= t_j]; the result always has the contiguous-ones shape
1...10...0.  Thresholds come either from even spacing over a range
(uniform) or from empirical quantiles of the training data (distributive).
"""

from __future__ import annotations

import numpy as np

from .model import DwnModel


def uniform_thresholds(lo: float, hi: float, count: int) -> np.ndarray:
    """Evenly spaced thresholds strictly inside (lo, hi)."""
    if lo >= hi:
        raise ValueError(f"need lo < hi, got lo={lo}, hi={hi}")
    if count < 1:
        raise ValueError("count must be >= 1")
    j = np.arange(1, count + 1, dtype=np.float64)
    return lo + j * (hi - lo) / (count + 1)


def _strictly_ascending(values: np.ndarray) -> np.ndarray:
    """Bump exact duplicates upward by the smallest float step."""
    out = values.copy()
    for i in range(1, len(out)):
        if out[i] <= out[i - 1]:
            out[i] = np.nextafter(out[i - 1], np.inf)
    return out


def distributive_thresholds(values, count: int) -> np.ndarray:
    """Empirical quantiles of the data at probes (j+1)/(count+1).

    Linear interpolation between order statistics; duplicate quantiles (from
    heavy ties in the data) are perturbed upward so the result is strictly
    ascending, as the model invariant requires.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("values must be non-empty")
    if count < 1:
        raise ValueError("count must be >= 1")
    probes = np.arange(1, count + 1, dtype=np.float64) / (count + 1)
    qs = np.quantile(values, probes, method="linear")
    return _strictly_ascending(qs)


def encode_feature(x: float, thresholds: np.ndarray) -> np.ndarray:
    """Thermometer code of one value: bit_j = [x >= t_j], LSB-first."""
    return (x >= np.asarray(thresholds)).astype(np.uint8)


def encode_sample(model: DwnModel, sample) -> np.ndarray:
    """Concatenated per-feature codes; bit f*T + j = [x_f >= t_{f,j}]."""
    sample = np.asarray(sample, dtype=np.float64)
    if sample.shape != (model.num_features,):
        raise ValueError(
            f"sample length {sample.shape} != num_features {model.num_features}"
        )
    return (sample[:, None] >= model.thresholds).astype(np.uint8).reshape(-1)


def encode_batch(model: DwnModel, samples: np.ndarray) -> np.ndarray:
    """encode_sample over the rows of an (N, F) matrix, giving (N, F*T)."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[1] != model.num_features:
        raise ValueError(f"samples shape {samples.shape} != (N, {model.num_features})")
    bits = samples[:, :, None] >= model.thresholds[None, :, :]
    return bits.astype(np.uint8).reshape(samples.shape[0], -1)


def thresholds_for_dataset(features: np.ndarray, count: int, mode: str) -> np.ndarray:
    """Per-feature threshold matrix (F, count) for a whole feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    if mode == "uniform":
        rows = [
            uniform_thresholds(col.min(), col.max(), count)
            if col.max() > col.min()
            else _strictly_ascending(np.full(count, col.min()))
            for col in features.T
        ]
    elif mode == "distributive":
        rows = [distributive_thresholds(col, count) for col in features.T]
    else:
        raise ValueError(f"unknown threshold mode {mode!r}")
    return np.stack(rows)
