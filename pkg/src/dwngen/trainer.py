"""Desk-scale model construction for end-to-end pipeline testing.

This is deliberately NOT the gradient-based training that produces
production DWN models; it exists so quantization, simulation, netlist and
Verilog stages have nontrivial models to chew on without any ML framework.
Externally trained checkpoints enter through the exporter instead.

The fit is a one-pass majority vote: thresholds at feature quantiles,
random (seeded) encoder-to-LUT wiring, and each truth-table entry set when
the samples addressing it are more of the LUT's class than the class prior
would predict.  Optional greedy hill climbing then flips single table bits
while that improves training accuracy.
"""

from __future__ import annotations

import numpy as np

from .encoder import thresholds_for_dataset
from .model import Dataset, DwnModel, ModelConfig


def gaussian_blobs(
    num_samples: int,
    num_features: int,
    num_classes: int,
    rng: np.random.Generator,
    center_scale: float = 4.0,
    spread: float = 0.5,
) -> Dataset:
    """Synthetic well-separated class blobs (raw, unnormalized values)."""
    centers = rng.uniform(-center_scale, center_scale, size=(num_classes, num_features))
    labels = rng.integers(0, num_classes, size=num_samples)
    features = centers[labels] + rng.normal(0.0, spread, size=(num_samples, num_features))
    return Dataset(num_features, features, labels.astype(np.int64))


def _lut_addresses(bits: np.ndarray, connections: np.ndarray, lut_arity: int) -> np.ndarray:
    weights = 1 << np.arange(lut_arity, dtype=np.int64)
    return bits[:, connections].astype(np.int64) @ weights


def fit_toy(
    data: Dataset,
    config: ModelConfig,
    seed: int,
    hill_climb_budget: int = 0,
    name: str = "toy",
) -> DwnModel:
    """Majority-vote fit, optionally refined by greedy bit flips.

    Deterministic for a given (data, config, seed).  The dataset must be
    normalized into [-1, 1) with labels below config.num_classes.
    """
    if len(data) == 0:
        raise ValueError("cannot fit on an empty dataset")
    if data.num_features != config.num_features:
        raise ValueError(
            f"dataset has {data.num_features} features, config wants {config.num_features}"
        )
    if data.labels.max() >= config.num_classes:
        raise ValueError("labels must be < num_classes")
    if data.features.min() < -1.0 or data.features.max() >= 1.0:
        raise ValueError("dataset must be normalized into [-1, 1) before fitting")

    F, T, k, C = (
        config.num_features,
        config.bits_per_feature,
        config.lut_arity,
        config.num_classes,
    )
    L = config.num_luts
    rng = np.random.default_rng(seed)

    thresholds = thresholds_for_dataset(data.features, T, "distributive")
    connections = rng.integers(0, F * T, size=(L, k), dtype=np.int64)

    bits = (data.features[:, :, None] >= thresholds[None, :, :]).astype(np.uint8)
    bits = bits.reshape(len(data), F * T)
    addr = _lut_addresses(bits, connections, k)

    N = len(data)
    class_count = np.bincount(data.labels, minlength=C)
    tables = []
    for i in range(L):
        cls = i // config.luts_per_class
        tot = np.bincount(addr[:, i], minlength=1 << k)
        mine = np.bincount(addr[data.labels == cls, i], minlength=1 << k)
        # mine/tot >= prior, compared exactly in integers; unaddressed entries
        # and classes absent from the split stay 0.
        set_bits = (mine > 0) & (mine * N >= class_count[cls] * tot)
        tables.append(sum(1 << int(a) for a in np.nonzero(set_bits)[0]))

    if hill_climb_budget > 0:
        tables = _hill_climb(tables, addr, data.labels, config, hill_climb_budget)

    return DwnModel(
        name=name,
        num_features=F,
        bits_per_feature=T,
        lut_arity=k,
        num_classes=C,
        luts_per_class=config.luts_per_class,
        thresholds=thresholds,
        connections=connections,
        truth_tables=tuple(tables),
        frac_bits=None,
    )


def _predictions(counts: np.ndarray) -> np.ndarray:
    return np.argmax(counts, axis=1)


def _hill_climb(
    tables: list[int],
    addr: np.ndarray,
    labels: np.ndarray,
    config: ModelConfig,
    budget: int,
) -> list[int]:
    """Flip the single table bit with the best accuracy gain, repeatedly."""
    tables = list(tables)
    L, C, k = config.num_luts, config.num_classes, config.lut_arity
    tbl = np.array(tables, dtype=np.uint64)
    outs = ((tbl[None, :] >> addr.astype(np.uint64)) & np.uint64(1)).astype(np.int64)
    counts = np.zeros((len(labels), C), dtype=np.int64)
    for c in range(C):
        cols = slice(c * config.luts_per_class, (c + 1) * config.luts_per_class)
        counts[:, c] = outs[:, cols].sum(axis=1)
    correct = _predictions(counts) == labels

    for _ in range(budget):
        best_gain, best_flip = 0, None
        for i in range(L):
            cls = i // config.luts_per_class
            for a in range(1 << k):
                affected = addr[:, i] == a
                if not affected.any():
                    continue
                step = 1 - 2 * int((tables[i] >> a) & 1)
                sub = counts[affected].copy()
                sub[:, cls] += step
                gain = int((_predictions(sub) == labels[affected]).sum()) - int(
                    correct[affected].sum()
                )
                if gain > best_gain:
                    best_gain, best_flip = gain, (i, a, step)
        if best_flip is None:
            break
        i, a, step = best_flip
        tables[i] ^= 1 << a
        cls = i // config.luts_per_class
        affected = addr[:, i] == a
        counts[affected, cls] += step
        correct[affected] = _predictions(counts[affected]) == labels[affected]
    return tables
