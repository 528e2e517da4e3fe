"""Bit-exact golden model of the inference pipeline.

encode -> LUT layer -> per-class popcount -> argmax.  This is the reference
the netlist interpreters and the emitted Verilog are checked against, so
every operation here is defined exactly: integer table lookups, integer
counts, and the lower-index tie-break in the comparison tree.
"""

from __future__ import annotations

import numpy as np

from .encoder import encode_batch, encode_sample
from .fixedpoint import FixedPointFormat
from .model import Dataset, DwnModel

# Class scores are a length-C integer vector: counts[c] is the number of
# 1-outputs among the luts_per_class LUTs of class c.
ClassScores = np.ndarray


def lut_eval(table: int, inputs) -> int:
    """Bit of `table` at address sum(inputs[i] << i); input 0 is the LSB."""
    addr = 0
    for i, b in enumerate(inputs):
        addr |= (int(b) & 1) << i
    return (int(table) >> addr) & 1


def _lut_addresses(model: DwnModel, encoded: np.ndarray) -> np.ndarray:
    """Per-LUT table addresses for encoded inputs of shape (..., F*T)."""
    gathered = encoded[..., model.connections]  # (..., L, k)
    weights = (1 << np.arange(model.lut_arity, dtype=np.int64))
    return gathered.astype(np.int64) @ weights


def class_scores(model: DwnModel, encoded: np.ndarray) -> ClassScores:
    """Count the 1-outputs of each class group of LUTs."""
    encoded = np.asarray(encoded)
    if encoded.shape != (model.encoder_bits,):
        raise ValueError(f"encoded width {encoded.shape} != {model.encoder_bits}")
    addr = _lut_addresses(model, encoded)
    tables = np.array(model.truth_tables, dtype=np.uint64)
    outs = (tables >> addr.astype(np.uint64)) & np.uint64(1)
    return outs.reshape(model.num_classes, model.luts_per_class).sum(axis=1).astype(np.int64)


def _scores_batch(model: DwnModel, samples: np.ndarray) -> np.ndarray:
    encoded = encode_batch(model, samples)
    addr = _lut_addresses(model, encoded)
    tables = np.array(model.truth_tables, dtype=np.uint64)
    outs = (tables[None, :] >> addr.astype(np.uint64)) & np.uint64(1)
    return outs.reshape(len(samples), model.num_classes, model.luts_per_class).sum(axis=2)


def argmax(scores) -> tuple[int, int]:
    """Smallest index attaining the maximum count, plus that count.

    Computed by pairwise tree reduction in ascending index order: each
    comparison propagates the strictly larger value, and on equality the
    lower-index operand; an unpaired operand is promoted unchanged.
    """
    pairs = [(int(v), i) for i, v in enumerate(scores)]
    if not pairs:
        raise ValueError("scores must be non-empty")
    while len(pairs) > 1:
        nxt = []
        for i in range(0, len(pairs) - 1, 2):
            (va, ia), (vb, ib) = pairs[i], pairs[i + 1]
            nxt.append((va, ia) if va >= vb else (vb, ib))
        if len(pairs) % 2:
            nxt.append(pairs[-1])
        pairs = nxt
    value, index = pairs[0]
    return index, value


def _check_quantized_inputs(model: DwnModel, values: np.ndarray) -> None:
    if model.frac_bits is None:
        return
    fmt = FixedPointFormat(model.frac_bits)
    if not fmt.is_representable(values):
        raise ValueError(
            f"model is fixed({model.frac_bits}) but inputs are not (1,{model.frac_bits}) values; "
            "quantize the inputs first"
        )


def infer(model: DwnModel, sample) -> int:
    """Predicted class index for one sample."""
    sample = np.asarray(sample, dtype=np.float64)
    _check_quantized_inputs(model, sample)
    index, _ = argmax(class_scores(model, encode_sample(model, sample)))
    return index


def predict(model: DwnModel, samples: np.ndarray) -> np.ndarray:
    """Vectorized infer over sample rows; identical results, batched."""
    samples = np.asarray(samples, dtype=np.float64)
    _check_quantized_inputs(model, samples)
    scores = _scores_batch(model, samples)
    # np.argmax takes the first maximum: the lowest-index tie-break.
    return np.argmax(scores, axis=1)


def accuracy(model: DwnModel, data: Dataset) -> float:
    """Fraction of samples whose prediction matches the label."""
    if len(data) == 0:
        raise ValueError("accuracy of an empty dataset is undefined")
    if data.labels.max() >= model.num_classes:
        raise ValueError(
            f"label {data.labels.max()} out of range for {model.num_classes} classes"
        )
    return float(np.mean(predict(model, data.features) == data.labels))
