import numpy as np
import pytest

from dwngen.fixedpoint import FixedPointFormat
from dwngen.model import Dataset, DwnModel, ModelConfig, normalize_dataset
from dwngen.trainer import gaussian_blobs


def random_model(
    rng: np.random.Generator,
    config: ModelConfig,
    frac_bits: int | None = None,
    name: str = "rnd",
) -> DwnModel:
    """A random valid model of the given shape (optionally fixed-point)."""
    F, T, k = config.num_features, config.bits_per_feature, config.lut_arity
    L = config.num_luts
    if frac_bits is None:
        thresholds = np.sort(rng.uniform(-1.0, 1.0, size=(F, T)), axis=1)
    else:
        fmt = FixedPointFormat(frac_bits)
        lo, hi = fmt.mantissa_range()
        assert T <= hi - lo + 1, "shape too large for the requested format"
        mants = [np.sort(rng.choice(np.arange(lo, hi + 1), size=T, replace=False)) for _ in range(F)]
        thresholds = np.stack(mants) * fmt.step
    tables = rng.integers(0, 1 << (1 << k), size=L, dtype=np.uint64)
    return DwnModel(
        name=name,
        num_features=F,
        bits_per_feature=T,
        lut_arity=k,
        num_classes=config.num_classes,
        luts_per_class=config.luts_per_class,
        thresholds=thresholds,
        connections=rng.integers(0, F * T, size=(L, k)),
        truth_tables=tuple(int(t) for t in tables),
        frac_bits=frac_bits,
    )


def random_shape(rng: np.random.Generator, max_arity: int = 6) -> ModelConfig:
    return ModelConfig(
        num_features=int(rng.integers(1, 5)),
        bits_per_feature=int(rng.integers(1, 9)),
        lut_arity=int(rng.integers(2, max_arity + 1)),
        num_classes=int(rng.integers(1, 6)),
        luts_per_class=int(rng.integers(1, 5)),
    )


def blob_split(
    seed: int,
    num_samples: int = 300,
    num_features: int = 4,
    num_classes: int = 2,
) -> Dataset:
    rng = np.random.default_rng(seed)
    return normalize_dataset(gaussian_blobs(num_samples, num_features, num_classes, rng))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
