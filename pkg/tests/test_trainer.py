import numpy as np
import pytest

from dwngen.model import Dataset, ModelConfig, normalize_dataset
from dwngen.simulator import accuracy, infer
from dwngen.trainer import fit_toy, gaussian_blobs

from conftest import blob_split

SMALLISH = ModelConfig(num_features=4, bits_per_feature=16, lut_arity=4,
                       num_classes=2, luts_per_class=5)


def test_fit_deterministic():
    data = blob_split(1)
    a = fit_toy(data, SMALLISH, seed=7)
    b = fit_toy(data, SMALLISH, seed=7)
    assert np.array_equal(a.connections, b.connections)
    assert a.truth_tables == b.truth_tables
    assert np.array_equal(a.thresholds, b.thresholds)
    c = fit_toy(data, SMALLISH, seed=8)
    assert not np.array_equal(a.connections, c.connections)


def test_blobs_reach_90_percent():
    data = blob_split(2, num_samples=400)
    model = fit_toy(data, SMALLISH, seed=3)
    assert accuracy(model, data) >= 0.9


def test_single_sample_fits():
    for label in (0, 1):
        data = Dataset(2, np.array([[0.25, -0.5]]), np.array([label]))
        model = fit_toy(data, ModelConfig(2, 4, 2, 2, 2), seed=0)
        assert infer(model, data.features[0]) == label


def test_output_validates():
    # DwnModel construction re-checks every invariant
    data = blob_split(3, num_samples=50, num_classes=3)
    model = fit_toy(data, ModelConfig(4, 8, 3, 3, 2), seed=11)
    assert model.num_luts == 6
    assert np.all(np.diff(model.thresholds, axis=1) > 0)
    assert model.connections.max() < 4 * 8


def test_hill_climb_never_hurts():
    data = blob_split(4, num_samples=150, num_features=3, num_classes=3)
    cfg = ModelConfig(3, 6, 3, 3, 2)
    base = fit_toy(data, cfg, seed=5, hill_climb_budget=0)
    improved = fit_toy(data, cfg, seed=5, hill_climb_budget=12)
    assert accuracy(improved, data) >= accuracy(base, data)


def test_fit_rejects_bad_inputs():
    empty = Dataset(2, np.zeros((0, 2)), np.zeros(0, dtype=int))
    with pytest.raises(ValueError, match="empty"):
        fit_toy(empty, ModelConfig(2, 4, 2, 2, 1), seed=0)
    raw = Dataset(2, np.array([[5.0, -3.0]]), np.array([0]))
    with pytest.raises(ValueError, match="normalized"):
        fit_toy(raw, ModelConfig(2, 4, 2, 2, 1), seed=0)
    bad_labels = Dataset(2, np.array([[0.1, 0.2]]), np.array([5]))
    with pytest.raises(ValueError, match="labels"):
        fit_toy(bad_labels, ModelConfig(2, 4, 2, 2, 1), seed=0)


def test_blob_generator_shapes():
    rng = np.random.default_rng(0)
    data = gaussian_blobs(30, 5, 3, rng)
    assert data.features.shape == (30, 5)
    assert data.labels.max() < 3
    normalized = normalize_dataset(data)
    assert np.all(normalized.features >= -1) and np.all(normalized.features < 1)
