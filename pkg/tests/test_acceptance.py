"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.  Vendor-synthesis numbers (LUT/FF/Fmax from commercial tools)
are out of scope; everything here is property- or oracle-based, plus the
structural counts the architecture fixes exactly.
"""

import itertools
import time

import numpy as np

from dwngen import cli
from dwngen.encoder import distributive_thresholds, encode_feature, uniform_thresholds
from dwngen.fixedpoint import (
    CapacityError,
    FixedPointFormat,
    ptq_search,
    quantize_dataset,
    quantize_model,
    quantize_value,
)
from dwngen.model import ModelConfig, PRESETS, load_model, normalize_dataset, save_dataset
from dwngen.netlist import (
    build_macro_netlist,
    build_macro_netlist_for_shape,
    interpret_luts_batch,
    interpret_macro_batch,
    lower_to_luts,
    popcount_netlist,
)
from dwngen.simulator import accuracy, argmax, predict
from dwngen.trainer import fit_toy, gaussian_blobs

from conftest import random_model


def ok(name):
    print(f"[ACCEPTANCE] {name}: PASS")


def toy_16feature_model(seed, luts_per_class, bits_per_feature=48):
    # preset-shaped (F=16, k=6, C=5) but with T sized so n=5 stays within
    # the (1,n) capacity 2**(n+1) >= T
    rng = np.random.default_rng(seed)
    data = normalize_dataset(gaussian_blobs(400, 16, 5, rng))
    cfg = ModelConfig(16, bits_per_feature, 6, 5, luts_per_class)
    return fit_toy(data, cfg, seed=seed), data


def test_golden_chain_equivalence():
    start = time.time()
    rng = np.random.default_rng(2024)
    for luts_per_class in (2, 10):  # sm-10 and sm-50 shapes
        model, _ = toy_16feature_model(7 + luts_per_class, luts_per_class)
        for n in (5, 7, 8):
            qm = quantize_model(model, n)
            fmt = FixedPointFormat(n)
            lo, hi = fmt.mantissa_range()
            words = rng.integers(lo, hi + 1, size=(10_000, 16), dtype=np.int64)
            macro = build_macro_netlist(qm)
            low = lower_to_luts(macro)
            mi, mv = interpret_macro_batch(macro, words)
            li, lv = interpret_luts_batch(low, words)
            si = predict(qm, words * fmt.step)
            assert np.array_equal(mi, li), (luts_per_class, n)
            assert np.array_equal(mv, lv), (luts_per_class, n)
            assert np.array_equal(si, mi), (luts_per_class, n)
    elapsed = time.time() - start
    assert elapsed < 60.0, f"golden chain took {elapsed:.1f}s"
    ok(f"golden-chain equivalence (6 configs x 10^4 vectors, {elapsed:.1f}s)")


def test_structural_counts():
    rng = np.random.default_rng(11)
    sm50 = random_model(rng, PRESETS["sm-50"], frac_bits=7, name="sm-50")
    macro = build_macro_netlist(sm50)
    assert len(macro.ge_nodes) == 16 * 200 == 3200
    assert len(macro.cmp_nodes) == 5 - 1 == 4
    lowered = lower_to_luts(macro)
    assert lowered.counts_by_label()["lut_layer"] == 50
    ok("structural counts (3200 comparators, 50 layer LUTs, 4 index comparators)")


def test_thermometer_properties():
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        count = int(rng.integers(1, 12))
        ts = np.sort(rng.uniform(-2, 2, size=count))
        ts = ts[np.concatenate(([True], np.diff(ts) > 0))]
        x, y = np.sort(rng.uniform(-3, 3, size=2))
        bx, by = encode_feature(x, ts), encode_feature(y, ts)
        assert not np.any(np.diff(bx.astype(int)) > 0), "contiguous-ones violated"
        assert bx.sum() <= by.sum(), "monotonicity violated"

    lo, hi, count = -1.0, 1.0, 64
    values = rng.uniform(lo, hi, size=100_000)
    dist = distributive_thresholds(values, count)
    uni = uniform_thresholds(lo, hi, count)
    worst = float(np.max(np.abs(dist - uni)))
    assert worst <= 0.02 * (hi - lo)
    ok(f"thermometer properties (10^4 cases; quantile drift {worst:.4f} <= 0.04)")


def test_quantization_bounds():
    rng = np.random.default_rng(4)
    for n in range(2, 13):
        fmt = FixedPointFormat(n)
        xs = rng.uniform(-1.0, fmt.max_value, size=100_000)
        qs = quantize_value(xs, fmt)
        assert np.max(np.abs(qs - xs)) <= 2.0 ** -(n + 1)
        assert np.array_equal(quantize_value(qs, fmt), qs)
        assert quantize_value(fmt.max_value + 1e-9, fmt) == fmt.max_value
        assert quantize_value(5.0, fmt) == fmt.max_value
        assert quantize_value(-1.0, fmt) == -1.0
        assert quantize_value(-7.3, fmt) == -1.0
    ok("quantization error bound, saturation, idempotence (n in 2..12)")


def test_ptq_oracle():
    rng = np.random.default_rng(5)
    data = normalize_dataset(gaussian_blobs(300, 6, 3, rng))
    model = fit_toy(data, ModelConfig(6, 24, 4, 3, 3), seed=9)
    baseline = accuracy(model, data) - 0.03
    n_max = 12
    result = ptq_search(model, data, baseline, n_max=n_max)

    # independent oracle: full sweep, then replay the first-failure-stop rule
    sweep = {}
    for n in range(n_max, 0, -1):
        try:
            qm = quantize_model(model, n)
            sweep[n] = accuracy(qm, quantize_dataset(data, n))
        except CapacityError:
            sweep[n] = None
    chosen = None
    trace = []
    for n in range(n_max, 0, -1):
        trace.append((n, sweep[n]))
        if sweep[n] is None or sweep[n] < baseline:
            break
        chosen = n
    assert result.chosen_n == chosen
    assert list(result.trace) == trace
    ok(f"PTQ first-failure-stop equals exhaustive oracle (chosen n={chosen})")


def test_popcount_lowering_exhaustive():
    for width in range(1, 13):
        net = popcount_netlist(width, 6)
        words = np.array(
            [[(x >> i) & 1 for i in range(width)] for x in range(1 << width)],
            dtype=np.int64,
        )
        _, val = interpret_luts_batch(net, words)
        expect = np.array([bin(x).count("1") for x in range(1 << width)])
        assert np.array_equal(val, expect), f"popcount({width})"
    ok("popcount lowering exact for B in 1..12 (exhaustive)")


def test_argmax_tiebreak_exhaustive():
    checked = 0
    for scores in itertools.product(range(4), repeat=5):
        best = max(range(5), key=lambda i: (scores[i], -i))
        assert argmax(scores) == (best, max(scores))
        checked += 1
    assert checked == 1024
    ok("argmax tree = lowest-index linear scan (1024 exhaustive cases)")


def test_pipeline_smoke(tmp_path, capsys):
    rng = np.random.default_rng(6)
    blobs = gaussian_blobs(300, 4, 2, rng)
    csv = tmp_path / "blobs.csv"
    csv.write_text(save_dataset(blobs))
    out = tmp_path / "build"
    code = cli.main([
        "--seed", "7", "--json", "pipeline",
        "--data", str(csv), "--shape", "4,24,4,2,4",
        "--baseline", "0.9", "--out-dir", str(out),
    ])
    captured = capsys.readouterr().out
    assert code == 0, captured
    import json

    summary = json.loads(captured)
    assert summary["train_accuracy"] >= 0.9
    assert summary["chosen_frac_bits"] >= 1
    module = summary["module"]
    assert (out / f"{module}.v").exists() and (out / f"{module}_tb.v").exists()

    model = load_model((out / "model.json").read_text())
    net = lower_to_luts(build_macro_netlist(model))
    rows = (out / "vectors.csv").read_text().strip().splitlines()[1:]
    cells = np.array([[int(c) for c in r.split(",")] for r in rows])
    idx, val = interpret_luts_batch(net, cells[:, :4])
    assert np.array_equal(idx, cells[:, 4])
    assert np.array_equal(val, cells[:, 5])
    ok(
        "pipeline smoke (train acc "
        f"{summary['train_accuracy']:.3f}, n={summary['chosen_frac_bits']}, "
        "vectors.csv == interpret_luts)"
    )


def test_encoder_dominance_trend():
    for preset in ("sm-10", "sm-50", "md-360"):
        for width in (6, 8, 9):
            low = lower_to_luts(
                build_macro_netlist_for_shape(PRESETS[preset], width - 1, preset)
            )
            c = low.counts_by_label()
            others = c["lut_layer"] + c["popcount"] + c["argmax"]
            assert c["encoder"] > others, (preset, width, c)
    low = lower_to_luts(build_macro_netlist_for_shape(PRESETS["lg-2400"], 8, "lg-2400"))
    c = low.counts_by_label()
    assert c["encoder"] < c["lut_layer"] + c["popcount"], c
    ok("encoder dominance for sm/md at w=6,8,9; flipped for lg-2400 at w=9")
