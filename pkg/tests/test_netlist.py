import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwngen.fixedpoint import FixedPointFormat, quantize_dataset, quantize_model
from dwngen.model import DwnModel, ModelConfig, PRESETS
from dwngen.netlist import (
    CONST0,
    ENCODER,
    LUT_LAYER,
    POPCOUNT,
    LutNode,
    LutNetlist,
    build_macro_netlist,
    build_macro_netlist_for_shape,
    interpret_luts,
    interpret_luts_batch,
    interpret_macro,
    interpret_macro_batch,
    lower_to_luts,
    popcount_netlist,
    resource_report,
    validate_luts,
    validate_macro,
)
from dwngen.simulator import argmax, class_scores, predict
from dwngen.encoder import encode_sample

from conftest import blob_split, random_model, random_shape


def fixed_model(rng, shape, n):
    return random_model(rng, shape, frac_bits=n)


def test_macro_counts_sm50_shape(rng):
    # the real preset quantizes at n=7 and up (capacity 2**8 >= 200)
    m = fixed_model(rng, PRESETS["sm-50"], 7)
    net = build_macro_netlist(m)
    validate_macro(net)
    assert len(net.ge_nodes) == 3200
    assert len(net.lut_cells) == 50
    assert len(net.pop_nodes) == 5
    assert all(len(p.fanin) == 10 for p in net.pop_nodes)
    assert len(net.cmp_nodes) == 4


def test_macro_counts_sm10_shape(rng):
    m = fixed_model(rng, PRESETS["sm-10"], 8)
    net = build_macro_netlist(m)
    assert len(net.pop_nodes) == 5
    assert all(len(p.fanin) == 2 for p in net.pop_nodes)
    assert len(net.cmp_nodes) == 4


def test_single_class_degenerate(rng):
    m = fixed_model(rng, ModelConfig(2, 4, 2, 1, 3), 4)
    net = build_macro_netlist(m)
    assert net.cmp_nodes == ()
    low = lower_to_luts(net)
    words = np.array([[0, 0], [3, -5]])
    idx, _ = interpret_luts_batch(low, words)
    assert np.all(idx == 0)
    midx, _ = interpret_macro_batch(net, words)
    assert np.all(midx == 0)


def test_build_rejects_real_model(rng):
    m = random_model(rng, ModelConfig(2, 4, 2, 2, 1))
    with pytest.raises(ValueError, match="quantize"):
        build_macro_netlist(m)


def test_lut_cell_count_is_exact(rng):
    for _ in range(5):
        shape = random_shape(rng)
        m = fixed_model(rng, shape, 8)
        low = lower_to_luts(build_macro_netlist(m))
        assert low.counts_by_label()[LUT_LAYER] == shape.num_luts


def test_popcount3_is_one_full_adder():
    net = popcount_netlist(3, 6)
    assert len(net.nodes) == 2
    assert len(net.value_nets) == 2


def test_popcount_exhaustive_small():
    for B in range(1, 10):
        for k in (2, 3, 6):
            net = popcount_netlist(B, k)
            validate_luts(net)
            words = np.array(
                [[(x >> i) & 1 for i in range(B)] for x in range(1 << B)], dtype=np.int64
            )
            _, val = interpret_luts_batch(net, words)
            assert np.array_equal(val, [bin(x).count("1") for x in range(1 << B)]), (B, k)


def test_ge_sign_semantics():
    # one feature, k=2; LUT passes encoder bit 0 through (table = AND(b0, b0))
    n = 3
    m = DwnModel(
        "sign", 1, 2, 2, 1, 1,
        thresholds=np.array([[-0.5, 0.25]]),
        connections=[[0, 0]],
        truth_tables=(0b1000,),
        frac_bits=n,
    )
    mac = build_macro_netlist(m)
    low = lower_to_luts(mac)
    most_negative = -(1 << n)
    for net_eval in (lambda ws: interpret_macro(mac, ws), lambda ws: interpret_luts(low, ws)):
        assert net_eval([most_negative])[1] == 0  # -1.0 < -0.5
        assert net_eval([-4])[1] == 1  # -0.5 >= -0.5
        assert net_eval([3])[1] == 1


def test_ge_threshold_at_minimum_always_true():
    m = DwnModel(
        "low", 1, 2, 2, 1, 1,
        thresholds=np.array([[-1.0, 0.5]]),
        connections=[[0, 0]],
        truth_tables=(0b1000,),
        frac_bits=3,
    )
    low = lower_to_luts(build_macro_netlist(m))
    for word in range(-8, 8):
        idx, val = interpret_luts(low, [word])
        assert val == (1 if word >= -8 else 0)  # bit0 = [x >= -1.0], always 1
        assert val == 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_cross_level_equivalence_property(seed):
    rng = np.random.default_rng(seed)
    shape = random_shape(rng)
    n = int(rng.integers(1, 9))
    fmt = FixedPointFormat(n)
    lo, hi = fmt.mantissa_range()
    if shape.bits_per_feature > hi - lo + 1:
        return
    m = random_model(rng, shape, frac_bits=n)
    mac = build_macro_netlist(m)
    validate_macro(mac)
    low = lower_to_luts(mac)
    validate_luts(low)
    words = rng.integers(lo, hi + 1, size=(64, shape.num_features), dtype=np.int64)
    mi, mv = interpret_macro_batch(mac, words)
    li, lv = interpret_luts_batch(low, words)
    assert np.array_equal(mi, li)
    assert np.array_equal(mv, lv)
    si = predict(m, words * fmt.step)
    assert np.array_equal(mi, si)


def test_golden_chain_on_quantized_dataset(rng):
    data = blob_split(77, num_samples=150)
    m = random_model(rng, ModelConfig(4, 16, 4, 3, 2))
    n = 6
    qm = quantize_model(m, n)
    qd = quantize_dataset(data, n)
    words = np.round(qd.features * (1 << n)).astype(np.int64)
    mac = build_macro_netlist(qm)
    low = lower_to_luts(mac)
    mi, mv = interpret_macro_batch(mac, words)
    li, lv = interpret_luts_batch(low, words)
    si = predict(qm, qd.features)
    sv = np.array([argmax(class_scores(qm, encode_sample(qm, x)))[1] for x in qd.features])
    assert np.array_equal(mi, li) and np.array_equal(mi, si)
    assert np.array_equal(mv, lv) and np.array_equal(mv, sv)


def test_single_vs_batch_interpreters(rng):
    m = fixed_model(rng, ModelConfig(3, 6, 3, 2, 2), 5)
    mac = build_macro_netlist(m)
    low = lower_to_luts(mac)
    words = rng.integers(-32, 32, size=(10, 3), dtype=np.int64)
    mi, mv = interpret_macro_batch(mac, words)
    li, lv = interpret_luts_batch(low, words)
    for i, row in enumerate(words):
        assert interpret_macro(mac, row) == (mi[i], mv[i])
        assert interpret_luts(low, row) == (li[i], lv[i])


def test_interpreter_rejects_wrong_width(rng):
    m = fixed_model(rng, ModelConfig(2, 4, 2, 2, 1), 4)
    mac = build_macro_netlist(m)
    with pytest.raises(ValueError, match="input word"):
        interpret_macro(mac, [1000, 0])
    with pytest.raises(ValueError, match="expected 2"):
        interpret_macro(mac, [0, 0, 0])


def test_validate_luts_rejects_malformed():
    good = popcount_netlist(3, 6)
    bad_arity = LutNetlist(
        "bad", 3, 1, 2, good.nodes, good.index_nets, good.value_nets
    )
    with pytest.raises(ValueError, match="arity"):
        validate_luts(bad_arity)
    cyclic_nodes = (LutNode(3, 0b01, (4,), POPCOUNT), LutNode(4, 0b01, (3,), POPCOUNT))
    cyclic = LutNetlist("cyc", 3, 1, 6, cyclic_nodes, (CONST0,), (3,))
    with pytest.raises(ValueError, match="forward"):
        validate_luts(cyclic)


def test_breakdown_consistency(rng):
    shape = ModelConfig(3, 10, 4, 5, 3)
    m = fixed_model(rng, shape, 6)
    low = lower_to_luts(build_macro_netlist(m))
    report = resource_report(low, m)
    assert report.total == len(low.nodes)
    assert report.total == report.encoder + report.lut_layer + report.popcount + report.argmax
    assert report.lut_layer == shape.num_luts
    assert report.input_width == 7


def test_shape_netlist_counts_match_real_model(rng):
    shape = ModelConfig(3, 12, 4, 3, 4)
    m = fixed_model(rng, shape, 5)
    real = lower_to_luts(build_macro_netlist(m)).counts_by_label()
    synth = lower_to_luts(build_macro_netlist_for_shape(shape, 5)).counts_by_label()
    assert real == synth


def test_encoder_count_monotone_in_width():
    # strict growth per added bit at k=2; never decreasing at k=6
    shape2 = ModelConfig(2, 5, 2, 2, 1)
    counts2 = [
        lower_to_luts(build_macro_netlist_for_shape(shape2, w - 1)).counts_by_label()[ENCODER]
        for w in range(2, 8)
    ]
    assert all(b > a for a, b in zip(counts2, counts2[1:]))
    shape6 = ModelConfig(2, 5, 6, 2, 1)
    counts6 = [
        lower_to_luts(build_macro_netlist_for_shape(shape6, w - 1)).counts_by_label()[ENCODER]
        for w in range(2, 16)
    ]
    assert all(b >= a for a, b in zip(counts6, counts6[1:]))
    # chain length is ceil(w / (k-1)) per comparator
    assert counts6 == [2 * 5 * -(-w // 5) for w in range(2, 16)]


def test_argmax_cmp_count_is_classes_minus_one(rng):
    for C in (1, 2, 3, 4, 5, 7):
        shape = ModelConfig(2, 4, 3, C, 2)
        net = build_macro_netlist_for_shape(shape, 4)
        assert len(net.cmp_nodes) == C - 1 if C > 1 else not net.cmp_nodes


def test_report_csv_row(rng):
    m = fixed_model(rng, ModelConfig(2, 4, 2, 2, 1), 4)
    rep = resource_report(lower_to_luts(build_macro_netlist(m)), m)
    row = rep.to_csv_row()
    assert row.startswith(f"{m.name},5,")
    assert row.split(",")[-1] == str(rep.total)
    assert rep.to_dict()["total"] == rep.total
